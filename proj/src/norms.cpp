#include "embedfield/norms.hpp"

#include <algorithm>
#include <cmath>

namespace embedfield {

ErrorNorms error_norms(const FieldBuffer& a, const FieldBuffer& b) {
  if (a.shape() != b.shape()) {
    throw ShapeMismatch("error_norms: shapes " + to_string(a.shape()) + " and " +
                        to_string(b.shape()) + " differ");
  }
  ErrorNorms norms;
  if (a.elements() == 0) return norms;
  double l2_sum = 0.0;
  for (std::size_t i = 0; i < a.elements(); ++i) {
    const auto ra = a.row(i);
    const auto rb = b.row(i);
    double sq = 0.0;
    for (std::size_t j = 0; j < ra.size(); ++j) {
      const double d = std::abs(ra[j] - rb[j]);
      norms.linf = std::max(norms.linf, d);
      sq += d * d;
    }
    l2_sum += std::sqrt(sq);
  }
  norms.l2_mean = l2_sum / static_cast<double>(a.elements());
  return norms;
}

double max_abs(const FieldBuffer& field) {
  double m = 0.0;
  for (double v : field.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace embedfield
