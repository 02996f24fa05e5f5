#include "embedfield/constitutive.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace embedfield {

LameParams lame_from_engineering(double youngs_modulus, double poisson_ratio) {
  if (!(youngs_modulus > 0.0)) throw std::invalid_argument("Young's modulus must be positive");
  if (!(poisson_ratio > -1.0 && poisson_ratio < 0.5)) {
    throw std::invalid_argument("Poisson ratio must lie in (-1, 0.5), got " +
                                std::to_string(poisson_ratio));
  }
  const double nu = poisson_ratio;
  return {youngs_modulus * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), youngs_modulus / (2.0 * (1.0 + nu))};
}

Matrix6 stiffness_matrix(const LameParams& p) {
  Matrix6 c{};
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) c[a][b] = p.lambda;
  }
  for (std::size_t k = 0; k < 6; ++k) c[k][k] += 2.0 * p.mu;
  return c;
}

void hooke_native_into(const FieldBuffer& strain, const LameParams& p, FieldBuffer& stress) {
  require_components(strain, symm::size, "hooke_native");
  if (stress.shape() != strain.shape()) stress.resize(strain.elements(), symm::size);
  const double two_mu = 2.0 * p.mu;
  const std::size_t n = strain.elements();
  const double* e = strain.data();
  double* s = stress.data();
  for (std::size_t i = 0; i < n; ++i, e += 6, s += 6) {
    const double volumetric = p.lambda * (e[0] + e[1] + e[2]);
    s[0] = two_mu * e[0] + volumetric;
    s[1] = two_mu * e[1] + volumetric;
    s[2] = two_mu * e[2] + volumetric;
    s[3] = two_mu * e[3];
    s[4] = two_mu * e[4];
    s[5] = two_mu * e[5];
  }
}

FieldBuffer hooke_native(const FieldBuffer& strain, const LameParams& p) {
  require_components(strain, symm::size, "hooke_native");
  FieldBuffer stress(strain.elements(), symm::size);
  hooke_native_into(strain, p, stress);
  return stress;
}

StrainRange StrainRange::symmetric(double half_width) {
  StrainRange r;
  r.min.fill(-half_width);
  r.max.fill(half_width);
  return r;
}

void StrainRange::validate() const {
  for (std::size_t k = 0; k < 6; ++k) {
    if (!(min[k] < max[k])) {
      throw std::invalid_argument("strain range component " + std::to_string(k) +
                                  " is degenerate (min >= max)");
    }
  }
}

FieldBuffer synth_strain_field(std::size_t n, std::uint64_t seed, const StrainRange& range) {
  range.validate();
  FieldBuffer strain(n, symm::size);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double* e = strain.data();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < 6; ++k) {
      *e++ = range.min[k] + (range.max[k] - range.min[k]) * unit(rng);
    }
  }
  return strain;
}

}  // namespace embedfield
