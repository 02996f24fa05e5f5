#include "embedfield/tensor.hpp"

namespace embedfield {

FieldBuffer symmetrize_gradient(const FieldBuffer& grad) {
  require_components(grad, grad9::size, "symmetrize_gradient");
  FieldBuffer eps(grad.elements(), symm::size);
  for (std::size_t i = 0; i < grad.elements(); ++i) {
    const auto g = grad.row(i);
    auto e = eps.row(i);
    e[symm::xx] = g[grad9::xx];
    e[symm::yy] = g[grad9::yy];
    e[symm::zz] = g[grad9::zz];
    e[symm::xy] = 0.5 * (g[grad9::xy] + g[grad9::yx]);
    e[symm::yz] = 0.5 * (g[grad9::yz] + g[grad9::zy]);
    e[symm::zx] = 0.5 * (g[grad9::zx] + g[grad9::xz]);
  }
  return eps;
}

FieldBuffer expand_symmetric(const FieldBuffer& packed) {
  require_components(packed, symm::size, "expand_symmetric");
  FieldBuffer full(packed.elements(), grad9::size);
  for (std::size_t i = 0; i < packed.elements(); ++i) {
    const auto s = packed.row(i);
    auto f = full.row(i);
    f[grad9::xx] = s[symm::xx];
    f[grad9::yy] = s[symm::yy];
    f[grad9::zz] = s[symm::zz];
    f[grad9::xy] = f[grad9::yx] = s[symm::xy];
    f[grad9::yz] = f[grad9::zy] = s[symm::yz];
    f[grad9::zx] = f[grad9::xz] = s[symm::zx];
  }
  return full;
}

}  // namespace embedfield
