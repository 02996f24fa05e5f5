#pragma once

#include <array>
#include <cstdint>

#include "embedfield/field.hpp"

namespace embedfield {

/// Isotropic elastic constants.
struct LameParams {
  double lambda = 0.0;  // first Lame parameter, Pa
  double mu = 0.0;      // shear modulus, Pa
};

/// mu = E / (2(1+nu)), lambda = E nu / ((1+nu)(1-2nu)). Requires E > 0 and
/// -1 < nu < 0.5; throws std::invalid_argument otherwise.
LameParams lame_from_engineering(double youngs_modulus, double poisson_ratio);

using Matrix6 = std::array<std::array<double, 6>, 6>;

/// sigma = stiffness * eps in packed [xx, yy, zz, xy, yz, zx] order, with
/// tensor (not engineering) shear strains.
Matrix6 stiffness_matrix(const LameParams& p);

/// sigma = 2 mu eps + lambda tr(eps) I, element by element.
FieldBuffer hooke_native(const FieldBuffer& strain, const LameParams& p);
void hooke_native_into(const FieldBuffer& strain, const LameParams& p, FieldBuffer& stress);

/// Per-component [min, max] bounds of a strain sample.
struct StrainRange {
  std::array<double, 6> min{};
  std::array<double, 6> max{};

  static StrainRange symmetric(double half_width);
  /// Throws std::invalid_argument unless min < max in every component.
  void validate() const;
};

inline constexpr double kDefaultStrainHalfWidth = 2e-3;

/// Deterministic uniform strain samples inside `range`; same (n, seed, range)
/// always yields the same field.
FieldBuffer synth_strain_field(std::size_t n, std::uint64_t seed,
                               const StrainRange& range = StrainRange::symmetric(kDefaultStrainHalfWidth));

}  // namespace embedfield
