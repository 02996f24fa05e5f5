#pragma once

#include "embedfield/field.hpp"

namespace embedfield {

/// Difference norms between two fields of equal shape.
struct ErrorNorms {
  /// Mean over elements of the Euclidean norm of the per-element difference.
  double l2_mean = 0.0;
  /// Largest absolute component difference.
  double linf = 0.0;

  bool operator==(const ErrorNorms&) const = default;
};

ErrorNorms error_norms(const FieldBuffer& a, const FieldBuffer& b);

/// Largest absolute value in a field (0 for an empty field).
double max_abs(const FieldBuffer& field);

}  // namespace embedfield
