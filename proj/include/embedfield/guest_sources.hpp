#pragma once

#include <string_view>

namespace embedfield::guest {

/// Executed at every session open. Defines the helper that turns a published
/// (address, shape) pair into an array view over host memory.
extern const std::string_view kViewPreamble;

/// Name of the preamble helper and the prefix reserved for bridge internals.
inline constexpr std::string_view kViewHelper = "_embedfield_view";
inline constexpr std::string_view kInternalPrefix = "_embedfield_";

/// Hooke's law on (n, 6) strains. Reads `lame_1` (lambda) and `lame_2` (mu)
/// from the scope. Defines predict(strain) and predict_into(strain, stress).
extern const std::string_view kAnalyticLaw;

/// Array-only 6-20-6 network with min-max scalers. Defines
/// load_weights(path), neural_prediction, predict and predict_into.
extern const std::string_view kArrayNnLaw;

/// In-place explicit sweep over a flat square temperature field:
/// calculate(T, gamma) -> T.
extern const std::string_view kHeatStep;

/// Wall-velocity profile u_x = sin(pi t) sin(40 pi x):
/// calculate(face_centres, time) -> (n, 3).
extern const std::string_view kWallProfile;

}  // namespace embedfield::guest
