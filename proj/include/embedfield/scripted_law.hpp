#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "embedfield/constitutive.hpp"
#include "embedfield/field.hpp"
#include "embedfield/nn_weights.hpp"
#include "embedfield/session.hpp"

namespace embedfield {

enum class LawKind { NativeHooke, ScriptedAnalytic, ScriptedArrayNN };

/// "native", "analytic", "nn".
std::string_view to_string(LawKind law);
std::optional<LawKind> parse_law(std::string_view text);

/// Loads an analytic law (the built-in one unless `script` is given) and
/// publishes the Lame constants as lame_1 / lame_2.
void install_analytic_law(Session& session, const LameParams& lame,
                          const std::optional<ScriptSource>& script = std::nullopt);

/// Loads an array-NN law, writes `weights` to `weights_json` and has the
/// guest read it back through load_weights(path).
void install_nn_law(Session& session, const WeightBundle& weights,
                    const std::filesystem::path& weights_json,
                    const std::optional<ScriptSource>& script = std::nullopt);

/// Thrown when a scripted evaluation overruns its deadline.
class Timeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

/// Stress from strain through the loaded guest law.
///
/// PerElementCopy sends one (6,) strain per call to predict; WholeFieldCopy
/// sends the whole (n, 6) field; ByReference publishes the strain read-only
/// and a preallocated stress buffer that predict_into fills in place.
FieldBuffer scripted_stress(Session& session, const FieldBuffer& strain, TransferStrategy strategy,
                            const Deadline& deadline = std::nullopt);

}  // namespace embedfield
