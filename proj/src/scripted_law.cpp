#include "embedfield/scripted_law.hpp"

#include <algorithm>
#include <string>

#include "json.hpp"

#include "embedfield/guest_sources.hpp"

namespace embedfield {

std::string_view to_string(LawKind law) {
  switch (law) {
    case LawKind::NativeHooke: return "native";
    case LawKind::ScriptedAnalytic: return "analytic";
    case LawKind::ScriptedArrayNN: return "nn";
  }
  return "?";
}

std::optional<LawKind> parse_law(std::string_view text) {
  for (auto law : {LawKind::NativeHooke, LawKind::ScriptedAnalytic, LawKind::ScriptedArrayNN}) {
    if (to_string(law) == text) return law;
  }
  return std::nullopt;
}

void install_analytic_law(Session& session, const LameParams& lame,
                          const std::optional<ScriptSource>& script) {
  session.load_script(script ? *script
                             : ScriptSource::text(std::string(guest::kAnalyticLaw), "<analytic-law>"));
  session.set_scalar("lame_1", lame.lambda);
  session.set_scalar("lame_2", lame.mu);
}

void install_nn_law(Session& session, const WeightBundle& weights,
                    const std::filesystem::path& weights_json,
                    const std::optional<ScriptSource>& script) {
  save_weights(weights_json, weights);
  session.load_script(script ? *script
                             : ScriptSource::text(std::string(guest::kArrayNnLaw), "<array-nn-law>"));
  // A JSON string literal is also a valid Python string literal.
  session.exec("load_weights(" + nlohmann::json(weights_json.string()).dump() + ")");
}

namespace {

void check_deadline(const Deadline& deadline) {
  if (deadline && std::chrono::steady_clock::now() > *deadline) {
    throw Timeout("scripted_stress: deadline exceeded");
  }
}

}  // namespace

FieldBuffer scripted_stress(Session& session, const FieldBuffer& strain, TransferStrategy strategy,
                            const Deadline& deadline) {
  require_components(strain, symm::size, "scripted_stress");
  const std::size_t n = strain.elements();

  switch (strategy) {
    case TransferStrategy::PerElementCopy: {
      FieldBuffer stress(n, symm::size);
      for (std::size_t i = 0; i < n; ++i) {
        if ((i & 0x3ff) == 0) check_deadline(deadline);
        session.put_element("strain_cell", strain, i);
        session.exec("stress_cell = predict(strain_cell.reshape(1, 6))[0]");
        const auto row = session.get_element("stress_cell", symm::size);
        std::copy(row.begin(), row.end(), stress.row(i).begin());
      }
      return stress;
    }

    case TransferStrategy::WholeFieldCopy:
      session.put_field_copy("strain", strain);
      session.exec("stress = predict(strain)");
      return session.get_field_copy("stress", strain.shape());

    case TransferStrategy::ByReference: {
      FieldBuffer stress(n, symm::size);
      RefLease strain_lease = session.publish_by_ref("strain", strain);
      RefLease stress_lease = session.publish_by_ref("stress", stress);
      session.exec("predict_into(strain, stress)");
      stress_lease.release();
      strain_lease.release();
      return stress;
    }
  }
  return {};
}

}  // namespace embedfield
