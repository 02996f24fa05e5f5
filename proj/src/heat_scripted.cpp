#include "embedfield/heat_scripted.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "embedfield/guest_sources.hpp"

namespace embedfield {

void scripted_fd_step(Session& session, FieldBuffer& T, double gamma, TransferStrategy strategy) {
  require_components(T, 1, "scripted_fd_step");
  session.set_scalar("gamma", gamma);
  const std::size_t n = T.elements();

  switch (strategy) {
    case TransferStrategy::WholeFieldCopy:
      session.put_field_copy("T", T);
      session.exec("T = calculate(T, gamma)");
      T = session.get_field_copy("T", T.shape());
      break;

    case TransferStrategy::ByReference: {
      RefLease lease = session.publish_by_ref("T", T);
      session.exec("calculate(T, gamma)");
      lease.release();
      break;
    }

    case TransferStrategy::PerElementCopy: {
      session.exec("T = " + std::string(guest::kInternalPrefix) + "np.zeros(" + std::to_string(n) +
                   ")");
      for (std::size_t i = 0; i < n; ++i) {
        session.put_element("T_cell", T, i);
        session.exec("T[" + std::to_string(i) + "] = T_cell");
      }
      session.exec("T = calculate(T, gamma)");
      for (std::size_t i = 0; i < n; ++i) {
        session.exec("T_cell = float(T[" + std::to_string(i) + "])");
        T[i] = session.get_element("T_cell", 1)[0];
      }
      break;
    }
  }
}

HeatStep make_scripted_step(Session& session, TransferStrategy strategy) {
  return [&session, strategy](FieldBuffer& T, double gamma) {
    scripted_fd_step(session, T, gamma, strategy);
  };
}

FieldBuffer eval_scripted_profile(Session& session, const FieldBuffer& face_centres, double time) {
  require_components(face_centres, 3, "eval_scripted_profile");
  session.put_field_copy("face_centres", face_centres);
  session.set_scalar("time", time);
  session.exec("velocities = calculate(face_centres, time)");
  return session.get_field_copy("velocities", face_centres.shape());
}

double wall_velocity(double x, double time) {
  constexpr double pi = std::numbers::pi;
  return std::sin(pi * time) * std::sin(40 * pi * x);
}

}  // namespace embedfield
