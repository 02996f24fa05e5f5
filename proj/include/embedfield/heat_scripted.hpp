#pragma once

#include "embedfield/field.hpp"
#include "embedfield/heat.hpp"
#include "embedfield/session.hpp"

namespace embedfield {

/// One sweep done by the guest's calculate(T, gamma), moving T across the
/// boundary with the given strategy. With ByReference the guest updates the
/// host buffer in place and nothing is copied back.
void scripted_fd_step(Session& session, FieldBuffer& T, double gamma, TransferStrategy strategy);

/// Adapts scripted_fd_step to solve_steady's step interface.
HeatStep make_scripted_step(Session& session, TransferStrategy strategy);

/// Calls the guest's calculate(face_centres, time) on an (n, 3) patch and
/// returns the (n, 3) result. Throws GuestError(ShapeMismatch) on a
/// wrongly-shaped return.
FieldBuffer eval_scripted_profile(Session& session, const FieldBuffer& face_centres, double time);

/// Host-side evaluation of u_x = sin(pi t) sin(40 pi x).
double wall_velocity(double x, double time);

}  // namespace embedfield
