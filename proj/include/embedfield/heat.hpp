#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "embedfield/field.hpp"
#include "embedfield/grid.hpp"

namespace embedfield {

/// Explicit-stencil coefficient DT * dt / dx^2. Throws std::invalid_argument
/// unless all inputs are positive.
double compute_gamma(double diffusivity, double dt, double dx);

/// Largest gamma for which the explicit 5-point update is stable.
inline constexpr double kMaxStableGamma = 0.25;

/// Dirichlet values per boundary face, indexed by Patch.
struct DirichletBoundary {
  std::array<std::vector<double>, 4> face_values;

  static DirichletBoundary uniform(const StructuredGrid& grid, double left, double bottom,
                                   double right, double top);
  std::vector<double>& operator[](Patch p) { return face_values[static_cast<int>(p)]; }
  const std::vector<double>& operator[](Patch p) const { return face_values[static_cast<int>(p)]; }
};

/// Copies each patch's face values into its adjacent cells, writing patches
/// in kPatchWriteOrder so corner cells end up with the last writer (top).
void seed_boundary_cells(FieldBuffer& T, const StructuredGrid& grid, const DirichletBoundary& bc);

/// One in-place sweep over interior cells, i outer and j inner, so later cells
/// see already-updated neighbours. Boundary cells are untouched. Returns the
/// largest absolute change.
double native_fd_step(FieldBuffer& T, double gamma, const StructuredGrid& grid);

/// Same stencil applied Jacobi-style (all neighbours from the old field).
/// Only used as a cross-check.
double jacobi_fd_step(FieldBuffer& T, double gamma, const StructuredGrid& grid);

/// A step implementation: updates T in place given gamma.
using HeatStep = std::function<void(FieldBuffer& T, double gamma)>;

struct HeatConfig {
  StructuredGrid grid;
  double diffusivity = 4e-5;  // m^2/s
  double dt = 0.005;          // s
  DirichletBoundary bc;
  double initial = 0.0;  // interior start value, K
  double tol = 1e-8;     // on max |dT| per sweep, K
  std::size_t max_iters = 1'000'000;
  /// Optional time-varying boundary; called before every sweep with the
  /// pseudo-time of that sweep.
  std::function<void(double time, DirichletBoundary& bc)> boundary_update;

  double gamma() const { return compute_gamma(diffusivity, dt, grid.dx); }
  /// Throws std::invalid_argument on an unstable gamma or inconsistent bc sizes.
  void validate() const;
};

/// Builds the square-plate configuration with fixed per-patch temperatures.
HeatConfig make_heat_config(const StructuredGrid& grid, double left, double bottom, double right,
                            double top);

struct SolveReport {
  FieldBuffer T;
  std::size_t iterations = 0;
  std::vector<double> residual_history;
  bool converged = false;
};

/// Seeds boundary cells and sweeps until the largest per-cell change drops
/// below tol or max_iters is reached. Non-convergence is reported, not thrown.
SolveReport solve_steady(const HeatConfig& config, const HeatStep& step);
SolveReport solve_steady(const HeatConfig& config);

/// Value at the geometric centre: the mean of the 1, 2 or 4 cells nearest it.
double centre_value(const FieldBuffer& T, const StructuredGrid& grid);

/// Temperatures along the vertical line x = lx/2, bottom to top, as rows of
/// (y, T). Averages the two middle columns when nx is even.
FieldBuffer centre_line(const FieldBuffer& T, const StructuredGrid& grid);

/// Largest |gamma * (sum of neighbours - 4 T)| over interior cells.
double stencil_residual(const FieldBuffer& T, double gamma, const StructuredGrid& grid);

}  // namespace embedfield
