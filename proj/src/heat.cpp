#include "embedfield/heat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace embedfield {

double compute_gamma(double diffusivity, double dt, double dx) {
  if (!(diffusivity > 0.0) || !(dt > 0.0) || !(dx > 0.0)) {
    throw std::invalid_argument("compute_gamma: diffusivity, dt and dx must be positive");
  }
  return diffusivity * dt * (1.0 / dx) * (1.0 / dx);
}

DirichletBoundary DirichletBoundary::uniform(const StructuredGrid& grid, double left, double bottom,
                                             double right, double top) {
  DirichletBoundary bc;
  bc[Patch::left].assign(grid.ny, left);
  bc[Patch::right].assign(grid.ny, right);
  bc[Patch::bottom].assign(grid.nx, bottom);
  bc[Patch::top].assign(grid.nx, top);
  return bc;
}

namespace {

void require_grid_field(const FieldBuffer& T, const StructuredGrid& grid, const char* op) {
  if (T.components() != 1 || T.elements() != grid.cell_count()) {
    throw ShapeMismatch(std::string(op) + ": temperature field " + to_string(T.shape()) +
                        " does not match a " + std::to_string(grid.nx) + "x" +
                        std::to_string(grid.ny) + " grid");
  }
}

}  // namespace

void seed_boundary_cells(FieldBuffer& T, const StructuredGrid& grid, const DirichletBoundary& bc) {
  require_grid_field(T, grid, "seed_boundary_cells");
  for (Patch p : kPatchWriteOrder) {
    const auto cells = grid.patch_cells(p);
    const auto& values = bc[p];
    if (values.size() != cells.size()) {
      throw ShapeMismatch("seed_boundary_cells: patch " + std::string(to_string(p)) + " has " +
                          std::to_string(values.size()) + " values for " +
                          std::to_string(cells.size()) + " faces");
    }
    for (std::size_t f = 0; f < cells.size(); ++f) T[cells[f]] = values[f];
  }
}

// The expression order matters: it is evaluated exactly like the guest
// script so both produce identical doubles.
double native_fd_step(FieldBuffer& T, double gamma, const StructuredGrid& grid) {
  require_grid_field(T, grid, "native_fd_step");
  const std::size_t nx = grid.nx;
  const std::size_t ny = grid.ny;
  double max_change = 0.0;
  for (std::size_t i = 1; i + 1 < nx; ++i) {
    for (std::size_t j = 1; j + 1 < ny; ++j) {
      const std::size_t c = i * ny + j;
      const double old = T[c];
      const double updated =
          gamma * (T[c + 1] + T[c - 1] + T[c + ny] + T[c - ny] - 4.0 * old) + old;
      max_change = std::max(max_change, std::abs(updated - old));
      T[c] = updated;
    }
  }
  return max_change;
}

double jacobi_fd_step(FieldBuffer& T, double gamma, const StructuredGrid& grid) {
  require_grid_field(T, grid, "jacobi_fd_step");
  const FieldBuffer old = T;
  const std::size_t ny = grid.ny;
  double max_change = 0.0;
  for (std::size_t i = 1; i + 1 < grid.nx; ++i) {
    for (std::size_t j = 1; j + 1 < ny; ++j) {
      const std::size_t c = i * ny + j;
      T[c] = gamma * (old[c + 1] + old[c - 1] + old[c + ny] + old[c - ny] - 4.0 * old[c]) + old[c];
      max_change = std::max(max_change, std::abs(T[c] - old[c]));
    }
  }
  return max_change;
}

void HeatConfig::validate() const {
  const double g = gamma();
  if (g > kMaxStableGamma) {
    throw std::invalid_argument("heat: gamma = " + std::to_string(g) +
                                " exceeds the explicit stability limit 0.25");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("heat: tol must be positive");
  if (max_iters == 0) throw std::invalid_argument("heat: max_iters must be >= 1");
  for (Patch p : kPatchWriteOrder) {
    const std::size_t expected =
        (p == Patch::left || p == Patch::right) ? grid.ny : grid.nx;
    if (bc[p].size() != expected) {
      throw std::invalid_argument("heat: boundary " + std::string(to_string(p)) + " needs " +
                                  std::to_string(expected) + " values");
    }
  }
}

HeatConfig make_heat_config(const StructuredGrid& grid, double left, double bottom, double right,
                            double top) {
  HeatConfig cfg;
  cfg.grid = grid;
  cfg.bc = DirichletBoundary::uniform(grid, left, bottom, right, top);
  return cfg;
}

SolveReport solve_steady(const HeatConfig& config, const HeatStep& step) {
  config.validate();
  const double gamma = config.gamma();
  const auto& grid = config.grid;

  SolveReport report;
  report.T = FieldBuffer(grid.cell_count(), 1, config.initial);
  DirichletBoundary bc = config.bc;
  FieldBuffer previous;

  while (report.iterations < config.max_iters) {
    if (config.boundary_update) {
      config.boundary_update(static_cast<double>(report.iterations) * config.dt, bc);
    }
    seed_boundary_cells(report.T, grid, bc);
    previous = report.T;
    step(report.T, gamma);
    if (report.T.shape() != previous.shape()) {
      throw ShapeMismatch("solve_steady: step changed the field shape");
    }
    double change = 0.0;
    for (std::size_t k = 0; k < previous.size(); ++k) {
      change = std::max(change, std::abs(report.T[k] - previous[k]));
    }
    report.residual_history.push_back(change);
    ++report.iterations;
    if (change < config.tol) {
      report.converged = true;
      break;
    }
  }
  return report;
}

SolveReport solve_steady(const HeatConfig& config) {
  const auto& grid = config.grid;
  return solve_steady(config,
                      [&grid](FieldBuffer& T, double gamma) { native_fd_step(T, gamma, grid); });
}

double centre_value(const FieldBuffer& T, const StructuredGrid& grid) {
  auto middle = [](std::size_t n) {
    return n % 2 == 1 ? std::vector<std::size_t>{n / 2} : std::vector<std::size_t>{n / 2 - 1, n / 2};
  };
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i : middle(grid.nx)) {
    for (std::size_t j : middle(grid.ny)) {
      sum += T[grid.cell(i, j)];
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

FieldBuffer centre_line(const FieldBuffer& T, const StructuredGrid& grid) {
  require_grid_field(T, grid, "centre_line");
  FieldBuffer line(grid.ny, 2);
  const std::size_t hi = grid.nx / 2;
  const std::size_t lo = grid.nx % 2 == 1 ? hi : hi - 1;
  for (std::size_t j = 0; j < grid.ny; ++j) {
    line(j, 0) = grid.cell_y(j);
    line(j, 1) = 0.5 * (T[grid.cell(lo, j)] + T[grid.cell(hi, j)]);
  }
  return line;
}

double stencil_residual(const FieldBuffer& T, double gamma, const StructuredGrid& grid) {
  require_grid_field(T, grid, "stencil_residual");
  const std::size_t ny = grid.ny;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < grid.nx; ++i) {
    for (std::size_t j = 1; j + 1 < ny; ++j) {
      const std::size_t c = i * ny + j;
      worst = std::max(worst, std::abs(gamma * (T[c + 1] + T[c - 1] + T[c + ny] + T[c - ny] -
                                                4.0 * T[c])));
    }
  }
  return worst;
}

}  // namespace embedfield
