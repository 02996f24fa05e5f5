#include "embedfield/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace embedfield {

std::string_view to_string(Patch patch) {
  switch (patch) {
    case Patch::left: return "left";
    case Patch::bottom: return "bottom";
    case Patch::right: return "right";
    case Patch::top: return "top";
  }
  return "?";
}

std::optional<Patch> parse_patch(std::string_view name) {
  for (Patch p : kPatchWriteOrder) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::vector<std::size_t> StructuredGrid::patch_cells(Patch p) const {
  std::vector<std::size_t> cells;
  switch (p) {
    case Patch::left:
      for (std::size_t j = 0; j < ny; ++j) cells.push_back(cell(0, j));
      break;
    case Patch::right:
      for (std::size_t j = 0; j < ny; ++j) cells.push_back(cell(nx - 1, j));
      break;
    case Patch::bottom:
      for (std::size_t i = 0; i < nx; ++i) cells.push_back(cell(i, 0));
      break;
    case Patch::top:
      for (std::size_t i = 0; i < nx; ++i) cells.push_back(cell(i, ny - 1));
      break;
  }
  return cells;
}

StructuredGrid make_grid(std::size_t nx, std::size_t ny, double lx, double ly) {
  if (nx == 0 || ny == 0) throw std::invalid_argument("make_grid: cell counts must be >= 1");
  if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("make_grid: extents must be > 0");

  StructuredGrid g;
  g.nx = nx;
  g.ny = ny;
  g.lx = lx;
  g.ly = ly;
  g.dx = lx / static_cast<double>(nx);
  g.dy = ly / static_cast<double>(ny);
  if (std::abs(g.dx - g.dy) > 1e-12 * std::max(g.dx, g.dy)) {
    throw std::invalid_argument("make_grid: cells must be square (dx=" + std::to_string(g.dx) +
                                ", dy=" + std::to_string(g.dy) + ")");
  }

  auto along_x = [&](double y) {
    FieldBuffer f(nx, 3);
    for (std::size_t i = 0; i < nx; ++i) {
      f(i, 0) = g.cell_x(i);
      f(i, 1) = y;
    }
    return f;
  };
  auto along_y = [&](double x) {
    FieldBuffer f(ny, 3);
    for (std::size_t j = 0; j < ny; ++j) {
      f(j, 0) = x;
      f(j, 1) = g.cell_y(j);
    }
    return f;
  };
  g.face_centres[static_cast<int>(Patch::left)] = along_y(0.0);
  g.face_centres[static_cast<int>(Patch::bottom)] = along_x(0.0);
  g.face_centres[static_cast<int>(Patch::right)] = along_y(lx);
  g.face_centres[static_cast<int>(Patch::top)] = along_x(ly);
  return g;
}

}  // namespace embedfield
