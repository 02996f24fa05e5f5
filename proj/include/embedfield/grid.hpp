#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "embedfield/field.hpp"

namespace embedfield {

/// Boundary sides, enumerated in the order boundary values are written.
enum class Patch { left, bottom, right, top };

inline constexpr std::array<Patch, 4> kPatchWriteOrder = {Patch::left, Patch::bottom, Patch::right,
                                                          Patch::top};

std::string_view to_string(Patch patch);
std::optional<Patch> parse_patch(std::string_view name);

/// Uniform 2-D grid with square cells. Cell (i, j) has x-index i and y-index
/// j and is stored at flat index i * ny + j.
struct StructuredGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double lx = 0.0;
  double ly = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  /// Face centres (x, y, z) per patch, indexed by Patch. Top and bottom run
  /// along x, left and right along y, both in increasing coordinate order.
  std::array<FieldBuffer, 4> face_centres;

  std::size_t cell_count() const { return nx * ny; }
  std::size_t cell(std::size_t i, std::size_t j) const { return i * ny + j; }
  const FieldBuffer& patch_faces(Patch p) const { return face_centres[static_cast<int>(p)]; }
  /// Flat indices of the cells adjacent to a patch, in face order.
  std::vector<std::size_t> patch_cells(Patch p) const;
  /// Cell-centre coordinate along x (index i) or y (index j).
  double cell_x(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dx; }
  double cell_y(std::size_t j) const { return (static_cast<double>(j) + 0.5) * dy; }
};

/// Throws std::invalid_argument for zero counts, non-positive extents, or
/// cells that are not square (relative tolerance 1e-12).
StructuredGrid make_grid(std::size_t nx, std::size_t ny, double lx, double ly);

}  // namespace embedfield
