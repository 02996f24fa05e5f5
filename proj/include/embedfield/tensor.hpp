#pragma once

#include "embedfield/field.hpp"

namespace embedfield {

/// Row-major slots of a full 3x3 gradient: xx,xy,xz,yx,yy,yz,zx,zy,zz.
namespace grad9 {
inline constexpr std::size_t xx = 0, xy = 1, xz = 2;
inline constexpr std::size_t yx = 3, yy = 4, yz = 5;
inline constexpr std::size_t zx = 6, zy = 7, zz = 8;
inline constexpr std::size_t size = 9;
}  // namespace grad9

/// Small-strain tensor from a displacement gradient: (G + G^T) / 2 per
/// element, packed as [xx, yy, zz, xy, yz, zx]. Throws ShapeMismatch unless the
/// input has 9 components.
FieldBuffer symmetrize_gradient(const FieldBuffer& grad);

/// Unpacks a 6-component symmetric tensor field back to 9 row-major components.
FieldBuffer expand_symmetric(const FieldBuffer& packed);

}  // namespace embedfield
