#pragma once

#include "ppnet/core/tensor.hpp"

namespace ppnet {

/// Elements of the dihedral group of the square. Transform id = rotations +
/// 4 * reflected: the image is first mirrored left-right when reflected, then
/// rotated by `rotations` quarter turns counter-clockwise.
inline constexpr int kDihedralCount = 8;

/// Applies transform `transform_id` to the spatial axes of a
/// channel x row x column array (all channels identically).
template <typename T>
Tensor<T> augment(const Tensor<T>& image, int transform_id);

/// Id of the transform equal to applying `first`, then `second`.
int dihedral_compose(int first, int second);
int dihedral_inverse(int transform_id);

}  // namespace ppnet
