#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace paintph {

using Index = Eigen::Index;

/// Row-major 2D grid indexed as (row, col) == (y, x).
template <typename Scalar>
using Grid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One channel of one image, intensities on the 0..255 scale.
using IntensityGrid = Grid<std::uint8_t>;

/// Thresholded channel; true marks a black (included) pixel.
using BitGrid = Grid<bool>;

}  // namespace paintph
