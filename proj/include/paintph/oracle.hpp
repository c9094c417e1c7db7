#pragma once

#include <array>

#include "paintph/grid.hpp"

namespace paintph {

/// Betti curve recomputed from scratch at every threshold: b0 by union-find
/// over the black pixels, b1 from the Euler characteristic of the sublevel
/// complex. Quadratic in the grid size per threshold; meant for small grids
/// in tests.
std::array<int, 256> oracle_betti_curve(const IntensityGrid& grid, int dimension);

}  // namespace paintph
