#include "paintph/oracle.hpp"

#include <numeric>
#include <vector>

#include "paintph/errors.hpp"

namespace paintph {

namespace {

struct SublevelCounts {
  int components = 0;
  long vertices = 0;
  long edges = 0;
  long squares = 0;
};

// Everything is rebuilt from the thresholded pixels alone; nothing is shared
// with the filtration or the reduction code.
SublevelCounts count_sublevel(const IntensityGrid& grid, int t) {
  const Index h = grid.rows();
  const Index w = grid.cols();
  auto black = [&](Index y, Index x) { return static_cast<int>(grid(y, x)) <= t; };

  std::vector<Index> parent(static_cast<std::size_t>(h * w));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  SublevelCounts counts;
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      if (!black(y, x)) continue;
      ++counts.vertices;
      if (x + 1 < w && black(y, x + 1)) {
        ++counts.edges;
        parent[find(y * w + x)] = find(y * w + x + 1);
      }
      if (y + 1 < h && black(y + 1, x)) {
        ++counts.edges;
        parent[find(y * w + x)] = find((y + 1) * w + x);
      }
      if (x + 1 < w && y + 1 < h && black(y, x + 1) && black(y + 1, x) && black(y + 1, x + 1))
        ++counts.squares;
    }
  }
  for (Index y = 0; y < h; ++y)
    for (Index x = 0; x < w; ++x)
      if (black(y, x) && find(y * w + x) == y * w + x) ++counts.components;
  return counts;
}

}  // namespace

std::array<int, 256> oracle_betti_curve(const IntensityGrid& grid, int dimension) {
  if (dimension != 0 && dimension != 1)
    throw ContractViolation("oracle_betti_curve: dimension must be 0 or 1");
  std::array<int, 256> curve{};
  for (int t = 0; t < 256; ++t) {
    const SublevelCounts c = count_sublevel(grid, t);
    // Euler characteristic: V - E + F = b0 - b1.
    curve[t] = dimension == 0
                   ? c.components
                   : static_cast<int>(c.components - c.vertices + c.edges - c.squares);
  }
  return curve;
}

}  // namespace paintph
