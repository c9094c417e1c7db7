#include "paintph/cubical.hpp"

#include <algorithm>

#include "paintph/errors.hpp"

namespace paintph {

BitGrid binarize(const IntensityGrid& grid, int threshold) {
  if (threshold < 0 || threshold > 255) throw ContractViolation("binarize: threshold outside [0,255]");
  return grid.cast<int>() <= threshold;
}

FilteredCubicalComplex::FilteredCubicalComplex(const IntensityGrid& grid)
    : width_(grid.cols()), height_(grid.rows()) {
  if (width_ < 1 || height_ < 1) throw ContractViolation("build_filtration: empty grid");
  const Index w = width_;
  const Index h = height_;

  vertex_values_.assign(grid.data(), grid.data() + w * h);

  edge_values_.resize(h * (w - 1) + (h - 1) * w);
  Index e = 0;
  for (Index y = 0; y < h; ++y)
    for (Index x = 0; x + 1 < w; ++x) edge_values_[e++] = std::max(grid(y, x), grid(y, x + 1));
  for (Index y = 0; y + 1 < h; ++y)
    for (Index x = 0; x < w; ++x) edge_values_[e++] = std::max(grid(y, x), grid(y + 1, x));

  square_values_.resize((h - 1) * (w - 1));
  Index s = 0;
  for (Index y = 0; y + 1 < h; ++y)
    for (Index x = 0; x + 1 < w; ++x)
      square_values_[s++] =
          std::max({grid(y, x), grid(y, x + 1), grid(y + 1, x), grid(y + 1, x + 1)});
}

Index FilteredCubicalComplex::num_cells(int dimension) const {
  switch (dimension) {
    case 0: return num_vertices();
    case 1: return num_edges();
    case 2: return num_squares();
    default: throw ContractViolation("cubical complex has cells of dimension 0..2 only");
  }
}

std::uint8_t FilteredCubicalComplex::value(int dimension, Index id) const {
  switch (dimension) {
    case 0: return vertex_values_[id];
    case 1: return edge_values_[id];
    case 2: return square_values_[id];
    default: throw ContractViolation("cubical complex has cells of dimension 0..2 only");
  }
}

std::array<Index, 2> FilteredCubicalComplex::edge_vertices(Index e) const {
  const Index nh = num_horizontal_edges();
  if (e < nh) {
    const Index y = e / (width_ - 1);
    const Index x = e % (width_ - 1);
    return {y * width_ + x, y * width_ + x + 1};
  }
  const Index v = e - nh;
  return {v, v + width_};
}

std::array<Index, 4> FilteredCubicalComplex::square_edges(Index s) const {
  const Index y = s / (width_ - 1);
  const Index x = s % (width_ - 1);
  const Index nh = num_horizontal_edges();
  return {y * (width_ - 1) + x, (y + 1) * (width_ - 1) + x, nh + y * width_ + x,
          nh + y * width_ + x + 1};
}

std::array<Index, 4> FilteredCubicalComplex::square_vertices(Index s) const {
  const Index y = s / (width_ - 1);
  const Index x = s % (width_ - 1);
  const Index v = y * width_ + x;
  return {v, v + 1, v + width_, v + width_ + 1};
}

FilteredCubicalComplex build_filtration(const IntensityGrid& grid) {
  return FilteredCubicalComplex(grid);
}

}  // namespace paintph
