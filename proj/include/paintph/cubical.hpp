#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "paintph/grid.hpp"

namespace paintph {

/// Pixels with value <= threshold become black (true).
BitGrid binarize(const IntensityGrid& grid, int threshold);

/// Sublevel-set filtration of the V-construction over a w x h pixel grid.
///
/// Cells and their ids (row-major within each family):
///   vertex (x, y)                       id = y * w + x
///   horizontal edge (x, y)-(x+1, y)     id = y * (w - 1) + x
///   vertical edge   (x, y)-(x, y+1)     id = h * (w - 1) + y * w + x
///   square with lower corner (x, y)     id = y * (w - 1) + x
///
/// A vertex carries its pixel value; edges and squares carry the maximum over
/// their corner pixels, so the cells with value <= t form exactly the complex
/// spanned by the black pixels of binarize(grid, t).
class FilteredCubicalComplex {
 public:
  explicit FilteredCubicalComplex(const IntensityGrid& grid);

  Index width() const { return width_; }
  Index height() const { return height_; }

  Index num_vertices() const { return static_cast<Index>(vertex_values_.size()); }
  Index num_edges() const { return static_cast<Index>(edge_values_.size()); }
  Index num_squares() const { return static_cast<Index>(square_values_.size()); }
  Index num_horizontal_edges() const { return height_ * (width_ - 1); }
  Index num_cells(int dimension) const;

  std::uint8_t vertex_value(Index v) const { return vertex_values_[v]; }
  std::uint8_t edge_value(Index e) const { return edge_values_[e]; }
  std::uint8_t square_value(Index s) const { return square_values_[s]; }
  std::uint8_t value(int dimension, Index id) const;

  std::span<const std::uint8_t> vertex_values() const { return vertex_values_; }
  std::span<const std::uint8_t> edge_values() const { return edge_values_; }
  std::span<const std::uint8_t> square_values() const { return square_values_; }

  std::array<Index, 2> edge_vertices(Index e) const;
  /// Bottom, top, left, right.
  std::array<Index, 4> square_edges(Index s) const;
  std::array<Index, 4> square_vertices(Index s) const;

  bool in_sublevel(int dimension, Index id, int threshold) const {
    return value(dimension, id) <= threshold;
  }

 private:
  Index width_;
  Index height_;
  std::vector<std::uint8_t> vertex_values_;
  std::vector<std::uint8_t> edge_values_;
  std::vector<std::uint8_t> square_values_;
};

FilteredCubicalComplex build_filtration(const IntensityGrid& grid);

}  // namespace paintph
