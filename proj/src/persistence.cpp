#include "paintph/persistence.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>

#include "paintph/errors.hpp"

namespace paintph {

namespace {

// Cell ids sorted by (value, id). Values are 8-bit, so a counting sort is
// both the fastest option and trivially stable.
std::vector<std::int32_t> filtration_order(std::span<const std::uint8_t> values) {
  std::array<std::int64_t, 257> start{};
  for (std::uint8_t v : values) ++start[v + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<std::int32_t> order(values.size());
  for (std::size_t id = 0; id < values.size(); ++id)
    order[start[values[id]]++] = static_cast<std::int32_t>(id);
  return order;
}

class ComponentForest {
 public:
  explicit ComponentForest(std::size_t n) : parent_(n), size_(n, 1), elder_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
    std::iota(elder_.begin(), elder_.end(), 0);
  }

  std::int32_t find(std::int32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Merge two distinct roots; the merged set keeps `survivor` as its elder.
  void merge(std::int32_t a, std::int32_t b, std::int32_t survivor) {
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    elder_[a] = survivor;
  }

  std::int32_t elder(std::int32_t root) const { return elder_[root]; }

 private:
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> size_;
  std::vector<std::int32_t> elder_;
};

struct ZeroDimensionalSweep {
  Barcode barcode{0, {}};
  std::vector<std::int32_t> edge_order;
  /// True for edges that close a cycle instead of merging two components.
  std::vector<char> positive_edge;
};

// Elder rule: when an edge joins two components, the one whose oldest vertex
// has the larger (value, id) dies at the edge's value. Ties in value resolve
// toward the smaller row-major vertex id.
ZeroDimensionalSweep sweep_components(const FilteredCubicalComplex& complex) {
  ZeroDimensionalSweep sweep;
  const auto vertex_values = complex.vertex_values();
  const auto edge_values = complex.edge_values();
  sweep.edge_order = filtration_order(edge_values);
  sweep.positive_edge.assign(edge_values.size(), 0);

  auto older = [&](std::int32_t a, std::int32_t b) {
    return vertex_values[a] != vertex_values[b] ? vertex_values[a] < vertex_values[b] : a < b;
  };

  ComponentForest forest(vertex_values.size());
  for (std::int32_t e : sweep.edge_order) {
    const auto [u, v] = complex.edge_vertices(e);
    const std::int32_t ru = forest.find(static_cast<std::int32_t>(u));
    const std::int32_t rv = forest.find(static_cast<std::int32_t>(v));
    if (ru == rv) {
      sweep.positive_edge[e] = 1;
      continue;
    }
    const std::int32_t eu = forest.elder(ru);
    const std::int32_t ev = forest.elder(rv);
    const std::int32_t survivor = older(eu, ev) ? eu : ev;
    const std::int32_t victim = survivor == eu ? ev : eu;
    const int birth = vertex_values[victim];
    const int death = edge_values[e];
    if (birth < death) sweep.barcode.intervals.push_back({birth, death});
    forest.merge(ru, rv, survivor);
  }

  const int global_min = *std::min_element(vertex_values.begin(), vertex_values.end());
  sweep.barcode.intervals.push_back({global_min, Interval::kEssential});
  std::sort(sweep.barcode.intervals.begin(), sweep.barcode.intervals.end());
  return sweep;
}

// Column reduction of the square boundary matrix in filtration order. Rows of
// negative edges (those that killed a component in the sweep) can never be a
// pivot of a reduced square column, so they are dropped from every column up
// front; only cycle-creating edges remain as rows.
Barcode reduce_squares(const FilteredCubicalComplex& complex, const ZeroDimensionalSweep& sweep) {
  Barcode barcode{1, {}};
  const auto edge_values = complex.edge_values();
  const auto square_values = complex.square_values();

  std::vector<std::int32_t> rank(edge_values.size());
  for (std::size_t r = 0; r < sweep.edge_order.size(); ++r)
    rank[sweep.edge_order[r]] = static_cast<std::int32_t>(r);

  std::vector<std::int32_t> pivot_column(edge_values.size(), -1);
  std::vector<std::vector<std::int32_t>> reduced;
  std::vector<std::int32_t> column, scratch;

  const auto square_order = filtration_order(square_values);
  std::size_t pivots = 0;
  for (std::int32_t s : square_order) {
    column.clear();
    for (Index e : complex.square_edges(s))
      if (sweep.positive_edge[e]) column.push_back(rank[e]);
    std::sort(column.begin(), column.end());

    while (!column.empty() && pivot_column[column.back()] >= 0) {
      const auto& other = reduced[pivot_column[column.back()]];
      scratch.clear();
      std::set_symmetric_difference(column.begin(), column.end(), other.begin(), other.end(),
                                    std::back_inserter(scratch));
      column.swap(scratch);
    }
    if (column.empty()) continue;

    const std::int32_t low = column.back();
    pivot_column[low] = static_cast<std::int32_t>(reduced.size());
    reduced.push_back(column);
    ++pivots;
    const int birth = edge_values[sweep.edge_order[low]];
    const int death = square_values[s];
    if (birth < death) barcode.intervals.push_back({birth, death});
  }

  const auto positive = static_cast<std::size_t>(
      std::count(sweep.positive_edge.begin(), sweep.positive_edge.end(), 1));
  if (pivots != positive)
    throw std::logic_error("reduce_squares: unpaired 1-cycle in a contractible grid");

  std::sort(barcode.intervals.begin(), barcode.intervals.end());
  return barcode;
}

}  // namespace

Barcode compute_barcode(const FilteredCubicalComplex& complex, int dimension) {
  if (dimension == 0) return sweep_components(complex).barcode;
  if (dimension == 1) return reduce_squares(complex, sweep_components(complex));
  throw ContractViolation("compute_barcode: dimension must be 0 or 1");
}

BarcodePair compute_barcodes(const FilteredCubicalComplex& complex) {
  ZeroDimensionalSweep sweep = sweep_components(complex);
  Barcode h1 = reduce_squares(complex, sweep);
  return {std::move(sweep.barcode), std::move(h1)};
}

int betti_at(const Barcode& barcode, int t) {
  if (t < 0 || t > 255) throw ContractViolation("betti_at: threshold outside [0,255]");
  return static_cast<int>(std::count_if(barcode.intervals.begin(), barcode.intervals.end(),
                                        [t](const Interval& i) { return i.contains(t); }));
}

}  // namespace paintph
