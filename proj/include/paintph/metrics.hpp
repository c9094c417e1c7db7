#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "paintph/assignment.hpp"
#include "paintph/bipartite_matching.hpp"
#include "paintph/errors.hpp"
#include "paintph/persistence.hpp"

namespace paintph {

class DistanceMatrix;

enum class Norm { l1, linf };
enum class Metric { bottleneck, wasserstein1 };

std::string_view metric_name(Metric m);
std::optional<Metric> parse_metric(std::string_view name);

/// Finite point of a persistence diagram (essential classes already capped).
template <typename Scalar>
struct DiagramPoint {
  Scalar birth{};
  Scalar death{};

  Scalar persistence() const { return death - birth; }
  friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
};

using Diagram = std::vector<DiagramPoint<double>>;

/// Cap the essential class at kEssentialCap and drop points whose persistence
/// is below `min_persistence` (0 keeps everything).
Diagram to_diagram(const Barcode& barcode, double min_persistence = 0.0);

/// Distance from (b, d) to its diagonal projection ((b+d)/2, (b+d)/2).
template <typename Scalar>
Scalar diagonal_cost(const DiagramPoint<Scalar>& p, Norm norm) {
  return norm == Norm::l1 ? p.death - p.birth : (p.death - p.birth) / Scalar(2);
}

template <typename Scalar>
Scalar point_cost(const DiagramPoint<Scalar>& a, const DiagramPoint<Scalar>& b, Norm norm) {
  using std::abs;
  const Scalar db = abs(a.birth - b.birth);
  const Scalar dd = abs(a.death - b.death);
  return norm == Norm::l1 ? db + dd : std::max(db, dd);
}

/// Partial matching between two diagrams; indices not in `pairs` go to the
/// diagonal.
struct Matching {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  std::vector<Eigen::Index> unmatched_a;
  std::vector<Eigen::Index> unmatched_b;
};

template <typename Scalar>
struct MatchingResult {
  Scalar distance{};
  Matching matching;
};

namespace detail {

// Bipartite graph of the diagonal-augmented bottleneck problem at level eps.
//   left  = A (0..n-1) followed by one diagonal copy per B point
//   right = B (0..m-1) followed by one diagonal copy per A point
// A point may use only its own diagonal copy; diagonal copies of the two
// sides are mutually adjacent, which makes the diagonal an unlimited partner.
template <typename Scalar>
struct BottleneckGraph {
  std::span<const DiagramPoint<Scalar>> a;
  std::span<const DiagramPoint<Scalar>> b;
  Scalar eps;

  Eigen::Index n() const { return static_cast<Eigen::Index>(a.size()); }
  Eigen::Index m() const { return static_cast<Eigen::Index>(b.size()); }
  Eigen::Index left_size() const { return n() + m(); }
  Eigen::Index right_size() const { return n() + m(); }
  Eigen::Index slots(Eigen::Index u) const { return u < n() ? m() + 1 : n() + 1; }

  Eigen::Index neighbor(Eigen::Index u, Eigen::Index s) const {
    if (u < n()) {
      if (s < m()) return point_cost(a[u], b[s], Norm::linf) <= eps ? s : -1;
      return diagonal_cost(a[u], Norm::linf) <= eps ? m() + u : -1;
    }
    const Eigen::Index j = u - n();
    if (s == 0) return diagonal_cost(b[j], Norm::linf) <= eps ? j : -1;
    return m() + (s - 1);
  }
};

template <typename Scalar>
std::vector<Scalar> bottleneck_candidates(std::span<const DiagramPoint<Scalar>> a,
                                          std::span<const DiagramPoint<Scalar>> b) {
  std::vector<Scalar> values{Scalar(0)};
  auto add = [&](Scalar x) { values.push_back(x); };

  bool integral = true;
  Scalar hi = 0;
  for (auto side : {a, b})
    for (const auto& p : side) {
      integral = integral && std::floor(p.birth) == p.birth && std::floor(p.death) == p.death;
      hi = std::max({hi, std::abs(p.birth), std::abs(p.death)});
    }

  if (integral && hi <= Scalar(1 << 20)) {
    // Every candidate is a multiple of 1/2 in [0, 2*hi]; dedupe in a bitmap
    // instead of sorting |A|*|B| values.
    const auto slots = static_cast<std::size_t>(4 * hi) + 1;
    std::vector<char> seen(slots, 0);
    auto mark = [&](Scalar x) { seen[static_cast<std::size_t>(x * 2)] = 1; };
    mark(0);
    for (const auto& p : a) mark(diagonal_cost(p, Norm::linf));
    for (const auto& q : b) mark(diagonal_cost(q, Norm::linf));
    for (const auto& p : a)
      for (const auto& q : b) mark(point_cost(p, q, Norm::linf));
    values.clear();
    for (std::size_t k = 0; k < slots; ++k)
      if (seen[k]) values.push_back(static_cast<Scalar>(k) / Scalar(2));
    return values;
  }

  for (const auto& p : a) add(diagonal_cost(p, Norm::linf));
  for (const auto& q : b) add(diagonal_cost(q, Norm::linf));
  for (const auto& p : a)
    for (const auto& q : b) add(point_cost(p, q, Norm::linf));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

}  // namespace detail

/// Exact bottleneck distance with an optimal matching.
///
/// Candidate values (pairwise and diagonal L-infinity costs) are searched by
/// bisection for the smallest one admitting a perfect matching in the
/// augmented graph; the first feasible candidate wins ties.
template <typename Scalar>
MatchingResult<Scalar> bottleneck_matching(std::span<const DiagramPoint<Scalar>> a,
                                           std::span<const DiagramPoint<Scalar>> b) {
  using Eigen::Index;
  const auto n = static_cast<Index>(a.size());
  const auto m = static_cast<Index>(b.size());
  const std::vector<Scalar> candidates = detail::bottleneck_candidates(a, b);

  auto feasible = [&](Scalar eps) {
    detail::BottleneckGraph<Scalar> graph{a, b, eps};
    HopcroftKarp<detail::BottleneckGraph<Scalar>> hk(graph);
    return hk.solve() == n + m;
  };

  // The largest candidate is at least every diagonal cost, so it is feasible.
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }

  MatchingResult<Scalar> result;
  result.distance = candidates[lo];
  detail::BottleneckGraph<Scalar> graph{a, b, result.distance};
  HopcroftKarp<detail::BottleneckGraph<Scalar>> hk(graph);
  hk.solve();
  for (Index i = 0; i < n; ++i) {
    const Index v = hk.match_left()[i];
    if (v < m)
      result.matching.pairs.emplace_back(i, v);
    else
      result.matching.unmatched_a.push_back(i);
  }
  for (Index j = 0; j < m; ++j)
    if (hk.match_right()[j] >= n) result.matching.unmatched_b.push_back(j);
  return result;
}

template <typename Scalar>
Scalar bottleneck(std::span<const DiagramPoint<Scalar>> a, std::span<const DiagramPoint<Scalar>> b) {
  return bottleneck_matching(a, b).distance;
}

/// Exact 1-Wasserstein distance (L1 ground metric) with an optimal matching,
/// solved as an assignment on the (n+m) x (n+m) diagonal-augmented matrix
///
///          B            diag(A)
///   A    [ L1(a_i,b_j) | diag(a_i) on i==k, else forbidden ]
///   diag(B) [ diag(b_j) on j==l, else forbidden | 0 ]
///
/// Forbidden entries cost more than sending every point to the diagonal, so
/// no optimal assignment uses them.
template <typename Scalar>
MatchingResult<Scalar> wasserstein1_matching(std::span<const DiagramPoint<Scalar>> a,
                                             std::span<const DiagramPoint<Scalar>> b) {
  using Eigen::Index;
  const auto n = static_cast<Index>(a.size());
  const auto m = static_cast<Index>(b.size());
  const Index k = n + m;

  Scalar forbidden = 1;
  for (const auto& p : a) forbidden += diagonal_cost(p, Norm::l1);
  for (const auto& q : b) forbidden += diagonal_cost(q, Norm::l1);

  const auto cost = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::NullaryExpr(
      k, k, [&, n, m, forbidden](Index r, Index c) -> Scalar {
        if (r < n) {
          if (c < m) return point_cost(a[r], b[c], Norm::l1);
          return c - m == r ? diagonal_cost(a[r], Norm::l1) : forbidden;
        }
        if (c < m) return r - n == c ? diagonal_cost(b[c], Norm::l1) : forbidden;
        return Scalar(0);
      });

  MatchingResult<Scalar> result;
  if (k == 0) return result;
  const Assignment<Scalar> assignment = solve_assignment(cost);
  result.distance = assignment.cost;
  for (Index i = 0; i < n; ++i) {
    const Index c = assignment.col_of_row[i];
    if (c < m)
      result.matching.pairs.emplace_back(i, c);
    else
      result.matching.unmatched_a.push_back(i);
  }
  for (Index j = 0; j < m; ++j)
    if (assignment.col_of_row[n + j] == j) result.matching.unmatched_b.push_back(j);
  return result;
}

template <typename Scalar>
Scalar wasserstein1(std::span<const DiagramPoint<Scalar>> a, std::span<const DiagramPoint<Scalar>> b) {
  return wasserstein1_matching(a, b).distance;
}

/// Barcode-level entry points. Both barcodes must share a dimension;
/// essential classes are capped and points with persistence below
/// `min_persistence` are pruned before matching.
double bottleneck(const Barcode& a, const Barcode& b);
double wasserstein1(const Barcode& a, const Barcode& b, double min_persistence = 0.0);
double distance(Metric metric, const Barcode& a, const Barcode& b, double min_persistence = 0.0);

/// Mean of the |A| x |B| cross distances, read from a precomputed matrix.
/// Throws IntegrityError if an id is missing from the matrix.
double cross_average(std::span<const std::string> set_a, std::span<const std::string> set_b,
                     const DistanceMatrix& dmat);

}  // namespace paintph
