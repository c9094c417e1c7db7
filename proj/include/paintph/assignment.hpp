#pragma once

#include <limits>
#include <vector>

#include <Eigen/Core>

#include "paintph/errors.hpp"

namespace paintph {

/// Optimal assignment for a square cost matrix.
template <typename Scalar>
struct Assignment {
  Scalar cost{};
  /// col_of_row[i] is the column assigned to row i.
  std::vector<Eigen::Index> col_of_row;
};

/// Minimum-cost perfect assignment by successive shortest augmenting paths
/// with dual potentials (the O(n^3) Hungarian method).
///
/// `cost` may be any Eigen expression; coefficients are read lazily, so a
/// NullaryExpr describing a structured matrix is never materialised. Integer
/// costs stay exact under double arithmetic because every potential update
/// is a difference of input entries.
template <typename Derived>
Assignment<typename Derived::Scalar> solve_assignment(const Eigen::MatrixBase<Derived>& cost) {
  using Scalar = typename Derived::Scalar;
  using Eigen::Index;
  const Index n = cost.rows();
  if (cost.cols() != n) throw ContractViolation("solve_assignment: cost matrix must be square");

  constexpr Scalar kInf = std::numeric_limits<Scalar>::has_infinity
                              ? std::numeric_limits<Scalar>::infinity()
                              : std::numeric_limits<Scalar>::max();

  // 1-based bookkeeping; column 0 is a virtual source.
  std::vector<Scalar> u(n + 1, Scalar(0)), v(n + 1, Scalar(0)), minv(n + 1);
  std::vector<Index> row_of_col(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (Index i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    Index j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Index i0 = row_of_col[j0];
      Scalar delta = kInf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const Scalar cur = cost.coeff(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const Index j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment<Scalar> result;
  result.col_of_row.assign(n, -1);
  for (Index j = 1; j <= n; ++j) result.col_of_row[row_of_col[j] - 1] = j - 1;
  for (Index i = 0; i < n; ++i) result.cost += cost.coeff(i, result.col_of_row[i]);
  return result;
}

}  // namespace paintph
