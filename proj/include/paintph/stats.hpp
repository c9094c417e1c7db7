#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "paintph/distance_matrix.hpp"

namespace paintph {

enum class PermutationMode { exhaustive, monte_carlo };
enum class ExtremumFlag { none, min, max };

std::string_view mode_name(PermutationMode mode);
std::string_view flag_name(ExtremumFlag flag);

inline constexpr std::int64_t kDefaultPermutations = 10'000;
inline constexpr double kDefaultAlpha = 0.05;

/// Result of one two-sample permutation test on cross-sample average
/// distance.
///
/// `q` is the fraction of split statistics that are <= the observed one. In
/// exhaustive mode every split of the pool is enumerated once (the observed
/// split among them). In Monte-Carlo mode q = (count_le + 1) / (N + 1).
/// `flag` is min/max only when the observed statistic is strictly below /
/// above every statistic of a different split.
struct PermutationOutcome {
  double observed = 0.0;
  double q = 0.0;
  std::int64_t n_permutations = 0;
  std::int64_t count_le = 0;
  std::int64_t count_ge = 0;
  /// Other splits whose statistic equals the observed one.
  std::int64_t ties = 0;
  PermutationMode mode = PermutationMode::exhaustive;
  std::optional<std::uint64_t> seed;
  double alpha = kDefaultAlpha;
  ExtremumFlag flag = ExtremumFlag::none;
  bool significant = false;
  Eigen::Index size_a = 0;
  Eigen::Index size_b = 0;

  /// Significant only because every split tied with the observed one.
  bool tie_warning() const { return significant && flag == ExtremumFlag::none && ties > 0; }
};

/// Binomial coefficient, saturating at INT64_MAX.
std::int64_t binomial(std::int64_t n, std::int64_t k);

/// Two-sided permutation test of sample A (the ids in `labels_a`) against
/// the rest of the matrix. Runs exhaustively when C(n, |A|) <= n_perms,
/// otherwise draws n_perms uniform splits from a generator seeded by `seed`.
/// `workers` only affects speed: draws are generated in fixed blocks with
/// per-block seeds, so the outcome does not depend on it.
PermutationOutcome permutation_test(const DistanceMatrix& dmat, std::span<const std::string> labels_a,
                                    std::int64_t n_perms = kDefaultPermutations,
                                    std::uint64_t seed = 0, double alpha = kDefaultAlpha,
                                    int workers = 1);

/// Monte-Carlo mode regardless of how few splits exist (n_draws uniform
/// splits, drawn with replacement).
PermutationOutcome monte_carlo_test(const DistanceMatrix& dmat, std::span<const std::string> labels_a,
                                    std::int64_t n_draws, std::uint64_t seed,
                                    double alpha = kDefaultAlpha, int workers = 1);

/// `groups` maps every id of the matrix to its group label.
PermutationOutcome one_vs_rest(const DistanceMatrix& dmat,
                               const std::map<std::string, std::string>& groups,
                               const std::string& target,
                               std::int64_t n_perms = kDefaultPermutations, std::uint64_t seed = 0,
                               double alpha = kDefaultAlpha, int workers = 1);

}  // namespace paintph
