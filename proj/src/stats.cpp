#include "paintph/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "paintph/errors.hpp"
#include "paintph/parallel.hpp"

namespace paintph {

std::string_view mode_name(PermutationMode mode) {
  return mode == PermutationMode::exhaustive ? "exhaustive" : "monte-carlo";
}

std::string_view flag_name(ExtremumFlag flag) {
  switch (flag) {
    case ExtremumFlag::min: return "MIN";
    case ExtremumFlag::max: return "MAX";
    case ExtremumFlag::none: return "NONE";
  }
  return "NONE";
}

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  std::int64_t result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step.
    const std::int64_t factor = n - k + i;
    if (result > kMax / factor) return kMax;
    result = result * factor / i;
  }
  return result;
}

namespace {

constexpr std::int64_t kBlockDraws = 1024;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Unbiased integer in [0, range) from raw generator output (Lemire). Avoids
// std::uniform_int_distribution, whose algorithm differs between standard
// libraries.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t range) {
  std::uint64_t x = rng();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      x = rng();
      m = static_cast<unsigned __int128>(x) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Cross-sample sums of a split, via row sums: for S with complement T,
// sum_{i in S, j in T} d_ij = sum_{i in S} rowsum_i - 2 sum_{i<j in S} d_ij.
class SplitStatistic {
 public:
  SplitStatistic(const Eigen::MatrixXd& d, Eigen::Index k)
      : d_(d), row_sums_(d.rowwise().sum()), k_(k) {}

  double cross_sum(std::span<const Eigen::Index> sample) const {
    double sum = 0.0;
    for (std::size_t a = 0; a < sample.size(); ++a) {
      sum += row_sums_(sample[a]);
      for (std::size_t b = a + 1; b < sample.size(); ++b) sum -= 2.0 * d_(sample[a], sample[b]);
    }
    return sum;
  }

  double average(double cross) const {
    return cross / (static_cast<double>(k_) * static_cast<double>(d_.rows() - k_));
  }

 private:
  const Eigen::MatrixXd& d_;
  Eigen::VectorXd row_sums_;
  Eigen::Index k_;
};

struct Tally {
  std::int64_t draws = 0;
  std::int64_t le = 0;
  std::int64_t ge = 0;
  std::int64_t ties = 0;
  // Over splits that differ from the observed partition.
  std::int64_t others = 0;
  std::int64_t others_le = 0;
  std::int64_t others_ge = 0;

  Tally& operator+=(const Tally& t) {
    draws += t.draws;
    le += t.le;
    ge += t.ge;
    ties += t.ties;
    others += t.others;
    others_le += t.others_le;
    others_ge += t.others_ge;
    return *this;
  }
};

class SplitCounter {
 public:
  SplitCounter(std::vector<char> in_observed, Eigen::Index k, double observed, double tolerance)
      : in_observed_(std::move(in_observed)),
        k_(k),
        balanced_(2 * k == static_cast<Eigen::Index>(in_observed_.size())),
        observed_(observed),
        tolerance_(tolerance) {}

  void add(std::span<const Eigen::Index> sample, double cross, Tally& tally) const {
    const bool le = cross <= observed_ + tolerance_;
    const bool ge = cross >= observed_ - tolerance_;
    ++tally.draws;
    tally.le += le;
    tally.ge += ge;
    if (same_partition(sample)) return;
    ++tally.others;
    tally.others_le += le;
    tally.others_ge += ge;
    tally.ties += le && ge;
  }

 private:
  // A balanced split and its complement describe the same partition.
  bool same_partition(std::span<const Eigen::Index> sample) const {
    Eigen::Index hits = 0;
    for (Eigen::Index i : sample) hits += in_observed_[i];
    return hits == k_ || (balanced_ && hits == 0);
  }

  std::vector<char> in_observed_;
  Eigen::Index k_;
  bool balanced_;
  double observed_;
  double tolerance_;
};

Tally enumerate_all(const SplitStatistic& stat, const SplitCounter& counter, Eigen::Index n,
                    Eigen::Index k) {
  Tally tally;
  std::vector<Eigen::Index> sample(k);
  for (Eigen::Index i = 0; i < k; ++i) sample[i] = i;
  while (true) {
    counter.add(sample, stat.cross_sum(sample), tally);
    // Next k-combination of {0..n-1} in lexicographic order.
    Eigen::Index i = k - 1;
    while (i >= 0 && sample[i] == n - k + i) --i;
    if (i < 0) break;
    ++sample[i];
    for (Eigen::Index j = i + 1; j < k; ++j) sample[j] = sample[j - 1] + 1;
  }
  return tally;
}

Tally sample_block(const SplitStatistic& stat, const SplitCounter& counter, Eigen::Index n,
                   Eigen::Index k, std::uint64_t seed, std::int64_t block, std::int64_t draws) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(block))));
  std::vector<Eigen::Index> pool(n);
  Tally tally;
  for (std::int64_t d = 0; d < draws; ++d) {
    for (Eigen::Index i = 0; i < n; ++i) pool[i] = i;
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto j = i + static_cast<Eigen::Index>(bounded(rng, static_cast<std::uint64_t>(n - i)));
      std::swap(pool[i], pool[j]);
    }
    std::span<Eigen::Index> sample(pool.data(), static_cast<std::size_t>(k));
    std::sort(sample.begin(), sample.end());
    counter.add(sample, stat.cross_sum(sample), tally);
  }
  return tally;
}

PermutationOutcome run_test(const DistanceMatrix& dmat, std::span<const std::string> labels_a,
                            std::int64_t n_perms, std::uint64_t seed, double alpha, int workers,
                            bool force_sampling) {
  const Eigen::Index n = dmat.size();
  if (n_perms < 1) throw ContractViolation("permutation_test: n_perms must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ContractViolation("permutation_test: alpha outside (0,1)");

  std::set<Eigen::Index> chosen;
  for (const auto& id : labels_a)
    if (!chosen.insert(dmat.index_of(id)).second)
      throw ContractViolation("permutation_test: duplicate id " + id);
  const auto k = static_cast<Eigen::Index>(chosen.size());
  if (k == 0 || k == n)
    throw ContractViolation("permutation_test: sample A must be a nonempty proper subset");

  const std::vector<Eigen::Index> observed_sample(chosen.begin(), chosen.end());
  std::vector<char> in_observed(n, 0);
  for (Eigen::Index i : observed_sample) in_observed[i] = 1;

  const SplitStatistic stat(dmat.values(), k);
  const double observed_cross = stat.cross_sum(observed_sample);
  const double tolerance = 1e-12 * std::max(1.0, std::abs(observed_cross));
  const SplitCounter counter(std::move(in_observed), k, observed_cross, tolerance);

  PermutationOutcome out;
  out.observed = stat.average(observed_cross);
  out.alpha = alpha;
  out.size_a = k;
  out.size_b = n - k;

  Tally tally;
  const std::int64_t total = binomial(n, k);
  if (!force_sampling && total <= n_perms) {
    out.mode = PermutationMode::exhaustive;
    tally = enumerate_all(stat, counter, n, k);
    out.q = static_cast<double>(tally.le) / static_cast<double>(tally.draws);
  } else {
    out.mode = PermutationMode::monte_carlo;
    out.seed = seed;
    const std::int64_t blocks = (n_perms + kBlockDraws - 1) / kBlockDraws;
    std::vector<Tally> partial(blocks);
    parallel_for(blocks, workers, [&](Eigen::Index b) {
      const std::int64_t draws = std::min(kBlockDraws, n_perms - b * kBlockDraws);
      partial[b] = sample_block(stat, counter, n, k, seed, b, draws);
    });
    for (const Tally& t : partial) tally += t;
    out.q = static_cast<double>(tally.le + 1) / static_cast<double>(tally.draws + 1);
  }

  out.n_permutations = tally.draws;
  out.count_le = tally.le;
  out.count_ge = tally.ge;
  out.ties = tally.ties;
  if (tally.others > 0 && tally.others_ge == 0) out.flag = ExtremumFlag::max;
  if (tally.others > 0 && tally.others_le == 0) out.flag = ExtremumFlag::min;

  constexpr double kSlack = 1e-12;
  out.significant = out.q <= alpha / 2 + kSlack || out.q >= 1.0 - alpha / 2 - kSlack;
  return out;
}

}  // namespace

PermutationOutcome permutation_test(const DistanceMatrix& dmat, std::span<const std::string> labels_a,
                                    std::int64_t n_perms, std::uint64_t seed, double alpha,
                                    int workers) {
  return run_test(dmat, labels_a, n_perms, seed, alpha, workers, false);
}

PermutationOutcome monte_carlo_test(const DistanceMatrix& dmat, std::span<const std::string> labels_a,
                                    std::int64_t n_draws, std::uint64_t seed, double alpha,
                                    int workers) {
  return run_test(dmat, labels_a, n_draws, seed, alpha, workers, true);
}

PermutationOutcome one_vs_rest(const DistanceMatrix& dmat,
                               const std::map<std::string, std::string>& groups,
                               const std::string& target, std::int64_t n_perms, std::uint64_t seed,
                               double alpha, int workers) {
  std::vector<std::string> sample;
  for (const auto& id : dmat.ids()) {
    const auto it = groups.find(id);
    if (it == groups.end()) throw IntegrityError("one_vs_rest: no group for id " + id);
    if (it->second == target) sample.push_back(id);
  }
  for (const auto& [id, group] : groups)
    if (!dmat.find(id)) throw IntegrityError("one_vs_rest: id " + id + " missing from matrix");
  if (sample.empty()) throw ContractViolation("one_vs_rest: group '" + target + "' is empty");
  if (static_cast<Eigen::Index>(sample.size()) == dmat.size())
    throw ContractViolation("one_vs_rest: group '" + target + "' covers the whole collection");
  return permutation_test(dmat, sample, n_perms, seed, alpha, workers);
}

}  // namespace paintph
