#include <doctest.h>

#include <bit>
#include <limits>
#include <numeric>
#include <random>

#include "paintph/errors.hpp"
#include "paintph/stats.hpp"
#include "support.hpp"

using namespace paintph;

namespace {

std::vector<std::string> make_ids(int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("id" + std::to_string(i));
  return ids;
}

DistanceMatrix random_matrix(std::mt19937_64& rng, int n, bool integral = false) {
  DistanceMatrix d(make_ids(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      d.set(i, j, integral ? support::uniform(rng, 0, 6)
                           : std::uniform_real_distribution<double>(0, 10)(rng));
  return d;
}

DistanceMatrix two_cluster_matrix() {
  // a, b close together; c, d close together; 10 across.
  DistanceMatrix d({"a", "b", "c", "d"});
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) d.set(i, j, (i < 2) == (j < 2) ? 0 : 10);
  return d;
}

struct Enumerated {
  std::int64_t total = 0;
  std::int64_t le = 0;
  double observed = 0;
};

// Every size-k subset by bitmask, statistic by direct double loop.
Enumerated enumerate_by_mask(const DistanceMatrix& d, const std::vector<int>& sample) {
  const int n = static_cast<int>(d.size());
  const int k = static_cast<int>(sample.size());
  auto average = [&](unsigned mask) {
    double sum = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if ((mask >> i & 1) && !(mask >> j & 1)) sum += d(i, j);
    return sum / (k * (n - k));
  };
  unsigned observed_mask = 0;
  for (int i : sample) observed_mask |= 1u << i;
  Enumerated e;
  e.observed = average(observed_mask);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != k) continue;
    ++e.total;
    e.le += average(mask) <= e.observed + 1e-9;
  }
  return e;
}

std::vector<std::string> names(const DistanceMatrix& d, const std::vector<int>& sample) {
  std::vector<std::string> out;
  for (int i : sample) out.push_back(d.ids()[i]);
  return out;
}

}  // namespace

TEST_CASE("binomial") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(11, 10) == 11);
  CHECK(binomial(12, 4) == 495);
  CHECK(binomial(100, 10) == 17310309456440LL);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(200, 100) == std::numeric_limits<std::int64_t>::max());
}

TEST_CASE("two clusters of two") {
  const DistanceMatrix d = two_cluster_matrix();
  const std::vector<std::string> a{"a", "b"};
  const PermutationOutcome o = permutation_test(d, a, 10000, 1);
  CHECK(o.mode == PermutationMode::exhaustive);
  CHECK(o.n_permutations == 6);
  CHECK(o.observed == 10);
  CHECK(o.q == 1.0);
  CHECK(o.count_le == 6);
  CHECK(o.flag == ExtremumFlag::max);
  CHECK(o.significant);
  CHECK_FALSE(o.tie_warning());
  CHECK_FALSE(o.seed.has_value());
}

TEST_CASE("constant matrix") {
  DistanceMatrix d(make_ids(6));
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) d.set(i, j, 3.25);
  const std::vector<std::string> a{"id0", "id3"};
  const PermutationOutcome o = permutation_test(d, a, 10000, 1);
  CHECK(o.q == 1.0);
  CHECK(o.observed == 3.25);
  CHECK(o.flag == ExtremumFlag::none);
  CHECK(o.significant);
  CHECK(o.tie_warning());
  CHECK(o.ties == 14);
}

TEST_CASE("rest of a collection against one outlier") {
  DistanceMatrix d(make_ids(11));
  for (int i = 0; i < 11; ++i)
    for (int j = i + 1; j < 11; ++j) d.set(i, j, j == 10 ? 50.0 + i : 1.0 + 0.01 * (i + j));
  std::vector<std::string> rest(d.ids().begin(), d.ids().end() - 1);
  const PermutationOutcome o = permutation_test(d, rest, 10000, 1);
  CHECK(o.mode == PermutationMode::exhaustive);
  CHECK(o.n_permutations == 11);
  CHECK(o.flag == ExtremumFlag::max);
  CHECK(o.q == 1.0);
  CHECK(o.size_a == 10);
  CHECK(o.size_b == 1);
}

TEST_CASE("two groups of one") {
  DistanceMatrix d({"x", "y"});
  d.set(0, 1, 4);
  const std::map<std::string, std::string> groups{{"x", "g1"}, {"y", "g2"}};
  const PermutationOutcome o = one_vs_rest(d, groups, "g1", 10000, 0);
  CHECK(o.mode == PermutationMode::exhaustive);
  CHECK(o.n_permutations == 2);
  CHECK(o.q == 1.0);
  CHECK(o.flag == ExtremumFlag::none);
}

TEST_CASE("exhaustive q against bitmask enumeration") {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = support::uniform(rng, 2, 10);
    const DistanceMatrix d = random_matrix(rng, n, trial % 2 == 0);
    const int k = support::uniform(rng, 1, n - 1);
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    const std::vector<int> sample(all.begin(), all.begin() + k);

    const Enumerated e = enumerate_by_mask(d, sample);
    const PermutationOutcome o = permutation_test(d, names(d, sample), 100000, 5);
    REQUIRE(o.mode == PermutationMode::exhaustive);
    REQUIRE(o.n_permutations == e.total);
    REQUIRE(o.count_le == e.le);
    REQUIRE(o.q == doctest::Approx(static_cast<double>(e.le) / e.total).epsilon(1e-15));
    REQUIRE(o.observed == doctest::Approx(e.observed).epsilon(1e-12));
    REQUIRE(o.q >= 0.0);
    REQUIRE(o.q <= 1.0);
  }
}

TEST_CASE("strict extremum flags") {
  std::mt19937_64 rng(41);
  int maxes = 0, mins = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = support::uniform(rng, 3, 8);
    const DistanceMatrix d = random_matrix(rng, n);
    const int k = support::uniform(rng, 1, n - 1);
    std::vector<int> sample(k);
    std::iota(sample.begin(), sample.end(), 0);
    const PermutationOutcome o = permutation_test(d, names(d, sample), 100000, 5);
    const bool balanced = 2 * k == n;
    const double total = static_cast<double>(o.n_permutations);
    if (o.flag == ExtremumFlag::max) {
      ++maxes;
      REQUIRE(o.q == 1.0);
      REQUIRE(o.count_ge == (balanced ? 2 : 1));
    }
    if (o.flag == ExtremumFlag::min) {
      ++mins;
      // The observed partition appears once, or twice when the complement
      // has the same size.
      REQUIRE(o.q == (balanced ? 2.0 : 1.0) / total);
      REQUIRE(o.count_le == (balanced ? 2 : 1));
    }
  }
  CHECK(maxes > 0);
  CHECK(mins > 0);
}

TEST_CASE("monte carlo agrees with exhaustive enumeration") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = support::uniform(rng, 4, 10);
    const DistanceMatrix d = random_matrix(rng, n, trial % 2 == 1);
    int k = support::uniform(rng, 1, n / 2);
    while (binomial(n, k) > 500) --k;
    std::vector<int> sample(k);
    std::iota(sample.begin(), sample.end(), 0);
    const auto labels = names(d, sample);
    const PermutationOutcome exact = permutation_test(d, labels, 100000, 0);
    REQUIRE(exact.mode == PermutationMode::exhaustive);
    const PermutationOutcome mc = monte_carlo_test(d, labels, 100000, 17 + trial);
    REQUIRE(mc.mode == PermutationMode::monte_carlo);
    REQUIRE(mc.n_permutations == 100000);
    REQUIRE(std::abs(mc.q - exact.q) <= 0.02);
  }
}

TEST_CASE("monte carlo with 100000 draws") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    // C(20, 10) = 184756 splits, more than the draws.
    const int n = 20;
    const DistanceMatrix d = random_matrix(rng, n, trial % 2 == 0);
    std::vector<int> sample(10);
    std::iota(sample.begin(), sample.end(), 0);
    const auto labels = names(d, sample);
    const PermutationOutcome exact = permutation_test(d, labels, binomial(20, 10), 0);
    REQUIRE(exact.mode == PermutationMode::exhaustive);
    const PermutationOutcome mc = permutation_test(d, labels, 100000, 1234 + trial, kDefaultAlpha, 2);
    REQUIRE(mc.mode == PermutationMode::monte_carlo);
    REQUIRE(mc.n_permutations == 100000);
    REQUIRE(std::abs(mc.q - exact.q) <= 0.02);
  }
}

TEST_CASE("seed determinism and worker independence") {
  std::mt19937_64 rng(44);
  const DistanceMatrix d = random_matrix(rng, 30);
  std::vector<std::string> labels(d.ids().begin(), d.ids().begin() + 8);
  const PermutationOutcome a = permutation_test(d, labels, 5000, 77, kDefaultAlpha, 1);
  const PermutationOutcome b = permutation_test(d, labels, 5000, 77, kDefaultAlpha, 4);
  const PermutationOutcome c = permutation_test(d, labels, 5000, 78, kDefaultAlpha, 1);
  CHECK(a.mode == PermutationMode::monte_carlo);
  CHECK(a.seed == 77u);
  CHECK(a.q == b.q);
  CHECK(a.count_le == b.count_le);
  CHECK(a.count_ge == b.count_ge);
  CHECK(a.ties == b.ties);
  CHECK(a.flag == b.flag);
  CHECK(a.count_le != c.count_le);
  CHECK(a.q == static_cast<double>(a.count_le + 1) / 5001.0);
}

TEST_CASE("q is invariant under scaling the matrix") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = support::uniform(rng, 4, 14);
    const DistanceMatrix d = random_matrix(rng, n, trial % 2 == 0);
    const double s = std::uniform_real_distribution<double>(0.01, 100)(rng);
    const DistanceMatrix scaled(d.ids(), d.values() * s);
    const int k = support::uniform(rng, 1, n - 1);
    const std::vector<std::string> labels(d.ids().begin(), d.ids().begin() + k);
    for (std::int64_t perms : {std::int64_t{200}, std::int64_t{100000}}) {
      const auto a = permutation_test(d, labels, perms, 3);
      const auto b = permutation_test(scaled, labels, perms, 3);
      REQUIRE(a.q == b.q);
      REQUIRE(a.flag == b.flag);
    }
  }
}

TEST_CASE("q is invariant under relabeling") {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = support::uniform(rng, 3, 10);
    const DistanceMatrix d = random_matrix(rng, n, true);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::string> ids(n);
    Eigen::MatrixXd values(n, n);
    for (int i = 0; i < n; ++i) {
      ids[perm[i]] = "renamed" + std::to_string(i);
      for (int j = 0; j < n; ++j) values(perm[i], perm[j]) = d(i, j);
    }
    const DistanceMatrix relabeled(ids, values);
    const int k = support::uniform(rng, 1, n - 1);
    std::vector<std::string> a, b;
    for (int i = 0; i < k; ++i) {
      a.push_back(d.ids()[i]);
      b.push_back("renamed" + std::to_string(i));
    }
    const auto x = permutation_test(d, a, 100000, 0);
    const auto y = permutation_test(relabeled, b, 100000, 0);
    REQUIRE(x.q == y.q);
    REQUIRE(x.flag == y.flag);
  }
}

TEST_CASE("significance threshold") {
  // The 495 splits of 12 ids into 4 and 8.
  std::mt19937_64 rng(47);
  const DistanceMatrix d = random_matrix(rng, 12);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::string> ids = d.ids();
    std::shuffle(ids.begin(), ids.end(), rng);
    const std::vector<std::string> labels(ids.begin(), ids.begin() + 4);
    const auto o = permutation_test(d, labels, 10000, 0, 0.05);
    REQUIRE(o.significant == (o.q <= 0.025 || o.q >= 0.975));
  }
}

TEST_CASE("contract violations") {
  const DistanceMatrix d = two_cluster_matrix();
  const std::vector<std::string> none, all{"a", "b", "c", "d"}, dup{"a", "a"}, unknown{"a", "q"},
      ok{"a"};
  CHECK_THROWS_AS(permutation_test(d, none, 100, 0), ContractViolation);
  CHECK_THROWS_AS(permutation_test(d, all, 100, 0), ContractViolation);
  CHECK_THROWS_AS(permutation_test(d, dup, 100, 0), ContractViolation);
  CHECK_THROWS_AS(permutation_test(d, unknown, 100, 0), IntegrityError);
  CHECK_THROWS_AS(permutation_test(d, ok, 0, 0), ContractViolation);
  CHECK_THROWS_AS(permutation_test(d, ok, 100, 0, 0.0), ContractViolation);
  CHECK_THROWS_AS(permutation_test(d, ok, 100, 0, 1.0), ContractViolation);

  const std::map<std::string, std::string> groups{{"a", "g"}, {"b", "g"}, {"c", "h"}, {"d", "h"}};
  CHECK_THROWS_AS(one_vs_rest(d, groups, "missing", 100, 0), ContractViolation);
  const std::map<std::string, std::string> one_group{{"a", "g"}, {"b", "g"}, {"c", "g"}, {"d", "g"}};
  CHECK_THROWS_AS(one_vs_rest(d, one_group, "g", 100, 0), ContractViolation);
  const std::map<std::string, std::string> extra{{"a", "g"}, {"b", "g"}, {"c", "h"}, {"d", "h"}, {"e", "h"}};
  CHECK_THROWS_AS(one_vs_rest(d, extra, "g", 100, 0), IntegrityError);
  const auto o = one_vs_rest(d, groups, "h", 100, 0);
  CHECK(o.flag == ExtremumFlag::max);
}

TEST_CASE("names") {
  CHECK(mode_name(PermutationMode::monte_carlo) == "monte-carlo");
  CHECK(flag_name(ExtremumFlag::min) == "MIN");
  CHECK(flag_name(ExtremumFlag::none) == "NONE");
}
