#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "paintph/grid.hpp"
#include "paintph/persistence.hpp"

namespace support {

using paintph::Barcode;
using paintph::Index;
using paintph::Interval;
using paintph::IntensityGrid;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("paintph_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Random grid up to max_side x max_side. Values come from a small palette
/// half of the time so that ties between cells are common.
inline IntensityGrid random_grid(std::mt19937_64& rng, int max_side = 16) {
  const int h = uniform(rng, 1, max_side);
  const int w = uniform(rng, 1, max_side);
  IntensityGrid g(h, w);
  const bool palette = uniform(rng, 0, 1) == 0;
  const int levels = uniform(rng, 2, 6);
  for (Index y = 0; y < h; ++y)
    for (Index x = 0; x < w; ++x)
      g(y, x) = static_cast<std::uint8_t>(palette ? uniform(rng, 0, levels - 1) * (255 / (levels - 1))
                                                  : uniform(rng, 0, 255));
  return g;
}

/// Random barcode with integer endpoints; may contain an essential interval.
inline Barcode random_barcode(std::mt19937_64& rng, int count, int dimension = 0) {
  Barcode b;
  b.dimension = dimension;
  for (int i = 0; i < count; ++i) {
    const int birth = uniform(rng, 0, 254);
    if (uniform(rng, 0, 9) == 0) {
      b.intervals.push_back({birth, Interval::kEssential});
    } else {
      b.intervals.push_back({birth, uniform(rng, birth + 1, 255)});
    }
  }
  std::sort(b.intervals.begin(), b.intervals.end());
  return b;
}

/// Minimum over every matching-with-diagonal, enumerated recursively, of a
/// cost combined with `combine` (max or plus). All quantities are doubled so
/// the arithmetic stays integral: L-infinity costs are half-integers.
inline std::int64_t brute_force_doubled(const Barcode& a, const Barcode& b, bool bottleneck) {
  auto death = [](const Interval& i) {
    return static_cast<std::int64_t>(i.is_essential() ? paintph::kEssentialCap : i.death);
  };
  auto diag = [&](const Interval& i) {
    const std::int64_t p = death(i) - i.birth;
    return bottleneck ? p : 2 * p;  // doubled L-inf diag = p; doubled L1 diag = 2p
  };
  auto pair = [&](const Interval& x, const Interval& y) {
    const std::int64_t db = std::abs(static_cast<std::int64_t>(x.birth) - y.birth);
    const std::int64_t dd = std::abs(death(x) - death(y));
    return bottleneck ? 2 * std::max(db, dd) : 2 * (db + dd);
  };
  auto combine = [&](std::int64_t acc, std::int64_t c) { return bottleneck ? std::max(acc, c) : acc + c; };

  const auto n = a.intervals.size();
  const auto m = b.intervals.size();
  std::vector<char> used(m, 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::function<void(std::size_t, std::int64_t)> go = [&](std::size_t i, std::int64_t acc) {
    if (i == n) {
      for (std::size_t j = 0; j < m; ++j)
        if (!used[j]) acc = combine(acc, diag(b.intervals[j]));
      best = std::min(best, acc);
      return;
    }
    go(i + 1, combine(acc, diag(a.intervals[i])));
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      go(i + 1, combine(acc, pair(a.intervals[i], b.intervals[j])));
      used[j] = 0;
    }
  };
  go(0, 0);
  return best;
}

}  // namespace support
