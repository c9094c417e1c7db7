#pragma once

#include <compare>
#include <limits>
#include <vector>

#include "paintph/cubical.hpp"

namespace paintph {

/// Death value used in place of "never dies" when diagrams are compared:
/// one past the largest threshold.
inline constexpr int kEssentialCap = 256;

/// Half-open persistence interval [birth, death).
struct Interval {
  static constexpr int kEssential = std::numeric_limits<int>::max();

  int birth = 0;
  int death = kEssential;

  bool is_essential() const { return death == kEssential; }
  bool contains(int t) const { return birth <= t && t < death; }

  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Intervals of one homological dimension, kept sorted by (birth, death).
struct Barcode {
  int dimension = 0;
  std::vector<Interval> intervals;

  friend bool operator==(const Barcode&, const Barcode&) = default;
};

struct BarcodePair {
  Barcode h0;
  Barcode h1;
};

/// Mod-2 sublevel persistence of a cubical filtration. Dimension 0 is a
/// union-find sweep with the elder rule; dimension 1 reduces the square
/// boundary columns. Zero-length intervals are dropped.
Barcode compute_barcode(const FilteredCubicalComplex& complex, int dimension);

/// Both dimensions from one sweep (the dimension-1 reduction reuses the
/// edge classification of the dimension-0 pass).
BarcodePair compute_barcodes(const FilteredCubicalComplex& complex);

/// Number of intervals alive at threshold t.
int betti_at(const Barcode& barcode, int t);

}  // namespace paintph
