#include "paintph/metrics.hpp"

#include "paintph/distance_matrix.hpp"

namespace paintph {

std::string_view metric_name(Metric m) {
  return m == Metric::bottleneck ? "bottleneck" : "wasserstein1";
}

std::optional<Metric> parse_metric(std::string_view name) {
  if (name == "b" || name == "bottleneck") return Metric::bottleneck;
  if (name == "w1" || name == "wasserstein1") return Metric::wasserstein1;
  return std::nullopt;
}

Diagram to_diagram(const Barcode& barcode, double min_persistence) {
  Diagram points;
  points.reserve(barcode.intervals.size());
  for (const Interval& i : barcode.intervals) {
    const double birth = i.birth;
    const double death = i.is_essential() ? kEssentialCap : i.death;
    if (death - birth >= min_persistence) points.push_back({birth, death});
  }
  return points;
}

namespace {

void require_same_dimension(const Barcode& a, const Barcode& b) {
  if (a.dimension != b.dimension)
    throw ContractViolation("barcode distance: dimensions differ");
}

}  // namespace

double bottleneck(const Barcode& a, const Barcode& b) {
  require_same_dimension(a, b);
  const Diagram da = to_diagram(a);
  const Diagram db = to_diagram(b);
  return bottleneck<double>(da, db);
}

double wasserstein1(const Barcode& a, const Barcode& b, double min_persistence) {
  require_same_dimension(a, b);
  const Diagram da = to_diagram(a, min_persistence);
  const Diagram db = to_diagram(b, min_persistence);
  return wasserstein1<double>(da, db);
}

double distance(Metric metric, const Barcode& a, const Barcode& b, double min_persistence) {
  return metric == Metric::bottleneck ? bottleneck(a, b) : wasserstein1(a, b, min_persistence);
}

double cross_average(std::span<const std::string> set_a, std::span<const std::string> set_b,
                     const DistanceMatrix& dmat) {
  if (set_a.empty() || set_b.empty()) throw ContractViolation("cross_average: empty sample");
  double sum = 0.0;
  for (const auto& a : set_a) {
    const Eigen::Index i = dmat.index_of(a);
    for (const auto& b : set_b) sum += dmat(i, dmat.index_of(b));
  }
  return sum / (static_cast<double>(set_a.size()) * static_cast<double>(set_b.size()));
}

}  // namespace paintph
