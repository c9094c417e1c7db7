#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace paintph {

/// Symmetric pairwise distances over a labelled collection, zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::vector<std::string> ids);
  DistanceMatrix(std::vector<std::string> ids, Eigen::MatrixXd values);

  Eigen::Index size() const { return static_cast<Eigen::Index>(ids_.size()); }
  const std::vector<std::string>& ids() const { return ids_; }
  const Eigen::MatrixXd& values() const { return values_; }

  std::optional<Eigen::Index> find(const std::string& id) const;
  /// Throws IntegrityError for unknown ids.
  Eigen::Index index_of(const std::string& id) const;

  double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }
  double at(const std::string& a, const std::string& b) const;

  /// Writes both (i, j) and (j, i).
  void set(Eigen::Index i, Eigen::Index j, double d);

  /// Throws IntegrityError unless the matrix is symmetric, finite,
  /// nonnegative and has a zero diagonal.
  void validate() const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Eigen::Index> index_;
  Eigen::MatrixXd values_;
};

/// CSV with a header row and a leading id column; the corner cell is empty.
/// Values use the shortest round-trip decimal form, so output is bit-stable.
void write_distance_csv(const std::filesystem::path& path, const DistanceMatrix& dmat);
std::string distance_csv(const DistanceMatrix& dmat);
DistanceMatrix read_distance_csv(const std::filesystem::path& path);

}  // namespace paintph
