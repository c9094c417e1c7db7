#include "paintph/distance_matrix.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "paintph/errors.hpp"

namespace paintph {

DistanceMatrix::DistanceMatrix(std::vector<std::string> ids)
    : DistanceMatrix(ids, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ids.size()),
                                                static_cast<Eigen::Index>(ids.size()))) {}

DistanceMatrix::DistanceMatrix(std::vector<std::string> ids, Eigen::MatrixXd values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  const auto n = static_cast<Eigen::Index>(ids_.size());
  if (values_.rows() != n || values_.cols() != n)
    throw IntegrityError("distance matrix: shape does not match id count");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!index_.emplace(ids_[i], i).second)
      throw IntegrityError("distance matrix: duplicate id " + ids_[i]);
}

std::optional<Eigen::Index> DistanceMatrix::find(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Eigen::Index DistanceMatrix::index_of(const std::string& id) const {
  const auto i = find(id);
  if (!i) throw IntegrityError("distance matrix: no entry for id " + id);
  return *i;
}

double DistanceMatrix::at(const std::string& a, const std::string& b) const {
  return values_(index_of(a), index_of(b));
}

void DistanceMatrix::set(Eigen::Index i, Eigen::Index j, double d) {
  values_(i, j) = d;
  values_(j, i) = d;
}

void DistanceMatrix::validate() const {
  for (Eigen::Index i = 0; i < size(); ++i) {
    if (values_(i, i) != 0.0) throw IntegrityError("distance matrix: nonzero diagonal");
    for (Eigen::Index j = 0; j < size(); ++j) {
      const double d = values_(i, j);
      if (!std::isfinite(d) || d < 0.0)
        throw IntegrityError("distance matrix: entry is negative or not finite");
      if (d != values_(j, i)) throw IntegrityError("distance matrix: not symmetric");
    }
  }
}

namespace {

std::string format_double(double d) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::string distance_csv(const DistanceMatrix& dmat) {
  std::ostringstream out;
  for (const auto& id : dmat.ids()) out << ',' << id;
  out << '\n';
  for (Eigen::Index i = 0; i < dmat.size(); ++i) {
    out << dmat.ids()[i];
    for (Eigen::Index j = 0; j < dmat.size(); ++j) out << ',' << format_double(dmat(i, j));
    out << '\n';
  }
  return out.str();
}

void write_distance_csv(const std::filesystem::path& path, const DistanceMatrix& dmat) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << distance_csv(dmat);
  if (!out) throw IoError("cannot write " + path.string());
}

DistanceMatrix read_distance_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty distance matrix");
  auto header = split_csv_line(line);
  if (header.empty() || !header[0].empty())
    throw FormatError(path.string() + ": header must start with an empty cell");
  std::vector<std::string> ids(header.begin() + 1, header.end());
  const auto n = static_cast<Eigen::Index>(ids.size());

  Eigen::MatrixXd values(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw IntegrityError(path.string() + ": missing rows");
    const auto fields = split_csv_line(line);
    if (static_cast<Eigen::Index>(fields.size()) != n + 1 || fields[0] != ids[i])
      throw IntegrityError(path.string() + ": row " + std::to_string(i + 1) + " is malformed");
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::string& f = fields[j + 1];
      double d = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), d);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size())
        throw IntegrityError(path.string() + ": bad value '" + f + "'");
      values(i, j) = d;
    }
  }
  DistanceMatrix dmat(std::move(ids), std::move(values));
  dmat.validate();
  return dmat;
}

}  // namespace paintph
