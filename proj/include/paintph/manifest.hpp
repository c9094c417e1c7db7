#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paintph/grid.hpp"

namespace paintph {

struct ManifestEntry {
  std::string image_id;
  std::filesystem::path path;
  std::string group;
};

struct PipelineOptions {
  /// Longest-side cap applied before channel extraction; none = native size.
  std::optional<Index> resize;
  /// Persistence below which points are dropped before 1-Wasserstein.
  std::optional<double> prune;
};

/// Corpus description read from a CSV with header `image_id,path,group`.
/// Relative paths resolve against the manifest's directory.
struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  PipelineOptions options;

  std::vector<std::string> ids() const;
  std::map<std::string, std::string> groups() const;
};

/// Parse manifest text. Throws ConfigError on a bad header, malformed rows or
/// duplicate ids.
CorpusManifest parse_manifest(std::string_view csv, const std::filesystem::path& base_dir);

/// Read and parse a manifest file, then check that every listed image exists
/// (IntegrityError otherwise).
CorpusManifest load_manifest(const std::filesystem::path& path);

std::string manifest_csv(const CorpusManifest& manifest);

}  // namespace paintph
