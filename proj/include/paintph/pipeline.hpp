#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "paintph/barcode_io.hpp"
#include "paintph/distance_matrix.hpp"
#include "paintph/imaging.hpp"
#include "paintph/manifest.hpp"
#include "paintph/metrics.hpp"
#include "paintph/stats.hpp"

namespace paintph {

inline constexpr int kStoreSchemaVersion = 1;

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

/// Reproducibility record written next to every output bundle.
struct RunRecord {
  std::string manifest_digest;
  std::string software_version = PAINTPH_VERSION;
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::string> options;
  std::vector<StageTiming> timings;
  std::map<std::string, std::int64_t> counters;
  std::vector<std::string> outputs;
};

void write_run_record(const std::filesystem::path& path, const RunRecord& record);
RunRecord read_run_record(const std::filesystem::path& path);

/// All ten barcodes (5 channels x 2 dimensions) of every image in a corpus.
///
/// Barcode files live in a cache directory keyed by image content digest,
/// channel, dimension and resize option; `store.json` in the same directory
/// maps image ids and groups onto those files.
class BarcodeStore {
 public:
  struct Image {
    std::string id;
    std::string group;
    std::string digest;
    std::array<BarcodePair, 5> barcodes;
  };

  const std::vector<Image>& images() const { return images_; }
  std::vector<std::string> ids() const;
  std::map<std::string, std::string> groups() const;
  const PipelineOptions& options() const { return options_; }
  const std::string& manifest_digest() const { return manifest_digest_; }

  /// Throws IntegrityError if the image is unknown.
  const Barcode& get(const std::string& id, Channel channel, int dimension) const;

  /// Reload a store written by compute_all_barcodes. Every referenced barcode
  /// file must be present (IntegrityError otherwise).
  static BarcodeStore load(const std::filesystem::path& cache_dir);

 private:
  friend BarcodeStore compute_all_barcodes(const CorpusManifest&, const std::filesystem::path&,
                                           int, RunRecord*);
  std::vector<Image> images_;
  std::map<std::string, std::size_t> index_;
  PipelineOptions options_;
  std::string manifest_digest_;
};

/// Cache file name for one barcode, e.g. `<digest>_r512_gray_h1.json`.
std::string barcode_cache_name(const std::string& digest, Channel channel, int dimension,
                               std::optional<Index> resize);

/// Barcodes of one decoded image (optional resize, five channels, two
/// dimensions each).
std::array<BarcodePair, 5> image_barcodes(const RgbImage& image, std::optional<Index> resize);

/// Load, channel-split and compute barcodes for every image, reusing cache
/// hits. Any failing image aborts the run with an error naming its file.
/// If `record` is given, stage timings, the manifest digest, options and
/// the counters "images_computed" / "images_cached" are filled in.
BarcodeStore compute_all_barcodes(const CorpusManifest& manifest,
                                  const std::filesystem::path& cache_dir, int workers = 1,
                                  RunRecord* record = nullptr);

/// Pairwise distances for one (metric, dimension, channel); the upper
/// triangle is computed and mirrored.
DistanceMatrix distance_matrices(const BarcodeStore& store, Metric metric, int dimension,
                                 Channel channel, double prune = 0.0, int workers = 1);

enum class Design { one_vs_rest_all, vs_single };

std::string_view design_name(Design design);
std::optional<Design> parse_design(std::string_view name);

struct ExperimentCell {
  std::string target;
  Channel channel = Channel::red;
  int dimension = 0;
  Metric metric = Metric::bottleneck;
  PermutationOutcome outcome;
};

struct ExperimentConfig {
  Design design = Design::one_vs_rest_all;
  std::int64_t n_perms = kDefaultPermutations;
  std::uint64_t seed = 0;
  double alpha = kDefaultAlpha;
  double prune = 0.0;
  int workers = 1;
};

/// Every permutation test of one design. Cells are ordered by (target,
/// metric, dimension, channel).
struct ExperimentReport {
  ExperimentConfig config;
  std::vector<std::string> targets;
  std::map<std::string, std::size_t> group_sizes;
  std::vector<ExperimentCell> cells;

  const ExperimentCell& cell(const std::string& target, Channel channel, int dimension,
                             Metric metric) const;
};

/// Groups tested by a design: every group for one-vs-rest-all (at least two
/// groups required); the single size-1 group for vs-single (which must be
/// the only singleton, with at least one other image). Throws ConfigError
/// otherwise.
std::vector<std::string> design_targets(Design design,
                                        const std::map<std::string, std::string>& groups);

/// Run the 20 tests (5 channels x 2 dimensions x 2 metrics) per target.
/// In vs-single the tested sample is the rest of the corpus against the
/// singleton, so the pool splits into C(n, n-1) = n partitions. When
/// `matrix_dir` is set, the 20 distance matrices are written there as CSV.
ExperimentReport run_experiment(const BarcodeStore& store, const ExperimentConfig& config,
                                const std::filesystem::path* matrix_dir = nullptr,
                                RunRecord* record = nullptr);

ExperimentReport run_experiment(const CorpusManifest& manifest,
                                const std::filesystem::path& cache_dir,
                                const ExperimentConfig& config,
                                const std::filesystem::path* matrix_dir = nullptr,
                                RunRecord* record = nullptr);

}  // namespace paintph
