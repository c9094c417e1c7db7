#include "paintph/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "paintph/digest.hpp"
#include "paintph/errors.hpp"
#include "paintph/image_io.hpp"
#include "paintph/parallel.hpp"

namespace paintph {

using Json = nlohmann::ordered_json;

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

std::map<std::string, std::string> options_map(const PipelineOptions& options) {
  std::map<std::string, std::string> out;
  out["resize"] = options.resize ? std::to_string(*options.resize) : "none";
  out["prune"] = options.prune ? std::to_string(*options.prune) : "none";
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Run records

void write_run_record(const std::filesystem::path& path, const RunRecord& record) {
  Json timings = Json::array();
  for (const auto& t : record.timings) timings.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  Json doc = {
      {"manifest_digest", record.manifest_digest},
      {"software_version", record.software_version},
      {"seed", record.seed ? Json(*record.seed) : Json(nullptr)},
      {"options", record.options},
      {"counters", record.counters},
      {"timings", std::move(timings)},
      {"outputs", record.outputs},
  };
  write_text(path, doc.dump(2) + "\n");
}

RunRecord read_run_record(const std::filesystem::path& path) {
  try {
    const Json doc = Json::parse(read_text(path));
    RunRecord r;
    r.manifest_digest = doc.at("manifest_digest").get<std::string>();
    r.software_version = doc.at("software_version").get<std::string>();
    if (!doc.at("seed").is_null()) r.seed = doc.at("seed").get<std::uint64_t>();
    r.options = doc.at("options").get<std::map<std::string, std::string>>();
    r.counters = doc.at("counters").get<std::map<std::string, std::int64_t>>();
    for (const auto& t : doc.at("timings"))
      r.timings.push_back({t.at("stage").get<std::string>(), t.at("seconds").get<double>()});
    r.outputs = doc.at("outputs").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Barcode store

std::vector<std::string> BarcodeStore::ids() const {
  std::vector<std::string> out;
  for (const auto& img : images_) out.push_back(img.id);
  return out;
}

std::map<std::string, std::string> BarcodeStore::groups() const {
  std::map<std::string, std::string> out;
  for (const auto& img : images_) out[img.id] = img.group;
  return out;
}

const Barcode& BarcodeStore::get(const std::string& id, Channel channel, int dimension) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw IntegrityError("barcode store: unknown image " + id);
  const BarcodePair& pair = images_[it->second].barcodes[static_cast<int>(channel)];
  if (dimension == 0) return pair.h0;
  if (dimension == 1) return pair.h1;
  throw ContractViolation("barcode store: dimension must be 0 or 1");
}

std::string barcode_cache_name(const std::string& digest, Channel channel, int dimension,
                               std::optional<Index> resize) {
  std::ostringstream name;
  name << digest << '_' << (resize ? "r" + std::to_string(*resize) : std::string("native")) << '_'
       << channel_name(channel) << "_h" << dimension << ".json";
  return name.str();
}

std::array<BarcodePair, 5> image_barcodes(const RgbImage& image, std::optional<Index> resize) {
  const RgbImage working = resize ? resize_capped(image, *resize) : image;
  const ChannelSet channels = extract_channels(working);
  std::array<BarcodePair, 5> out;
  for (Channel c : kChannels)
    out[static_cast<int>(c)] = compute_barcodes(build_filtration(channels[c]));
  return out;
}

namespace {

constexpr const char* kStoreIndex = "store.json";

// All ten cache files, or nullopt if any is missing or unreadable.
std::optional<std::array<BarcodePair, 5>> load_cached(const std::filesystem::path& dir,
                                                      const std::string& digest,
                                                      std::optional<Index> resize) {
  std::array<BarcodePair, 5> out;
  for (Channel c : kChannels) {
    for (int dim : {0, 1}) {
      const auto path = dir / barcode_cache_name(digest, c, dim, resize);
      if (!std::filesystem::is_regular_file(path)) return std::nullopt;
      try {
        BarcodeRecord rec = read_barcode(path);
        if (rec.channel != c || rec.barcode.dimension != dim) return std::nullopt;
        (dim == 0 ? out[static_cast<int>(c)].h0 : out[static_cast<int>(c)].h1) =
            std::move(rec.barcode);
      } catch (const std::exception&) {
        return std::nullopt;
      }
    }
  }
  return out;
}

}  // namespace

BarcodeStore compute_all_barcodes(const CorpusManifest& manifest,
                                  const std::filesystem::path& cache_dir, int workers,
                                  RunRecord* record) {
  std::filesystem::create_directories(cache_dir);
  const auto n = static_cast<Index>(manifest.entries.size());
  const std::optional<Index> resize = manifest.options.resize;

  BarcodeStore store;
  store.options_ = manifest.options;
  store.images_.resize(n);
  std::vector<std::vector<std::uint8_t>> bytes(n);

  auto fail = [&](Index i, const std::exception& e) {
    const auto& entry = manifest.entries[i];
    throw IntegrityError("image " + entry.image_id + " (" + entry.path.string() + "): " + e.what());
  };

  Stopwatch read_clock;
  parallel_for(n, workers, [&](Index i) {
    const auto& entry = manifest.entries[i];
    try {
      bytes[i] = read_file(entry.path);
    } catch (const std::exception& e) {
      fail(i, e);
    }
    store.images_[i].id = entry.image_id;
    store.images_[i].group = entry.group;
    store.images_[i].digest = sha256_hex(bytes[i]);
  });
  const double read_seconds = read_clock.seconds();

  std::vector<char> computed(n, 0);
  Stopwatch compute_clock;
  parallel_for(n, workers, [&](Index i) {
    auto& image = store.images_[i];
    if (auto cached = load_cached(cache_dir, image.digest, resize)) {
      image.barcodes = std::move(*cached);
      return;
    }
    try {
      image.barcodes = image_barcodes(decode_image(bytes[i]), resize);
      for (Channel c : kChannels) {
        const BarcodePair& pair = image.barcodes[static_cast<int>(c)];
        for (int dim : {0, 1}) {
          const auto path = cache_dir / barcode_cache_name(image.digest, c, dim, resize);
          write_barcode(path, {image.id, c, dim == 0 ? pair.h0 : pair.h1});
        }
      }
    } catch (const std::exception& e) {
      fail(i, e);
    }
    computed[i] = 1;
  });
  const double compute_seconds = compute_clock.seconds();

  Sha256 manifest_hash;
  for (const auto& [key, value] : options_map(manifest.options))
    manifest_hash.update(key).update("=").update(value).update("\n");
  for (Index i = 0; i < n; ++i) {
    store.index_.emplace(store.images_[i].id, i);
    manifest_hash.update(store.images_[i].id).update(",").update(store.images_[i].group).update(",");
    manifest_hash.update(store.images_[i].digest).update("\n");
  }
  store.manifest_digest_ = manifest_hash.finish();

  Json images = Json::array();
  for (Index i = 0; i < n; ++i) {
    const auto& img = store.images_[i];
    images.push_back({{"image_id", img.id},
                      {"group", img.group},
                      {"digest", img.digest},
                      {"path", manifest.entries[i].path.generic_string()}});
  }
  const Json index = {
      {"schema_version", kStoreSchemaVersion},
      {"manifest_digest", store.manifest_digest_},
      {"resize", resize ? Json(*resize) : Json(nullptr)},
      {"images", std::move(images)},
  };
  write_text(cache_dir / kStoreIndex, index.dump(2) + "\n");

  if (record) {
    record->manifest_digest = store.manifest_digest_;
    record->options = options_map(manifest.options);
    record->timings.push_back({"read_and_digest", read_seconds});
    record->timings.push_back({"barcodes", compute_seconds});
    const auto fresh = std::count(computed.begin(), computed.end(), 1);
    record->counters["images_computed"] = fresh;
    record->counters["images_cached"] = n - fresh;
    record->outputs.push_back((cache_dir / kStoreIndex).generic_string());
  }
  return store;
}

BarcodeStore BarcodeStore::load(const std::filesystem::path& cache_dir) {
  const auto index_path = cache_dir / kStoreIndex;
  if (!std::filesystem::is_regular_file(index_path))
    throw IntegrityError("no barcode store at " + cache_dir.string() + " (run `barcodes` first)");
  BarcodeStore store;
  try {
    const Json doc = Json::parse(read_text(index_path));
    if (doc.at("schema_version").get<int>() != kStoreSchemaVersion)
      throw IntegrityError(index_path.string() + ": unsupported schema_version");
    store.manifest_digest_ = doc.at("manifest_digest").get<std::string>();
    if (!doc.at("resize").is_null()) store.options_.resize = doc.at("resize").get<Index>();
    for (const auto& img : doc.at("images")) {
      Image image;
      image.id = img.at("image_id").get<std::string>();
      image.group = img.at("group").get<std::string>();
      image.digest = img.at("digest").get<std::string>();
      auto cached = load_cached(cache_dir, image.digest, store.options_.resize);
      if (!cached) throw IntegrityError("barcode store: missing or damaged barcodes for " + image.id);
      image.barcodes = std::move(*cached);
      store.index_.emplace(image.id, store.images_.size());
      store.images_.push_back(std::move(image));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(index_path.string() + ": " + e.what());
  }
  return store;
}

// ---------------------------------------------------------------------------
// Distances and experiments

DistanceMatrix distance_matrices(const BarcodeStore& store, Metric metric, int dimension,
                                 Channel channel, double prune, int workers) {
  const auto ids = store.ids();
  DistanceMatrix dmat(ids);
  const auto n = static_cast<Index>(ids.size());
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  std::vector<double> values(pairs.size());
  parallel_for(static_cast<Index>(pairs.size()), workers, [&](Index p) {
    const auto [i, j] = pairs[p];
    values[p] = distance(metric, store.get(ids[i], channel, dimension),
                         store.get(ids[j], channel, dimension), prune);
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) dmat.set(pairs[p].first, pairs[p].second, values[p]);
  return dmat;
}

std::string_view design_name(Design design) {
  return design == Design::one_vs_rest_all ? "one-vs-rest-all" : "vs-single";
}

std::optional<Design> parse_design(std::string_view name) {
  if (name == "one-vs-rest-all") return Design::one_vs_rest_all;
  if (name == "vs-single") return Design::vs_single;
  return std::nullopt;
}

const ExperimentCell& ExperimentReport::cell(const std::string& target, Channel channel,
                                             int dimension, Metric metric) const {
  for (const auto& c : cells)
    if (c.target == target && c.channel == channel && c.dimension == dimension && c.metric == metric)
      return c;
  throw IntegrityError("experiment report: no cell for " + target);
}

std::vector<std::string> design_targets(Design design,
                                        const std::map<std::string, std::string>& groups) {
  std::map<std::string, std::size_t> sizes;
  for (const auto& [id, group] : groups) ++sizes[group];

  if (design == Design::one_vs_rest_all) {
    if (sizes.size() < 2) throw ConfigError("one-vs-rest-all needs at least two groups");
    std::vector<std::string> targets;
    for (const auto& [group, size] : sizes) targets.push_back(group);
    return targets;
  }

  std::vector<std::string> singletons;
  for (const auto& [group, size] : sizes)
    if (size == 1) singletons.push_back(group);
  if (singletons.size() != 1)
    throw ConfigError("vs-single needs exactly one group of size 1 (found " +
                      std::to_string(singletons.size()) + ")");
  if (groups.size() < 2) throw ConfigError("vs-single needs at least one image besides the single one");
  return singletons;
}

ExperimentReport run_experiment(const BarcodeStore& store, const ExperimentConfig& config,
                                const std::filesystem::path* matrix_dir, RunRecord* record) {
  const auto groups = store.groups();
  ExperimentReport report;
  report.config = config;
  report.targets = design_targets(config.design, groups);
  for (const auto& [id, group] : groups) ++report.group_sizes[group];
  if (matrix_dir) std::filesystem::create_directories(*matrix_dir);

  double matrix_seconds = 0.0, test_seconds = 0.0;
  for (Metric metric : {Metric::bottleneck, Metric::wasserstein1}) {
    for (int dim : {0, 1}) {
      for (Channel channel : kChannels) {
        Stopwatch matrix_clock;
        const DistanceMatrix dmat =
            distance_matrices(store, metric, dim, channel, config.prune, config.workers);
        matrix_seconds += matrix_clock.seconds();
        if (matrix_dir) {
          const auto name = std::string(metric_name(metric)) + "_h" + std::to_string(dim) + "_" +
                            std::string(channel_name(channel)) + ".csv";
          write_distance_csv(*matrix_dir / name, dmat);
          if (record) record->outputs.push_back((*matrix_dir / name).generic_string());
        }

        Stopwatch test_clock;
        for (const auto& target : report.targets) {
          ExperimentCell cell{target, channel, dim, metric, {}};
          if (config.design == Design::one_vs_rest_all) {
            cell.outcome = one_vs_rest(dmat, groups, target, config.n_perms, config.seed,
                                       config.alpha, config.workers);
          } else {
            std::vector<std::string> rest;
            for (const auto& id : dmat.ids())
              if (groups.at(id) != target) rest.push_back(id);
            cell.outcome = permutation_test(dmat, rest, config.n_perms, config.seed, config.alpha,
                                            config.workers);
          }
          report.cells.push_back(std::move(cell));
        }
        test_seconds += test_clock.seconds();
      }
    }
  }

  std::stable_sort(report.cells.begin(), report.cells.end(),
                   [&](const ExperimentCell& a, const ExperimentCell& b) {
                     const auto ta = std::find(report.targets.begin(), report.targets.end(), a.target);
                     const auto tb = std::find(report.targets.begin(), report.targets.end(), b.target);
                     return std::tie(ta, a.metric, a.dimension, a.channel) <
                            std::tie(tb, b.metric, b.dimension, b.channel);
                   });

  if (record) {
    record->seed = config.seed;
    record->options["design"] = std::string(design_name(config.design));
    record->options["n_perms"] = std::to_string(config.n_perms);
    record->options["alpha"] = std::to_string(config.alpha);
    record->options["prune"] = config.prune > 0 ? std::to_string(config.prune) : "none";
    record->options["resize"] = store.options().resize ? std::to_string(*store.options().resize) : "none";
    if (record->manifest_digest.empty()) record->manifest_digest = store.manifest_digest();
    record->timings.push_back({"distance_matrices", matrix_seconds});
    record->timings.push_back({"permutation_tests", test_seconds});
  }
  return report;
}

ExperimentReport run_experiment(const CorpusManifest& manifest,
                                const std::filesystem::path& cache_dir,
                                const ExperimentConfig& config,
                                const std::filesystem::path* matrix_dir, RunRecord* record) {
  ExperimentConfig effective = config;
  if (manifest.options.prune) effective.prune = *manifest.options.prune;
  const BarcodeStore store = compute_all_barcodes(manifest, cache_dir, config.workers, record);
  return run_experiment(store, effective, matrix_dir, record);
}

}  // namespace paintph
