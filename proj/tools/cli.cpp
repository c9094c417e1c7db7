#include "cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "paintph/cubical.hpp"
#include "paintph/errors.hpp"
#include "paintph/image_io.hpp"
#include "paintph/pipeline.hpp"
#include "paintph/report.hpp"
#include "paintph/toy.hpp"

namespace paintph::cli {

namespace fs = std::filesystem;

namespace {

int default_workers() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

struct ChannelsArgs {
  std::string image;
  std::optional<int> threshold;
  std::optional<Index> resize;
  std::string out;
};

struct BarcodesArgs {
  std::string manifest;
  std::string cache;
  std::optional<Index> resize;
  int workers = default_workers();
};

struct DistmatArgs {
  std::string cache;
  std::string metric;
  int dim = 0;
  std::string channel;
  double prune = 0.0;
  int workers = default_workers();
  std::string out;
};

struct PermtestArgs {
  std::string cache;
  std::string design;
  std::int64_t n_perms = kDefaultPermutations;
  std::uint64_t seed = 0;
  double alpha = kDefaultAlpha;
  double prune = 0.0;
  int workers = default_workers();
  std::string out;
};

struct ReportArgs {
  std::string results;
  std::string cache;
  std::string out;
};

struct ToyArgs {
  std::string kind = "styles";
  std::string out;
};

void run_channels(const ChannelsArgs& a, std::ostream& out) {
  RgbImage img = load_image(a.image);
  if (a.resize) img = resize_capped(img, *a.resize);
  const ChannelSet channels = extract_channels(img);
  fs::create_directories(a.out);
  for (Channel c : kChannels) {
    const std::string name(channel_name(c));
    write_png(fs::path(a.out) / (name + ".png"), channels[c]);
    if (a.threshold) {
      write_png(fs::path(a.out) / (name + "_t" + std::to_string(*a.threshold) + ".png"),
                binarize(channels[c], *a.threshold));
    }
  }
  out << "wrote " << (a.threshold ? 10 : 5) << " images (" << img.width << "x" << img.height
      << ") to " << a.out << "\n";
}

void run_barcodes(const BarcodesArgs& a, std::ostream& out) {
  CorpusManifest manifest = load_manifest(a.manifest);
  manifest.options.resize = a.resize;
  RunRecord record;
  const BarcodeStore store = compute_all_barcodes(manifest, a.cache, a.workers, &record);
  record.options["cache"] = a.cache;
  write_run_record(fs::path(a.cache) / "run_record.json", record);
  out << store.images().size() << " images: " << record.counters["images_computed"]
      << " computed, " << record.counters["images_cached"] << " from cache\n";
}

void run_distmat(const DistmatArgs& a, std::ostream& out) {
  const auto metric = parse_metric(a.metric);
  if (!metric) throw ConfigError("unknown metric '" + a.metric + "'");
  const auto channel = parse_channel(a.channel);
  if (!channel) throw ConfigError("unknown channel '" + a.channel + "'");
  const BarcodeStore store = BarcodeStore::load(a.cache);
  const DistanceMatrix dmat = distance_matrices(store, *metric, a.dim, *channel, a.prune, a.workers);
  if (const auto parent = fs::path(a.out).parent_path(); !parent.empty())
    fs::create_directories(parent);
  write_distance_csv(a.out, dmat);
  out << dmat.size() << "x" << dmat.size() << " matrix written to " << a.out << "\n";
}

void run_permtest(const PermtestArgs& a, std::ostream& out) {
  const auto design = parse_design(a.design);
  if (!design) throw ConfigError("unknown design '" + a.design + "'");
  if (a.n_perms < 1) throw ConfigError("--n-perms must be at least 1");
  if (!(a.alpha > 0 && a.alpha < 1)) throw ConfigError("--alpha must lie in (0, 1)");

  const BarcodeStore store = BarcodeStore::load(a.cache);
  ExperimentConfig config;
  config.design = *design;
  config.n_perms = a.n_perms;
  config.seed = a.seed;
  config.alpha = a.alpha;
  config.prune = a.prune;
  config.workers = a.workers;

  RunRecord record;
  record.manifest_digest = store.manifest_digest();
  const fs::path out_dir = a.out;
  const fs::path matrix_dir = out_dir / "matrices";
  const ExperimentReport report = run_experiment(store, config, &matrix_dir, &record);
  for (const auto& rel : write_report_bundle(report, out_dir))
    record.outputs.push_back((out_dir / rel).generic_string());
  record.options["cache"] = a.cache;
  write_run_record(out_dir / "run_record.json", record);

  std::int64_t significant = 0;
  for (const auto& c : report.cells) significant += c.outcome.significant;
  out << report.cells.size() << " tests (" << significant << " significant); report in "
      << (out_dir / "report.md").generic_string() << "\n";
}

void run_report(const ReportArgs& a, std::ostream& out) {
  const fs::path results = a.results.empty() ? fs::path(a.out) : fs::path(a.results);
  const fs::path outcomes = results / "outcomes.json";
  std::ifstream in(outcomes, std::ios::binary);
  if (!in) throw IntegrityError("no outcomes.json in " + results.string() + " (run `permtest` first)");
  std::stringstream text;
  text << in.rdbuf();
  const ExperimentReport report = report_from_json(text.str());

  std::string cache = a.cache;
  if (cache.empty()) {
    const RunRecord previous = read_run_record(results / "run_record.json");
    const auto it = previous.options.find("cache");
    if (it == previous.options.end())
      throw ConfigError("no cache recorded in " + (results / "run_record.json").string() +
                        "; pass --cache");
    cache = it->second;
  }
  const BarcodeStore store = BarcodeStore::load(cache);
  const auto written = write_full_report(report, store, a.out);
  out << written.size() << " files written to " << a.out << "\n";
}

void run_toy(const ToyArgs& a, std::ostream& out) {
  if (a.kind == "styles")
    write_toy_corpus(a.out);
  else if (a.kind == "vs-single")
    write_vs_single_corpus(a.out);
  else
    throw ConfigError("unknown toy corpus '" + a.kind + "'");
  out << "toy corpus written to " << a.out << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Persistent-homology signatures of images and permutation tests between groups"};
  app.set_version_flag("--version", std::string(PAINTPH_VERSION));
  app.require_subcommand(1);

  const auto channel_names = std::vector<std::string>{"red", "green", "blue", "gray", "edge"};

  ChannelsArgs ch;
  auto* channels = app.add_subcommand("channels", "Write the five channel images of one picture");
  channels->add_option("image", ch.image, "Input PNG or JPEG")->required();
  channels->add_option("--binarize", ch.threshold, "Also write sublevel sets at this threshold")
      ->check(CLI::Range(0, 255));
  channels->add_option("--resize", ch.resize, "Cap the longer side at N pixels")
      ->check(CLI::PositiveNumber);
  channels->add_option("-o,--out", ch.out, "Output directory")->required();

  BarcodesArgs bc;
  auto* barcodes = app.add_subcommand("barcodes", "Compute and cache barcodes for a corpus");
  barcodes->add_option("--manifest", bc.manifest, "CSV with header image_id,path,group")->required();
  barcodes->add_option("--cache", bc.cache, "Barcode cache directory")->required();
  barcodes->add_option("--resize", bc.resize, "Cap the longer side at N pixels")
      ->check(CLI::PositiveNumber);
  barcodes->add_option("--workers", bc.workers, "Worker threads")->check(CLI::PositiveNumber);

  DistmatArgs dm;
  auto* distmat = app.add_subcommand("distmat", "Write one pairwise distance matrix as CSV");
  distmat->add_option("--cache", dm.cache, "Barcode cache directory")->required();
  distmat->add_option("--metric", dm.metric, "b (bottleneck) or w1 (1-Wasserstein)")->required();
  distmat->add_option("--dim", dm.dim, "Homological dimension")->required()->check(CLI::Range(0, 1));
  distmat->add_option("--channel", dm.channel, "Channel")
      ->required()
      ->check(CLI::IsMember(channel_names));
  distmat->add_option("--prune", dm.prune, "1-Wasserstein only: drop intervals shorter than this")
      ->check(CLI::NonNegativeNumber);
  distmat->add_option("--workers", dm.workers, "Worker threads")->check(CLI::PositiveNumber);
  distmat->add_option("-o,--out", dm.out, "Output CSV")->required();

  PermtestArgs pt;
  auto* permtest = app.add_subcommand("permtest", "Run every permutation test of a design");
  permtest->add_option("--cache", pt.cache, "Barcode cache directory")->required();
  permtest->add_option("--design", pt.design, "one-vs-rest-all or vs-single")
      ->required()
      ->check(CLI::IsMember({"one-vs-rest-all", "vs-single"}));
  permtest->add_option("--n-perms", pt.n_perms, "Permutations per test")->capture_default_str();
  permtest->add_option("--seed", pt.seed, "Seed for Monte Carlo tests")->capture_default_str();
  permtest->add_option("--alpha", pt.alpha, "Two-sided significance level")->capture_default_str();
  permtest->add_option("--prune", pt.prune, "1-Wasserstein only: drop intervals shorter than this")
      ->check(CLI::NonNegativeNumber);
  permtest->add_option("--workers", pt.workers, "Worker threads")->check(CLI::PositiveNumber);
  permtest->add_option("-o,--out", pt.out, "Output directory")->required();

  ReportArgs rp;
  auto* report = app.add_subcommand("report", "Render tables and persistence diagrams");
  report->add_option("--results", rp.results, "permtest output directory (default: --out)");
  report->add_option("--cache", rp.cache, "Barcode cache (default: the one permtest used)");
  report->add_option("-o,--out", rp.out, "Output directory")->required();

  ToyArgs ty;
  auto* toy = app.add_subcommand("toy", "Write a bundled synthetic corpus");
  toy->add_option("--kind", ty.kind, "styles or vs-single")->capture_default_str();
  toy->add_option("-o,--out", ty.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  try {
    if (*channels) run_channels(ch, out);
    else if (*barcodes) run_barcodes(bc, out);
    else if (*distmat) run_distmat(dm, out);
    else if (*permtest) run_permtest(pt, out);
    else if (*report) run_report(rp, out);
    else if (*toy) run_toy(ty, out);
    return kOk;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ContractViolation& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IntegrityError& e) {
    err << "data integrity error: " << e.what() << "\n";
    return kIntegrityError;
  } catch (const FormatError& e) {
    err << "data integrity error: " << e.what() << "\n";
    return kIntegrityError;
  } catch (const IoError& e) {
    err << "data integrity error: " << e.what() << "\n";
    return kIntegrityError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace paintph::cli
