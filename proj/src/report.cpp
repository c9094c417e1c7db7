#include "paintph/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "paintph/errors.hpp"

namespace paintph {

using Json = nlohmann::ordered_json;

namespace {

std::string shortest(double d) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

std::string fixed3(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", d);
  return buf;
}

std::string safe_name(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out;
}

// CSV field quoting for free-form labels.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string block_title(Metric metric, int dim) {
  return std::to_string(dim) + "-PH " + (metric == Metric::bottleneck ? "Bottleneck" : "1-Wasserstein");
}

std::string flag_word(ExtremumFlag flag) {
  switch (flag) {
    case ExtremumFlag::max: return "Max";
    case ExtremumFlag::min: return "min";
    case ExtremumFlag::none: return "-";
  }
  return "-";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

Json outcome_json(const PermutationOutcome& o) {
  return {
      {"observed", o.observed},
      {"q", o.q},
      {"n_permutations", o.n_permutations},
      {"count_le", o.count_le},
      {"count_ge", o.count_ge},
      {"ties", o.ties},
      {"mode", mode_name(o.mode)},
      {"seed", o.seed ? Json(*o.seed) : Json(nullptr)},
      {"alpha", o.alpha},
      {"flag", flag_name(o.flag)},
      {"significant", o.significant},
      {"tie_warning", o.tie_warning()},
      {"size_a", o.size_a},
      {"size_b", o.size_b},
  };
}

PermutationOutcome outcome_from_json(const Json& j) {
  PermutationOutcome o;
  o.observed = j.at("observed").get<double>();
  o.q = j.at("q").get<double>();
  o.n_permutations = j.at("n_permutations").get<std::int64_t>();
  o.count_le = j.at("count_le").get<std::int64_t>();
  o.count_ge = j.at("count_ge").get<std::int64_t>();
  o.ties = j.at("ties").get<std::int64_t>();
  o.mode = j.at("mode").get<std::string>() == "exhaustive" ? PermutationMode::exhaustive
                                                           : PermutationMode::monte_carlo;
  if (!j.at("seed").is_null()) o.seed = j.at("seed").get<std::uint64_t>();
  o.alpha = j.at("alpha").get<double>();
  const auto flag = j.at("flag").get<std::string>();
  o.flag = flag == "MAX" ? ExtremumFlag::max : flag == "MIN" ? ExtremumFlag::min : ExtremumFlag::none;
  o.significant = j.at("significant").get<bool>();
  o.size_a = j.at("size_a").get<Eigen::Index>();
  o.size_b = j.at("size_b").get<Eigen::Index>();
  return o;
}

Json cell_json(const ExperimentCell& c) {
  return {{"target", c.target},
          {"channel", channel_name(c.channel)},
          {"dimension", c.dimension},
          {"metric", metric_name(c.metric)},
          {"outcome", outcome_json(c.outcome)}};
}

}  // namespace

std::string outcomes_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "design,target,channel,dimension,metric,observed,q,n_permutations,count_le,count_ge,ties,"
         "mode,seed,flag,significant,tie_warning\n";
  for (const auto& c : report.cells) {
    const auto& o = c.outcome;
    out << design_name(report.config.design) << ',' << csv_field(c.target) << ','
        << channel_name(c.channel) << ',' << c.dimension << ',' << metric_name(c.metric) << ','
        << shortest(o.observed) << ',' << fixed3(o.q) << ',' << o.n_permutations << ','
        << o.count_le << ',' << o.count_ge << ',' << o.ties << ',' << mode_name(o.mode) << ','
        << (o.seed ? std::to_string(*o.seed) : "") << ',' << flag_name(o.flag) << ','
        << (o.significant ? "true" : "false") << ',' << (o.tie_warning() ? "true" : "false")
        << '\n';
  }
  return out.str();
}

std::string table_csv(const ExperimentReport& report, Metric metric, int dimension) {
  std::ostringstream out;
  if (report.config.design == Design::vs_single) {
    out << "target";
    for (Channel ch : kChannels) out << ',' << channel_name(ch);
    out << '\n';
    for (const auto& target : report.targets) {
      out << csv_field(target);
      for (Channel ch : kChannels)
        out << ',' << flag_word(report.cell(target, ch, dimension, metric).outcome.flag);
      out << '\n';
    }
    return out.str();
  }
  out << "target";
  for (Channel ch : kChannels) out << ',' << channel_name(ch);
  out << '\n';
  for (const auto& target : report.targets) {
    out << csv_field(target);
    for (Channel ch : kChannels) {
      const auto& o = report.cell(target, ch, dimension, metric).outcome;
      out << ',' << fixed3(o.q);
      if (o.significant) out << " S";
      if (o.flag != ExtremumFlag::none) out << ' ' << flag_name(o.flag);
    }
    out << '\n';
  }
  return out.str();
}

std::string report_markdown(const ExperimentReport& report) {
  const auto& cfg = report.config;
  std::ostringstream md;
  md << "# Permutation tests: " << design_name(cfg.design) << "\n\n";
  md << "- permutations per test: " << cfg.n_perms << " (exhaustive when fewer splits exist)\n";
  md << "- seed: " << cfg.seed << "\n";
  md << "- alpha: " << cfg.alpha << " (two-sided: significant when q <= " << cfg.alpha / 2
     << " or q >= " << 1 - cfg.alpha / 2 << ")\n";
  md << "- 1-Wasserstein pruning: "
     << (cfg.prune > 0 ? "persistence < " + shortest(cfg.prune) + " dropped" : "off") << "\n";
  md << "- groups:";
  for (const auto& [group, size] : report.group_sizes) md << ' ' << group << " (" << size << ")";
  md << "\n\n";

  if (cfg.design == Design::vs_single) {
    for (const auto& target : report.targets) {
      md << "## Rest of corpus vs " << target << "\n\n";
      md << "Whether the average distance of the observed split was the maximum (Max), the "
            "minimum (min) or neither (-) among all splits.\n\n";
      md << "| Distance and homological dimension |";
      for (Channel ch : kChannels) md << ' ' << channel_name(ch) << " |";
      md << "\n|---|---|---|---|---|---|\n";
      for (Metric metric : {Metric::bottleneck, Metric::wasserstein1})
        for (int dim : {0, 1}) {
          md << "| " << block_title(metric, dim) << " |";
          for (Channel ch : kChannels)
            md << ' ' << flag_word(report.cell(target, ch, dim, metric).outcome.flag) << " |";
          md << '\n';
        }
      md << '\n';
    }
    return md.str();
  }

  bool any_tie = false;
  for (Metric metric : {Metric::bottleneck, Metric::wasserstein1}) {
    for (int dim : {0, 1}) {
      md << "## " << block_title(metric, dim) << "\n\n";
      md << "q per group and channel. **Bold** values are significant; <sup>\\*</sup> "
            "(resp. <sub>\\*</sub>) marks a group whose observed average distance was the "
            "strict maximum (resp. minimum) over all splits.\n\n";
      md << "| Group |";
      for (Channel ch : kChannels) md << ' ' << channel_name(ch) << " |";
      md << "\n|---|---|---|---|---|---|\n";
      for (const auto& target : report.targets) {
        md << "| " << target << " |";
        for (Channel ch : kChannels) {
          const auto& o = report.cell(target, ch, dim, metric).outcome;
          std::string cell = fixed3(o.q);
          if (o.significant) cell = "**" + cell + "**";
          if (o.flag == ExtremumFlag::max) cell += "<sup>\\*</sup>";
          if (o.flag == ExtremumFlag::min) cell += "<sub>\\*</sub>";
          if (o.tie_warning()) {
            cell += " (tie)";
            any_tie = true;
          }
          md << ' ' << cell << " |";
        }
        md << '\n';
      }
      md << '\n';
    }
  }
  if (any_tie)
    md << "(tie): significant only because split statistics tied with the observed one.\n";
  return md.str();
}

std::string report_to_json(const ExperimentReport& report) {
  Json cells = Json::array();
  for (const auto& c : report.cells) cells.push_back(cell_json(c));
  const Json doc = {
      {"schema_version", 1},
      {"design", design_name(report.config.design)},
      {"n_perms", report.config.n_perms},
      {"seed", report.config.seed},
      {"alpha", report.config.alpha},
      {"prune", report.config.prune},
      {"targets", report.targets},
      {"group_sizes", report.group_sizes},
      {"cells", std::move(cells)},
  };
  return doc.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  try {
    const Json doc = Json::parse(text);
    ExperimentReport report;
    const auto design = parse_design(doc.at("design").get<std::string>());
    if (!design) throw FormatError("report: unknown design");
    report.config.design = *design;
    report.config.n_perms = doc.at("n_perms").get<std::int64_t>();
    report.config.seed = doc.at("seed").get<std::uint64_t>();
    report.config.alpha = doc.at("alpha").get<double>();
    report.config.prune = doc.at("prune").get<double>();
    report.targets = doc.at("targets").get<std::vector<std::string>>();
    report.group_sizes = doc.at("group_sizes").get<std::map<std::string, std::size_t>>();
    for (const auto& c : doc.at("cells")) {
      ExperimentCell cell;
      cell.target = c.at("target").get<std::string>();
      const auto channel = parse_channel(c.at("channel").get<std::string>());
      const auto metric = parse_metric(c.at("metric").get<std::string>());
      if (!channel || !metric) throw FormatError("report: bad cell");
      cell.channel = *channel;
      cell.metric = *metric;
      cell.dimension = c.at("dimension").get<int>();
      cell.outcome = outcome_from_json(c.at("outcome"));
      report.cells.push_back(std::move(cell));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report: ") + e.what());
  }
}

std::string diagram_svg(const Barcode& h0, const Barcode& h1, const std::string& title) {
  constexpr double kSize = 420, kMargin = 40, kSpan = kSize - 2 * kMargin;
  auto px = [&](double v) { return kMargin + v / kEssentialCap * kSpan; };
  auto py = [&](double v) { return kSize - kMargin - v / kEssentialCap * kSpan; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kSize / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\">" << xml_escape(title) << "</text>\n";
  svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(256) << "\" y2=\""
      << py(0) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0) << "\" y2=\""
      << py(256) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(256) << "\" y2=\""
      << py(256) << "\" stroke=\"gray\"/>\n";
  svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(256) << "\" x2=\"" << px(256) << "\" y2=\""
      << py(256) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  svg << "<text x=\"" << kSize / 2 << "\" y=\"" << kSize - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">birth</text>\n";
  svg << "<text x=\"12\" y=\"" << kSize / 2 << "\" font-family=\"sans-serif\" font-size=\"11\" "
      << "transform=\"rotate(-90 12 " << kSize / 2 << ")\">death</text>\n";
  auto plot = [&](const Barcode& b, const char* colour) {
    for (const Interval& i : b.intervals) {
      const double death = i.is_essential() ? kEssentialCap : i.death;
      svg << "<circle cx=\"" << px(i.birth) << "\" cy=\"" << py(death) << "\" r=\"2.5\" fill=\""
          << colour << "\" fill-opacity=\"0.5\"/>\n";
    }
  };
  plot(h0, "#1f77b4");
  plot(h1, "#d62728");
  svg << "<text x=\"" << kSize - kMargin << "\" y=\"" << kMargin + 20
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#1f77b4\">H0 ("
      << h0.intervals.size() << ")</text>\n";
  svg << "<text x=\"" << kSize - kMargin << "\" y=\"" << kMargin + 34
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#d62728\">H1 ("
      << h1.intervals.size() << ")</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::string> write_report_bundle(const ExperimentReport& report,
                                             const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir / "outcomes");
  std::vector<std::string> written;
  auto emit = [&](const std::string& rel, const std::string& text) {
    write_text(out_dir / rel, text);
    written.push_back(rel);
  };

  emit("outcomes.json", report_to_json(report));
  for (const auto& c : report.cells) {
    Json doc = cell_json(c);
    doc["design"] = design_name(report.config.design);
    emit("outcomes/" + safe_name(c.target) + "_" + std::string(channel_name(c.channel)) + "_h" +
             std::to_string(c.dimension) + "_" + std::string(metric_name(c.metric)) + ".json",
         doc.dump(2) + "\n");
  }
  emit("outcomes.csv", outcomes_csv(report));
  for (Metric metric : {Metric::bottleneck, Metric::wasserstein1})
    for (int dim : {0, 1})
      emit("table_" + std::string(metric_name(metric)) + "_h" + std::to_string(dim) + ".csv",
           table_csv(report, metric, dim));
  emit("report.md", report_markdown(report));
  return written;
}

std::vector<std::string> write_full_report(const ExperimentReport& report, const BarcodeStore& store,
                                           const std::filesystem::path& out_dir) {
  auto written = write_report_bundle(report, out_dir);
  std::filesystem::create_directories(out_dir / "diagrams");
  for (const auto& image : store.images()) {
    for (Channel ch : kChannels) {
      const auto& pair = image.barcodes[static_cast<int>(ch)];
      const std::string rel =
          "diagrams/" + safe_name(image.id) + "_" + std::string(channel_name(ch)) + ".svg";
      write_text(out_dir / rel,
                 diagram_svg(pair.h0, pair.h1, image.id + " / " + std::string(channel_name(ch))));
      written.push_back(rel);
    }
  }
  return written;
}

}  // namespace paintph
