#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "paintph/pipeline.hpp"

namespace paintph {

/// Long-form CSV: one row per (target, channel, dimension, metric).
std::string outcomes_csv(const ExperimentReport& report);

/// Wide table in the layout of one (metric, dimension) block: targets as
/// rows, channels as columns. Cells hold q to three decimals followed by
/// `*` if significant, and `^max` / `_min` for strict extrema. vs-single
/// reports hold flags only.
std::string table_csv(const ExperimentReport& report, Metric metric, int dimension);

/// Markdown with the four (metric, dimension) tables. Significant q values
/// are bold; superscript / subscript asterisks mark max / min.
std::string report_markdown(const ExperimentReport& report);

std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);

/// Scatter plot of a dimension-0 and dimension-1 diagram (essential class at
/// the cap line).
std::string diagram_svg(const Barcode& h0, const Barcode& h1, const std::string& title);

/// Writes outcomes.json, outcomes/<target>_<channel>_h<d>_<metric>.json,
/// outcomes.csv, table_<metric>_h<d>.csv and report.md. Returns the paths
/// written, relative to `out_dir`.
std::vector<std::string> write_report_bundle(const ExperimentReport& report,
                                             const std::filesystem::path& out_dir);

/// write_report_bundle plus one persistence-diagram SVG per image and channel
/// under `diagrams/`.
std::vector<std::string> write_full_report(const ExperimentReport& report, const BarcodeStore& store,
                                           const std::filesystem::path& out_dir);

}  // namespace paintph
