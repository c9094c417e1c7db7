#include "paintph/barcode_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "paintph/errors.hpp"

namespace paintph {

using Json = nlohmann::ordered_json;

std::string barcode_to_json(const BarcodeRecord& record) {
  Json intervals = Json::array();
  for (const Interval& i : record.barcode.intervals)
    intervals.push_back({i.birth, i.is_essential() ? kEssentialCap : i.death});
  const Json doc = {
      {"schema_version", kBarcodeSchemaVersion},
      {"image_id", record.image_id},
      {"channel", channel_name(record.channel)},
      {"dimension", record.barcode.dimension},
      {"cap", kEssentialCap},
      {"intervals", std::move(intervals)},
  };
  return doc.dump() + "\n";
}

BarcodeRecord barcode_from_json(const std::string& text) {
  try {
    const Json doc = Json::parse(text);
    if (doc.at("schema_version").get<int>() != kBarcodeSchemaVersion)
      throw FormatError("barcode: unsupported schema_version");
    if (doc.at("cap").get<int>() != kEssentialCap) throw FormatError("barcode: unexpected cap");

    BarcodeRecord record;
    record.image_id = doc.at("image_id").get<std::string>();
    const auto channel = parse_channel(doc.at("channel").get<std::string>());
    if (!channel) throw FormatError("barcode: unknown channel");
    record.channel = *channel;
    record.barcode.dimension = doc.at("dimension").get<int>();
    if (record.barcode.dimension != 0 && record.barcode.dimension != 1)
      throw FormatError("barcode: dimension must be 0 or 1");

    for (const auto& pair : doc.at("intervals")) {
      if (!pair.is_array() || pair.size() != 2) throw FormatError("barcode: malformed interval");
      const int birth = pair[0].get<int>();
      const int death = pair[1].get<int>();
      if (birth < 0 || birth > 255 || death <= birth || death > kEssentialCap)
        throw FormatError("barcode: interval out of range");
      record.barcode.intervals.push_back(
          {birth, death == kEssentialCap ? Interval::kEssential : death});
    }
    std::sort(record.barcode.intervals.begin(), record.barcode.intervals.end());
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("barcode: ") + e.what());
  }
}

void write_barcode(const std::filesystem::path& path, const BarcodeRecord& record) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << barcode_to_json(record);
  if (!out) throw IoError("cannot write " + path.string());
}

BarcodeRecord read_barcode(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return barcode_from_json(buffer.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace paintph
