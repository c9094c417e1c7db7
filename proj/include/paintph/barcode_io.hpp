#pragma once

#include <filesystem>
#include <string>

#include "paintph/imaging.hpp"
#include "paintph/persistence.hpp"

namespace paintph {

inline constexpr int kBarcodeSchemaVersion = 1;

/// One serialized barcode: the JSON document
///   {schema_version, image_id, channel, dimension, cap, intervals}
/// with the essential class written as death == cap.
struct BarcodeRecord {
  std::string image_id;
  Channel channel = Channel::red;
  Barcode barcode;
};

std::string barcode_to_json(const BarcodeRecord& record);
BarcodeRecord barcode_from_json(const std::string& text);

void write_barcode(const std::filesystem::path& path, const BarcodeRecord& record);
BarcodeRecord read_barcode(const std::filesystem::path& path);

}  // namespace paintph
