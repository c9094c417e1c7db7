#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "paintph/grid.hpp"
#include "paintph/imaging.hpp"

namespace paintph {

/// Read a PNG or JPEG file. Throws IoError if the file cannot be read and
/// FormatError if the bytes are not a complete PNG/JPEG stream.
RgbImage load_image(const std::filesystem::path& path);

/// Decode an in-memory PNG or JPEG. Alpha is composited over white; palette
/// and grayscale inputs are expanded to RGB.
RgbImage decode_image(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const IntensityGrid& grid);
/// 1-bit PNG; included (true) pixels are written black.
void write_png(const std::filesystem::path& path, const BitGrid& bits);
void write_png(const std::filesystem::path& path, const RgbImage& img);

}  // namespace paintph
