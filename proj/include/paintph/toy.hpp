#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "paintph/imaging.hpp"

namespace paintph {

/// Synthetic styles of the bundled toy corpus.
enum class ToyStyle { blobs, stripes, rings };

std::string_view toy_style_name(ToyStyle style);

/// Deterministic size x size painting-like image of the given style.
RgbImage make_toy_image(ToyStyle style, std::uint64_t seed, Index size = 64);

/// 12 images (4 per style) plus manifest.csv.
void write_toy_corpus(const std::filesystem::path& dir);

/// 10 blob images plus one ring image as a singleton group, plus
/// manifest.csv.
void write_vs_single_corpus(const std::filesystem::path& dir);

}  // namespace paintph
