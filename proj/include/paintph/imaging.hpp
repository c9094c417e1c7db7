#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "paintph/grid.hpp"

namespace paintph {

/// Decoded 8-bit RGB image. Pixels are stored row-major, one (r, g, b) triple
/// per row of `pixels`, so pixel (x, y) lives at row `y * width + x`.
struct RgbImage {
  using PixelArray = Eigen::Array<std::uint8_t, Eigen::Dynamic, 3, Eigen::RowMajor>;

  Index width = 0;
  Index height = 0;
  PixelArray pixels;

  RgbImage() = default;
  RgbImage(Index w, Index h);

  auto pixel(Index x, Index y) { return pixels.row(y * width + x); }
  auto pixel(Index x, Index y) const { return pixels.row(y * width + x); }

  /// Grid of one colour component (0 = red, 1 = green, 2 = blue).
  IntensityGrid component(int c) const;

  friend bool operator==(const RgbImage& a, const RgbImage& b) {
    return a.width == b.width && a.height == b.height && (a.pixels == b.pixels).all();
  }
};

enum class Channel { red, green, blue, gray, edge };

inline constexpr std::array<Channel, 5> kChannels{Channel::red, Channel::green, Channel::blue,
                                                  Channel::gray, Channel::edge};

std::string_view channel_name(Channel c);
std::optional<Channel> parse_channel(std::string_view name);

/// The five per-image intensity channels. All grids share one shape.
class ChannelSet {
 public:
  ChannelSet(IntensityGrid red, IntensityGrid green, IntensityGrid blue, IntensityGrid gray,
             IntensityGrid edge);

  const IntensityGrid& operator[](Channel c) const { return grids_[static_cast<int>(c)]; }
  Index width() const { return grids_[0].cols(); }
  Index height() const { return grids_[0].rows(); }

 private:
  std::array<IntensityGrid, 5> grids_;
};

inline constexpr Index kDefaultMaxSide = 512;

/// Downscale so the longest side is at most `max_side` (bilinear, aspect kept).
/// Images already within bounds are returned unchanged.
RgbImage resize_capped(const RgbImage& img, Index max_side = kDefaultMaxSide);

/// Rec.601 luma, rounded half away from zero.
IntensityGrid grayscale(const RgbImage& img);

/// Inverted, globally normalised Sobel magnitude of the grayscale image:
/// strong edges map to 0, flat regions to 255.
IntensityGrid edge_map(const RgbImage& img);
IntensityGrid edge_map(const IntensityGrid& gray);

ChannelSet extract_channels(const RgbImage& img);

}  // namespace paintph
