#include "paintph/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "paintph/errors.hpp"

namespace paintph {

RgbImage::RgbImage(Index w, Index h) : width(w), height(h), pixels(w * h, 3) {
  if (w < 1 || h < 1) throw ContractViolation("RgbImage: dimensions must be positive");
  pixels.setZero();
}

IntensityGrid RgbImage::component(int c) const {
  IntensityGrid grid(height, width);
  for (Index y = 0; y < height; ++y)
    for (Index x = 0; x < width; ++x) grid(y, x) = pixel(x, y)(c);
  return grid;
}

std::string_view channel_name(Channel c) {
  switch (c) {
    case Channel::red: return "red";
    case Channel::green: return "green";
    case Channel::blue: return "blue";
    case Channel::gray: return "gray";
    case Channel::edge: return "edge";
  }
  return "?";
}

std::optional<Channel> parse_channel(std::string_view name) {
  for (Channel c : kChannels)
    if (channel_name(c) == name) return c;
  return std::nullopt;
}

ChannelSet::ChannelSet(IntensityGrid red, IntensityGrid green, IntensityGrid blue,
                       IntensityGrid gray, IntensityGrid edge)
    : grids_{std::move(red), std::move(green), std::move(blue), std::move(gray), std::move(edge)} {
  for (const auto& g : grids_)
    if (g.rows() != grids_[0].rows() || g.cols() != grids_[0].cols())
      throw ContractViolation("ChannelSet: channel dimensions differ");
}

RgbImage resize_capped(const RgbImage& img, Index max_side) {
  if (max_side < 1) throw ContractViolation("resize_capped: max_side must be >= 1");
  const Index longest = std::max(img.width, img.height);
  if (longest <= max_side) return img;

  // Short side rounded to nearest, never below one pixel.
  auto scaled = [&](Index side) {
    return std::max<Index>(1, (2 * side * max_side + longest) / (2 * longest));
  };
  const Index w = img.width >= img.height ? max_side : scaled(img.width);
  const Index h = img.height > img.width ? max_side : scaled(img.height);

  RgbImage out(w, h);
  const double sx = static_cast<double>(img.width) / static_cast<double>(w);
  const double sy = static_cast<double>(img.height) / static_cast<double>(h);
  for (Index y = 0; y < h; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(img.height - 1));
    const Index y0 = static_cast<Index>(fy);
    const Index y1 = std::min(y0 + 1, img.height - 1);
    const double ty = fy - static_cast<double>(y0);
    for (Index x = 0; x < w; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(img.width - 1));
      const Index x0 = static_cast<Index>(fx);
      const Index x1 = std::min(x0 + 1, img.width - 1);
      const double tx = fx - static_cast<double>(x0);
      for (int c = 0; c < 3; ++c) {
        const double top = (1 - tx) * img.pixel(x0, y0)(c) + tx * img.pixel(x1, y0)(c);
        const double bottom = (1 - tx) * img.pixel(x0, y1)(c) + tx * img.pixel(x1, y1)(c);
        const double v = (1 - ty) * top + ty * bottom;
        out.pixel(x, y)(c) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return out;
}

IntensityGrid grayscale(const RgbImage& img) {
  IntensityGrid gray(img.height, img.width);
  for (Index y = 0; y < img.height; ++y) {
    for (Index x = 0; x < img.width; ++x) {
      const auto p = img.pixel(x, y);
      // 0.299 r + 0.587 g + 0.114 b in thousandths; +500 rounds half up,
      // which is half away from zero for nonnegative values.
      const int weighted = 299 * p(0) + 587 * p(1) + 114 * p(2);
      gray(y, x) = static_cast<std::uint8_t>(std::min(255, (weighted + 500) / 1000));
    }
  }
  return gray;
}

IntensityGrid edge_map(const IntensityGrid& gray) {
  const Index h = gray.rows();
  const Index w = gray.cols();
  auto at = [&](Index y, Index x) {
    return static_cast<int>(gray(std::clamp<Index>(y, 0, h - 1), std::clamp<Index>(x, 0, w - 1)));
  };

  Grid<double> magnitude(h, w);
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      const int gx = (at(y - 1, x + 1) + 2 * at(y, x + 1) + at(y + 1, x + 1)) -
                     (at(y - 1, x - 1) + 2 * at(y, x - 1) + at(y + 1, x - 1));
      const int gy = (at(y + 1, x - 1) + 2 * at(y + 1, x) + at(y + 1, x + 1)) -
                     (at(y - 1, x - 1) + 2 * at(y - 1, x) + at(y - 1, x + 1));
      magnitude(y, x) = std::sqrt(static_cast<double>(gx * gx + gy * gy));
    }
  }

  IntensityGrid edge(h, w);
  const double peak = magnitude.maxCoeff();
  if (peak == 0.0) {
    edge.setConstant(255);
    return edge;
  }
  for (Index y = 0; y < h; ++y)
    for (Index x = 0; x < w; ++x)
      edge(y, x) = static_cast<std::uint8_t>(255 - std::lround(255.0 * magnitude(y, x) / peak));
  return edge;
}

IntensityGrid edge_map(const RgbImage& img) { return edge_map(grayscale(img)); }

ChannelSet extract_channels(const RgbImage& img) {
  IntensityGrid gray = grayscale(img);
  IntensityGrid edge = edge_map(gray);
  return ChannelSet(img.component(0), img.component(1), img.component(2), std::move(gray),
                    std::move(edge));
}

}  // namespace paintph
