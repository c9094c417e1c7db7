#include "paintph/toy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "paintph/errors.hpp"
#include "paintph/image_io.hpp"

namespace paintph {

namespace {

// splitmix64 stream; fully specified so images are identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double real(double lo, double hi) { return lo + (hi - lo) * real(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::uint64_t state_;
};

using Colour = std::array<double, 3>;

std::uint8_t clamp_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

// Light background with a faint linear wash.
void paint_background(RgbImage& img, Rng& rng) {
  const Colour base{rng.real(205, 235), rng.real(205, 235), rng.real(200, 230)};
  const double gx = rng.real(-0.15, 0.15), gy = rng.real(-0.15, 0.15);
  for (Index y = 0; y < img.height; ++y)
    for (Index x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c)
        img.pixel(x, y)(c) = clamp_byte(base[c] + gx * x + gy * y);
}

// Darkens towards `ink` by `weight` in [0, 1], keeping the darker value.
void ink_pixel(RgbImage& img, Index x, Index y, const Colour& ink, double weight) {
  if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
  for (int c = 0; c < 3; ++c) {
    const double old = img.pixel(x, y)(c);
    img.pixel(x, y)(c) = clamp_byte(std::min(old, old + (ink[c] - old) * weight));
  }
}

void paint_blobs(RgbImage& img, Rng& rng) {
  const int count = rng.integer(3, 6);
  const double size = static_cast<double>(img.width);
  for (int b = 0; b < count; ++b) {
    const double cx = rng.real(0.15, 0.85) * size, cy = rng.real(0.15, 0.85) * size;
    const double r = rng.real(0.07, 0.14) * size;
    const Colour ink{rng.real(60, 120), rng.real(20, 60), rng.real(10, 40)};
    for (Index y = 0; y < img.height; ++y)
      for (Index x = 0; x < img.width; ++x) {
        const double d = std::hypot(x - cx, y - cy) / r;
        if (d < 1.0) ink_pixel(img, x, y, ink, 1.0 - 0.5 * d * d);
      }
  }
}

void paint_stripes(RgbImage& img, Rng& rng) {
  const double angle = rng.real(0, std::numbers::pi);
  const double nx = std::cos(angle), ny = std::sin(angle);
  const double period = rng.real(7, 10) * static_cast<double>(img.width) / 64;
  const double width = period * rng.real(0.3, 0.45);
  const double phase = rng.real(0, period);
  const Colour ink{rng.real(10, 40), rng.real(40, 80), rng.real(90, 140)};
  for (Index y = 0; y < img.height; ++y)
    for (Index x = 0; x < img.width; ++x) {
      const double s = std::fmod(x * nx + y * ny + phase + 4 * period, period);
      if (s < width) ink_pixel(img, x, y, ink, 0.9);
    }
}

void paint_rings(RgbImage& img, Rng& rng) {
  const int count = rng.integer(2, 4);
  const double size = static_cast<double>(img.width);
  for (int k = 0; k < count; ++k) {
    const double cx = rng.real(0.25, 0.75) * size, cy = rng.real(0.25, 0.75) * size;
    const double r = rng.real(0.08, 0.2) * size;
    const double thickness = rng.real(1.5, 2.5) * size / 64;
    const Colour ink{rng.real(20, 60), rng.real(70, 120), rng.real(20, 60)};
    for (Index y = 0; y < img.height; ++y)
      for (Index x = 0; x < img.width; ++x)
        if (std::abs(std::hypot(x - cx, y - cy) - r) < thickness) ink_pixel(img, x, y, ink, 0.95);
  }
}

void write_manifest(const std::filesystem::path& dir,
                    const std::vector<std::pair<std::string, std::string>>& rows) {
  std::ofstream out(dir / "manifest.csv", std::ios::binary);
  if (!out) throw IoError("cannot write " + (dir / "manifest.csv").string());
  out << "image_id,path,group\n";
  for (const auto& [id, group] : rows) out << id << ',' << id << ".png," << group << '\n';
}

}  // namespace

std::string_view toy_style_name(ToyStyle style) {
  switch (style) {
    case ToyStyle::blobs: return "blobs";
    case ToyStyle::stripes: return "stripes";
    case ToyStyle::rings: return "rings";
  }
  return "blobs";
}

RgbImage make_toy_image(ToyStyle style, std::uint64_t seed, Index size) {
  if (size < 8) throw ContractViolation("make_toy_image: size must be at least 8");
  Rng rng(seed * 3 + static_cast<std::uint64_t>(style));
  RgbImage img(size, size);
  paint_background(img, rng);
  switch (style) {
    case ToyStyle::blobs: paint_blobs(img, rng); break;
    case ToyStyle::stripes: paint_stripes(img, rng); break;
    case ToyStyle::rings: paint_rings(img, rng); break;
  }
  return img;
}

void write_toy_corpus(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::pair<std::string, std::string>> rows;
  for (ToyStyle style : {ToyStyle::blobs, ToyStyle::stripes, ToyStyle::rings}) {
    for (std::uint64_t i = 0; i < 4; ++i) {
      const std::string id = std::string(toy_style_name(style)) + "_" + std::to_string(i);
      write_png(dir / (id + ".png"), make_toy_image(style, 100 + i));
      rows.emplace_back(id, std::string(toy_style_name(style)));
    }
  }
  write_manifest(dir, rows);
}

void write_vs_single_corpus(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::pair<std::string, std::string>> rows;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const std::string id = "blobs_" + std::to_string(i);
    write_png(dir / (id + ".png"), make_toy_image(ToyStyle::blobs, 200 + i));
    rows.emplace_back(id, "collection");
  }
  write_png(dir / "outlier.png", make_toy_image(ToyStyle::rings, 300));
  rows.emplace_back("outlier", "outlier");
  write_manifest(dir, rows);
}

}  // namespace paintph
