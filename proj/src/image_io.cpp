#include "paintph/image_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include <jpeglib.h>
#include <png.h>

#include "paintph/errors.hpp"

namespace paintph {

namespace {

bool is_png(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= 8 && std::memcmp(bytes.data(), kSignature, 8) == 0;
}

bool is_jpeg(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF;
}

RgbImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    throw FormatError(std::string("png: ") + image.message);

  image.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
    std::string message = image.message;
    png_image_free(&image);
    throw FormatError("png: " + message);
  }
  if (image.width == 0 || image.height == 0) throw FormatError("png: empty image");

  RgbImage out(image.width, image.height);
  const Index n = out.width * out.height;
  for (Index i = 0; i < n; ++i) {
    const int alpha = rgba[4 * i + 3];
    for (int c = 0; c < 3; ++c) {
      const int value = rgba[4 * i + c];
      // Composite over white, rounding to nearest.
      out.pixels(i, c) =
          static_cast<std::uint8_t>((value * alpha + 255 * (255 - alpha) + 127) / 255);
    }
  }
  return out;
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// libjpeg reports truncated streams as warnings and pads with gray; treat
// any warning as fatal so a damaged file never yields a partial image.
void jpeg_emit_message(j_common_ptr cinfo, int level) {
  if (level < 0) jpeg_error_exit(cinfo);
}

// Keeps setjmp in a frame whose locals are all trivial; pixel data goes
// through `rgb`, which lives in the caller.
bool decode_jpeg_raw(std::span<const std::uint8_t> bytes, std::vector<std::uint8_t>* rgb,
                     Index* width, Index* height, std::string* error) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  err.base.emit_message = jpeg_emit_message;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    *error = err.message;
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  *width = cinfo.output_width;
  *height = cinfo.output_height;
  rgb->resize(static_cast<std::size_t>(cinfo.output_width) * cinfo.output_height * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW rows[1] = {rgb->data() + static_cast<std::size_t>(cinfo.output_scanline) *
                                          cinfo.output_width * 3};
    jpeg_read_scanlines(&cinfo, rows, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

RgbImage decode_jpeg(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> rgb;
  Index width = 0, height = 0;
  std::string error;
  if (!decode_jpeg_raw(bytes, &rgb, &width, &height, &error))
    throw FormatError("jpeg: " + error);
  if (width == 0 || height == 0) throw FormatError("jpeg: empty image");
  RgbImage out(width, height);
  for (Index i = 0; i < width * height; ++i)
    for (int c = 0; c < 3; ++c) out.pixels(i, c) = rgb[3 * i + c];
  return out;
}

void write_png_rows(const std::filesystem::path& path, Index width, Index height, int bit_depth,
                    int color_type, const std::vector<std::vector<std::uint8_t>>& rows) {
  FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw IoError("cannot open for writing: " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw IoError("png: out of memory");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw IoError("png: failed writing " + path.string());
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (const auto& r : rows) png_write_row(png, r.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read " + path.string());
  return bytes;
}

RgbImage decode_image(std::span<const std::uint8_t> bytes) {
  if (is_png(bytes)) return decode_png(bytes);
  if (is_jpeg(bytes)) return decode_jpeg(bytes);
  throw FormatError("unsupported image format (expected PNG or JPEG)");
}

RgbImage load_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_image(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_png(const std::filesystem::path& path, const IntensityGrid& grid) {
  std::vector<std::vector<std::uint8_t>> rows(grid.rows());
  for (Index y = 0; y < grid.rows(); ++y) rows[y].assign(grid.row(y).begin(), grid.row(y).end());
  write_png_rows(path, grid.cols(), grid.rows(), 8, PNG_COLOR_TYPE_GRAY, rows);
}

void write_png(const std::filesystem::path& path, const BitGrid& bits) {
  std::vector<std::vector<std::uint8_t>> rows(bits.rows());
  for (Index y = 0; y < bits.rows(); ++y) {
    rows[y].assign((bits.cols() + 7) / 8, 0);
    for (Index x = 0; x < bits.cols(); ++x)
      if (!bits(y, x)) rows[y][x / 8] |= static_cast<std::uint8_t>(0x80 >> (x % 8));
  }
  write_png_rows(path, bits.cols(), bits.rows(), 1, PNG_COLOR_TYPE_GRAY, rows);
}

void write_png(const std::filesystem::path& path, const RgbImage& img) {
  std::vector<std::vector<std::uint8_t>> rows(img.height);
  for (Index y = 0; y < img.height; ++y) {
    rows[y].resize(static_cast<std::size_t>(img.width) * 3);
    for (Index x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c) rows[y][3 * x + c] = img.pixel(x, y)(c);
  }
  write_png_rows(path, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, rows);
}

}  // namespace paintph
