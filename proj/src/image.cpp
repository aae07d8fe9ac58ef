#include "sphframe/image.hpp"

#include "sphframe/errors.hpp"
#include "sphframe/io.hpp"

#include <json.hpp>
#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>

namespace sphframe::image {

namespace {

// Reads the whitespace/comment separated header tokens of a PNM file.
class PnmHeader {
 public:
  explicit PnmHeader(std::string_view bytes) : bytes_(bytes) {}

  long next_int() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) throw Error(ErrorKind::format, "malformed PGM header");
    return std::stol(std::string(bytes_.substr(start, pos_ - start)));
  }
  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }
  void skip() {
    while (pos_ < bytes_.size()) {
      const char ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

Grid decode_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2'))
    throw Error(ErrorKind::format, "not a P2/P5 graymap");
  const bool binary = bytes[1] == '5';
  PnmHeader h(bytes);
  const long width = h.next_int();
  const long height = h.next_int();
  const long maxval = h.next_int();
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535)
    throw Error(ErrorKind::format, "invalid PGM dimensions or maxval");
  Grid g(static_cast<int>(width), static_cast<int>(height));
  if (binary) {
    h.advance(1);  // single whitespace byte after maxval
    const std::size_t bps = maxval < 256 ? 1 : 2;
    if (bytes.size() < h.pos() + g.values.size() * bps)
      throw Error(ErrorKind::format, "PGM raster is truncated");
    const auto* data = reinterpret_cast<const unsigned char*>(bytes.data() + h.pos());
    for (std::size_t k = 0; k < g.values.size(); ++k)
      g.values[k] = bps == 1 ? data[k] : static_cast<double>((data[2 * k] << 8) | data[2 * k + 1]);
  } else {
    for (double& v : g.values) v = static_cast<double>(h.next_int());
  }
  return g;
}

std::string encode_pgm(const Grid& grid) {
  std::string out = "P5\n" + std::to_string(grid.width) + " " + std::to_string(grid.height) +
                    "\n255\n";
  out.reserve(out.size() + grid.values.size());
  for (double v : grid.values)
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::clamp(std::lround(v), 0L, 255L))));
  return out;
}

Grid read_png(const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "rb"), &std::fclose);
  if (!fp) throw Error(ErrorKind::io, "cannot open " + path.string());
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error(ErrorKind::io, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorKind::io, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorKind::format, "corrupt PNG " + path.string());
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  const auto color = png_get_color_type(png, info);
  if (color & PNG_COLOR_MASK_COLOR) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorKind::format, "only grayscale PNG images are supported");
  }
  if (png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);
  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const int depth = png_get_bit_depth(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  std::vector<unsigned char> raw(rowbytes * static_cast<std::size_t>(height));
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int r = 0; r < height; ++r) rows[static_cast<std::size_t>(r)] = raw.data() + r * rowbytes;
  png_read_image(png, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);

  Grid g(width, height);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const unsigned char* px = rows[static_cast<std::size_t>(r)] + (depth == 16 ? 2 * c : c);
      g.at(r, c) = depth == 16 ? static_cast<double>((px[0] << 8) | px[1]) : px[0];
    }
  return g;
}

Grid read_image(const std::filesystem::path& path) {
  const std::string bytes = io::read_file(path);
  if (bytes.size() >= 8 && static_cast<unsigned char>(bytes[0]) == 0x89 && bytes.substr(1, 3) == "PNG")
    return read_png(path);
  return decode_pgm(bytes);
}

RasterExport export_rasters(const SphericalSignal& signal, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string());
  RasterExport range;
  const auto values = signal.values();
  range.min = *std::min_element(values.begin(), values.end());
  range.max = *std::max_element(values.begin(), values.end());
  const double span = range.max - range.min;
  const auto faces = rasterize(signal);
  for (std::size_t s = 0; s < faces.size(); ++s) {
    Grid scaled = faces[s];
    for (double& v : scaled.values) v = span > 0.0 ? 255.0 * (v - range.min) / span : 0.0;
    io::write_file(dir / ("face" + std::to_string(s + 1) + ".pgm"), encode_pgm(scaled));
  }
  nlohmann::ordered_json side;
  side["level"] = signal.level();
  side["min"] = range.min;
  side["max"] = range.max;
  side["f_max"] = signal.f_max();
  io::write_file(dir / "raster.json", side.dump(2) + "\n");
  return range;
}

}  // namespace sphframe::image
