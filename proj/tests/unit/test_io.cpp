#include "oracles.hpp"

#include <doctest.h>

#include "sphframe/errors.hpp"
#include "sphframe/image.hpp"
#include "sphframe/io.hpp"

#include <json.hpp>
#include <png.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

using namespace sphframe;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sphframe_test_io";
  fs::create_directories(dir);
  return dir / name;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::numerical;
}

void write_gray_png(const fs::path& path, int w, int h, int depth, bool alpha,
                    const std::vector<unsigned>& samples) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  REQUIRE(fp);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), depth,
               alpha ? PNG_COLOR_TYPE_GRAY_ALPHA : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const int channels = alpha ? 2 : 1;
  const int bytes = depth / 8;
  std::vector<unsigned char> row(static_cast<std::size_t>(w * channels * bytes));
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c)
      for (int ch = 0; ch < channels; ++ch) {
        const unsigned v = ch == 0 ? samples[static_cast<std::size_t>(r * w + c)] : 0xffffu;
        unsigned char* px = row.data() + (c * channels + ch) * bytes;
        if (bytes == 2) {
          px[0] = static_cast<unsigned char>((v >> 8) & 0xff);
          px[1] = static_cast<unsigned char>(v & 0xff);
        } else {
          px[0] = static_cast<unsigned char>(v & 0xff);
        }
      }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace

TEST_CASE("SPHS round trip is byte-identical") {
  const SphericalSignal s(3, oracle::random_vector(sphere_size(3), 1, -300, 300), 255.0);
  const std::string a = io::encode_signal(s);
  CHECK(a.size() == 4 + 4 * 4 + 8 + 8 * sphere_size(3));
  CHECK(a.substr(0, 4) == "SPHS");
  const SphericalSignal back = io::decode_signal(a);
  CHECK(back.level() == 3);
  CHECK(back.f_max() == 255.0);
  CHECK(std::equal(back.values().begin(), back.values().end(), s.values().begin()));
  CHECK(io::encode_signal(back) == a);

  const fs::path path = scratch("s.sphs");
  io::write_file(path, a);
  CHECK(io::encode_signal(io::decode_signal(io::read_file(path))) == a);
}

TEST_CASE("SPHS header fields are little-endian") {
  const std::string a = io::encode_signal(SphericalSignal::constant(2, 1.0, 2.0));
  auto u32 = [&](std::size_t at) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(a[at + b])) << (8 * b);
    return v;
  };
  CHECK(u32(4) == 1);
  CHECK(u32(8) == 2);
  CHECK(u32(12) == 6);
  CHECK(u32(16) == 1);
}

TEST_CASE("SPHC round trip is byte-identical") {
  const auto f = oracle::random_vector(sphere_size(4), 2);
  const FrameletCoefficients c = decompose(f, banks::spherical(), 4, 1);
  const std::string a = io::encode_coefficients(c);
  CHECK(a.substr(0, 4) == "SPHC");
  const FrameletCoefficients back = io::decode_coefficients(a);
  CHECK(back.coarse_level == 1);
  CHECK(back.fine_level == 4);
  CHECK(back.n == 6);
  CHECK(back.lowpass == c.lowpass);
  CHECK(back.highpass == c.highpass);
  CHECK(io::encode_coefficients(back) == a);

  const FrameletCoefficients other = decompose(std::vector<double>(8, 1.0), banks::dyadic_haar(), 2, 0, 2);
  CHECK(kind_of([&] { io::encode_coefficients(other); }) == ErrorKind::dimension);
}

TEST_CASE("SPHP round trip is byte-identical") {
  const PartitionTree t = PartitionTree::build(3);
  const std::string a = io::encode_partition(t);
  CHECK(a.size() == 12 + (1 + 4 + 16 + 64) * 32);
  const PartitionTree back = io::decode_partition(a);
  CHECK(back.depth() == 3);
  for (int j = 0; j <= 3; ++j)
    for (std::size_t v = 0; v < t.blocks_per_face(j); ++v) CHECK(back.level(j)[v] == t.level(j)[v]);
  CHECK(io::encode_partition(back) == a);
}

TEST_CASE("filter-bank document") {
  const FilterBank fb = banks::spherical();
  const std::string doc = io::encode_filter_bank(fb);
  const FilterBank back = io::decode_filter_bank(doc);
  CHECK(io::encode_filter_bank(back) == doc);
  CHECK(back.c() == 2.0);
  CHECK(validate_tight(back.A(), 2.0));
  CHECK(validate_left_inverse(back.Q(), back.p(), back.A()));
  CHECK(back.A()(0, 0) == 1.0 / std::sqrt(2.0));
  CHECK(back.A()(0, 1) == -1.0 / std::sqrt(2.0));
  CHECK(back.A()(0, 2) == 0.0);
  CHECK(back.A()(0, 3) == 0.0);
  for (int i = 0; i < 4; ++i) CHECK(back.p()(i) == 0.5);
  CHECK(max_abs(back.Q() - fb.Q()) == 0.0);

  // Field lines as a separate reader would see them.
  std::istringstream in(doc);
  std::string line;
  std::vector<std::string> keys;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') keys.push_back(line.substr(0, line.find(' ')));
  CHECK(keys == std::vector<std::string>{"ell", "n", "c", "A", "p", "Q"});
  char h[32];
  std::snprintf(h, sizeof h, "%.17g", 1.0 / std::sqrt(2.0));
  CHECK(doc.find(std::string("A = ") + h + " -" + h + " 0 0 ") != std::string::npos);

  for (const FilterBank& other : {banks::square_haar(), banks::dyadic_haar(), banks::triangle3()})
    CHECK(io::encode_filter_bank(io::decode_filter_bank(io::encode_filter_bank(other))) ==
          io::encode_filter_bank(other));
}

TEST_CASE("filter-bank document errors") {
  const std::string doc = io::encode_filter_bank(banks::spherical());
  CHECK(kind_of([&] { io::decode_filter_bank("ell = 4\n"); }) == ErrorKind::format);
  std::string bad = doc;
  bad.replace(bad.find("c = 2"), 5, "c = 1");
  CHECK(kind_of([&] { io::decode_filter_bank(bad); }) == ErrorKind::numerical);
  std::string junk = doc;
  junk.replace(junk.find("p = 0.5"), 7, "p = x.5");
  CHECK(kind_of([&] { io::decode_filter_bank(junk); }) == ErrorKind::format);
}

TEST_CASE("malformed containers") {
  const std::string good = io::encode_signal(SphericalSignal::constant(1, 1.0, 1.0));
  CHECK(kind_of([&] { io::decode_signal(good.substr(0, good.size() - 3)); }) == ErrorKind::format);
  CHECK(kind_of([&] { io::decode_signal(good + "x"); }) == ErrorKind::format);
  std::string magic = good;
  magic[3] = 'X';
  CHECK(kind_of([&] { io::decode_signal(magic); }) == ErrorKind::format);
  std::string version = good;
  version[4] = 2;
  CHECK(kind_of([&] { io::decode_signal(version); }) == ErrorKind::format);
  CHECK(kind_of([&] { io::decode_coefficients(good); }) == ErrorKind::format);
  CHECK(kind_of([&] { io::decode_partition(""); }) == ErrorKind::format);
  CHECK(kind_of([&] { io::read_file("/nonexistent/file.sphs"); }) == ErrorKind::io);
}

TEST_CASE("report JSON") {
  ExperimentReport r;
  r.dataset = "d";
  r.seed = 3;
  r.levels = 2;
  ExperimentCell c;
  c.rate = 0.1;
  c.method = Shrinkage::local_soft;
  c.psnr_before = {20.0};
  c.psnr_after = {25.0};
  c.psnr_before_mean = 20.0;
  c.psnr_after_mean = 25.0;
  c.improvement = 5.0;
  r.cells.push_back(c);
  const auto j = nlohmann::json::parse(io::encode_report(r));
  CHECK(j["dataset"] == "d");
  CHECK(j["seed"] == 3);
  CHECK(j["cells"][0]["method"] == "localsoft");
  CHECK(j["cells"][0]["improvement"] == 5.0);
  CHECK(j["cells"][0]["psnr_after"].size() == 1);
}

TEST_CASE("PGM decoding") {
  const std::string ascii = "P2\n# comment\n3 2\n255\n0 10 20\n30 40 255\n";
  const Grid a = image::decode_pgm(ascii);
  CHECK(a.width == 3);
  CHECK(a.height == 2);
  CHECK(a.at(0, 1) == 10.0);
  CHECK(a.at(1, 2) == 255.0);

  std::string binary = "P5\n2 2\n255\n";
  binary += std::string("\x00\x7f\x80\xff", 4);
  const Grid b = image::decode_pgm(binary);
  CHECK(b.values == std::vector<double>{0, 127, 128, 255});
  CHECK(image::encode_pgm(b) == binary);

  std::string wide = "P5\n1 2\n65535\n";
  wide += std::string("\x01\x00\xff\xff", 4);
  CHECK(image::decode_pgm(wide).values == std::vector<double>{256, 65535});

  CHECK(kind_of([&] { image::decode_pgm("P6\n1 1\n255\n\x01"); }) == ErrorKind::format);
  CHECK(kind_of([&] { image::decode_pgm("P5\n4 4\n255\n\x01"); }) == ErrorKind::format);
}

TEST_CASE("PNG decoding") {
  const fs::path p8 = scratch("g8.png");
  write_gray_png(p8, 3, 2, 8, false, {0, 50, 100, 150, 200, 250});
  const Grid g = image::read_image(p8);
  CHECK(g.width == 3);
  CHECK(g.height == 2);
  CHECK(g.values == std::vector<double>{0, 50, 100, 150, 200, 250});

  const fs::path pa = scratch("ga16.png");
  write_gray_png(pa, 2, 1, 16, true, {1000, 65535});
  CHECK(image::read_image(pa).values == std::vector<double>{1000, 65535});

  const fs::path pgm = scratch("g.pgm");
  io::write_file(pgm, image::encode_pgm(g));
  CHECK(image::read_image(pgm).values == g.values);
}

TEST_CASE("raster export") {
  std::vector<double> v(sphere_size(2));
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = static_cast<double>(k) - 10.0;
  const SphericalSignal s(2, v, 300.0);
  const fs::path dir = scratch("raster");
  const auto range = image::export_rasters(s, dir);
  CHECK(range.min == -10.0);
  CHECK(range.max == static_cast<double>(v.size()) - 11.0);
  for (int f = 1; f <= 6; ++f) {
    const Grid g = image::decode_pgm(io::read_file(dir / ("face" + std::to_string(f) + ".pgm")));
    CHECK(g.width == 4);
    CHECK(g.height == 4);
  }
  // Face 1 cell of quadtree index 0 sits at the bottom-left and holds the minimum.
  const Grid f1 = image::decode_pgm(io::read_file(dir / "face1.pgm"));
  CHECK(f1.at(3, 0) == 0.0);
  const Grid f6 = image::decode_pgm(io::read_file(dir / "face6.pgm"));
  CHECK(f6.at(0, 3) == 255.0);
  const auto side = nlohmann::json::parse(io::read_file(dir / "raster.json"));
  CHECK(side["level"] == 2);
  CHECK(side["min"] == -10.0);
  CHECK(side["f_max"] == 300.0);
}
