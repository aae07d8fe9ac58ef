#pragma once

#include "sphframe/signal.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sphframe::image {

/// Binary (P5) or ASCII (P2) graymap, 8- or 16-bit samples, returned as raw sample values.
Grid decode_pgm(std::string_view bytes);
/// P5, maxval 255. Values are rounded and clamped to [0, 255].
std::string encode_pgm(const Grid& grid);

/// Grayscale PNG (optionally with alpha, which is dropped). Color PNGs are rejected.
Grid read_png(const std::filesystem::path& path);

/// Dispatches on the file signature: PGM or PNG.
Grid read_image(const std::filesystem::path& path);

struct RasterExport {
  double min = 0.0;
  double max = 0.0;
};

/// Writes face1.pgm .. face6.pgm with values mapped affinely from [min, max] to [0, 255],
/// plus raster.json recording level, min, max and f_max.
RasterExport export_rasters(const SphericalSignal& signal, const std::filesystem::path& dir);

}  // namespace sphframe::image
