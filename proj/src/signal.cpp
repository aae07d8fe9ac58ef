#include "sphframe/signal.hpp"

#include "parallel.hpp"
#include "sphframe/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sphframe {

std::size_t face_size(int level) { return std::size_t{1} << (2 * level); }
std::size_t sphere_size(int level) { return kFaceCount * face_size(level); }

SphericalSignal::SphericalSignal(int level, std::vector<double> values, double f_max,
                                 std::string provenance)
    : level_(level), values_(std::move(values)), f_max_(f_max), provenance_(std::move(provenance)) {
  if (level < 0 || level > kMaxDepth)
    throw Error(ErrorKind::depth_limit, "signal level out of range");
  if (values_.size() != sphere_size(level))
    throw Error(ErrorKind::dimension, "signal length " + std::to_string(values_.size()) +
                                          " != 6*4^" + std::to_string(level));
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorKind::domain, "signal contains a nonfinite value");
}

SphericalSignal SphericalSignal::constant(int level, double value, double f_max) {
  return SphericalSignal(level, std::vector<double>(sphere_size(level), value), f_max);
}

std::span<const double> SphericalSignal::face(int s) const {
  const std::size_t n = face_size(level_);
  return std::span<const double>(values_).subspan(static_cast<std::size_t>(s) * n, n);
}

void to_lon_lat(const Vec3& u, double& lon, double& lat) {
  lon = std::atan2(u[1], u[0]);
  if (lon >= kPi) lon -= 2.0 * kPi;
  lat = std::asin(std::clamp(u[2], -1.0, 1.0));
}

double sample_equirect(const Grid& grid, double lon, double lat) {
  const double u = (lon + kPi) / (2.0 * kPi) * grid.width - 0.5;
  const double v = std::clamp((0.5 * kPi - lat) / kPi * grid.height - 0.5, 0.0,
                              static_cast<double>(grid.height - 1));
  const double cu = std::floor(u);
  const double cv = std::floor(v);
  const double tu = u - cu;
  const double tv = v - cv;
  const int c0 = ((static_cast<int>(cu) % grid.width) + grid.width) % grid.width;
  const int c1 = (c0 + 1) % grid.width;
  const int r0 = static_cast<int>(cv);
  const int r1 = std::min(r0 + 1, grid.height - 1);
  const double top = (1.0 - tu) * grid.at(r0, c0) + tu * grid.at(r0, c1);
  const double bottom = (1.0 - tu) * grid.at(r1, c0) + tu * grid.at(r1, c1);
  return (1.0 - tv) * top + tv * bottom;
}

SphericalSignal sample_image(const Grid& equirect, const PartitionTree& tree, int level) {
  if (equirect.empty() || equirect.width <= 0 || equirect.height <= 0)
    throw Error(ErrorKind::empty_input, "image grid is empty");
  if (level < 0 || level > tree.depth())
    throw Error(ErrorKind::level_range, "partition tree is shallower than the requested level");
  double f_max = 0.0;
  for (double v : equirect.values) f_max = std::max(f_max, std::abs(v));

  const std::size_t per_face = face_size(level);
  std::vector<double> values(sphere_size(level));
  detail::parallel_for(values.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const int face = static_cast<int>(k / per_face);
      double lon = 0.0;
      double lat = 0.0;
      to_lon_lat(tree.block_center(face, level, k % per_face), lon, lat);
      values[k] = sample_equirect(equirect, lon, lat);
    }
  });
  return SphericalSignal(level, std::move(values), f_max);
}

Cell quadtree_cell(std::size_t index, int level) {
  int col = 0;
  int row_from_bottom = 0;
  for (int k = 0; k < level; ++k) {
    col |= static_cast<int>((index >> (2 * k)) & 1u) << k;
    row_from_bottom |= static_cast<int>((index >> (2 * k + 1)) & 1u) << k;
  }
  return {(1 << level) - 1 - row_from_bottom, col};
}

std::size_t quadtree_index(int row, int col, int level) {
  const int row_from_bottom = (1 << level) - 1 - row;
  std::size_t index = 0;
  for (int k = 0; k < level; ++k) {
    index |= static_cast<std::size_t>((col >> k) & 1) << (2 * k);
    index |= static_cast<std::size_t>((row_from_bottom >> k) & 1) << (2 * k + 1);
  }
  return index;
}

Grid rasterize_face(std::span<const double> face_values, int level) {
  if (face_values.size() != face_size(level))
    throw Error(ErrorKind::dimension, "face array length does not match level");
  const int side = 1 << level;
  Grid g(side, side);
  for (std::size_t k = 0; k < face_values.size(); ++k) {
    const Cell cell = quadtree_cell(k, level);
    g.at(cell.row, cell.col) = face_values[k];
  }
  return g;
}

std::vector<double> derasterize_face(const Grid& grid, int level) {
  const int side = 1 << level;
  if (grid.width != side || grid.height != side)
    throw Error(ErrorKind::dimension, "face grid is not 2^J x 2^J");
  std::vector<double> out(face_size(level));
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) out[quadtree_index(r, c, level)] = grid.at(r, c);
  return out;
}

std::vector<Grid> rasterize(const SphericalSignal& signal) {
  std::vector<Grid> faces;
  faces.reserve(kFaceCount);
  for (int s = 0; s < kFaceCount; ++s) faces.push_back(rasterize_face(signal.face(s), signal.level()));
  return faces;
}

SphericalSignal derasterize(const std::vector<Grid>& faces, double f_max) {
  if (faces.size() != kFaceCount) throw Error(ErrorKind::dimension, "expected six face grids");
  const int side = faces.front().width;
  int level = 0;
  while ((1 << level) < side) ++level;
  if ((1 << level) != side) throw Error(ErrorKind::dimension, "face side is not a power of two");
  std::vector<double> values;
  values.reserve(sphere_size(level));
  for (const Grid& g : faces) {
    const auto face = derasterize_face(g, level);
    values.insert(values.end(), face.begin(), face.end());
  }
  return SphericalSignal(level, std::move(values), f_max);
}

}  // namespace sphframe
