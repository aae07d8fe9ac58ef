#pragma once

#include "sphframe/partition.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sphframe {

/// Row-major raster, row 0 at the top.
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  Grid() = default;
  Grid(int w, int h, double fill = 0.0)
      : width(w), height(h), values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  double& at(int row, int col) { return values[static_cast<std::size_t>(row) * width + col]; }
  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
  bool empty() const { return values.empty(); }
};

/// Number of blocks on the whole sphere at level j: 6 * 4^j.
std::size_t sphere_size(int level);
/// Number of blocks on one face at level j: 4^j.
std::size_t face_size(int level);

/// Level-J block values, face-major, quadtree order within each face.
class SphericalSignal {
 public:
  SphericalSignal() = default;
  /// Throws a dimension error unless values.size() == 6 * 4^level, a domain error on
  /// nonfinite values.
  SphericalSignal(int level, std::vector<double> values, double f_max, std::string provenance = {});

  static SphericalSignal constant(int level, double value, double f_max);

  int level() const { return level_; }
  double f_max() const { return f_max_; }
  const std::string& provenance() const { return provenance_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::span<const double> face(int s) const;
  std::size_t size() const { return values_.size(); }

 private:
  int level_ = 0;
  std::vector<double> values_;
  double f_max_ = 0.0;
  std::string provenance_;
};

/// Converts a unit vector to (longitude in [-pi, pi), latitude in [-pi/2, pi/2]).
void to_lon_lat(const Vec3& u, double& lon, double& lat);

/// Bilinear lookup of an equirectangular grid at (lon, lat). Columns wrap in longitude,
/// rows clamp at the poles.
double sample_equirect(const Grid& grid, double lon, double lat);

/// Samples an equirectangular image at every level-J block center of `tree`
/// (which must have depth >= J). f_max is the peak absolute grid value.
SphericalSignal sample_image(const Grid& equirect, const PartitionTree& tree, int level);

/// Quadtree index -> (row from the top, column) in a 2^J x 2^J face grid.
struct Cell {
  int row;
  int col;
};
Cell quadtree_cell(std::size_t index, int level);
std::size_t quadtree_index(int row, int col, int level);

/// Face-local rasterization of one quadtree-ordered array of 4^level values.
Grid rasterize_face(std::span<const double> face_values, int level);
std::vector<double> derasterize_face(const Grid& grid, int level);

/// Six 2^J x 2^J grids, one per face.
std::vector<Grid> rasterize(const SphericalSignal& signal);
SphericalSignal derasterize(const std::vector<Grid>& faces, double f_max);

}  // namespace sphframe
