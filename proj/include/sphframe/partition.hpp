#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sphframe {

inline constexpr int kFaceCount = 6;
inline constexpr int kMaxDepth = 12;
inline constexpr double kPi = 3.14159265358979323846;
/// Spherical area of one face: 4*pi/6.
inline constexpr double kFaceArea = 4.0 * kPi / 6.0;

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Axis-aligned rectangle [x_l, x_r] x [y_b, y_t] in the parameter square [-1, 1]^2.
struct ParamRect {
  double x_l = -1.0;
  double x_r = 1.0;
  double y_b = -1.0;
  double y_t = 1.0;

  /// Checks x_l < x_r, y_b < y_t, all inside [-1, 1]; throws a domain error otherwise.
  void validate() const;
  bool contains(const ParamRect& inner) const {
    return x_l <= inner.x_l && inner.x_r <= x_r && y_b <= inner.y_b && inner.y_t <= y_t;
  }
  bool operator==(const ParamRect&) const = default;
};

/// Gnomonic chart of the +z face: (x, y, 1) / sqrt(x^2 + y^2 + 1).
Vec3 map_T(double x, double y);

/// Antiderivative of the area element (x^2 + y^2 + 1)^{-3/2}.
double area_antiderivative(double alpha, double beta);

/// Spherical area of T(rect), exact closed form.
double cap_area(const ParamRect& rect);

struct SplitPoint {
  double c;   // vertical split line
  double d1;  // horizontal split of the left half
  double d2;  // horizontal split of the right half
};

/// Equal-area four-way split of `rect` (whose area must be 4 * target_child_area).
SplitPoint split_block(const ParamRect& rect, double target_child_area);

/// Children of `rect` for a given split, in order left-bottom, right-bottom, left-top,
/// right-top.
std::array<ParamRect, 4> children(const ParamRect& rect, const SplitPoint& s);

/// Rotation taking face 1 (the +z chart) onto face s, s = 0..5 for +z, +x, -x, +y, -y, -z.
const Mat3& face_rotation(int face);

Vec3 rotate(const Mat3& m, const Vec3& v);
Vec3 rotate_back(const Mat3& m, const Vec3& v);

struct FacePoint {
  int face;
  double x;
  double y;
};

/// Chart coordinates of a unit vector for every face whose closed image contains it.
std::vector<FacePoint> locate_all(const Vec3& u);

/// Area-regular quadtree partition of the sphere. Rectangles are stored for face 1 only;
/// the other faces are its images under `face_rotation`.
class PartitionTree {
 public:
  /// Builds levels 0..depth. Throws a depth-limit error above kMaxDepth.
  static PartitionTree build(int depth);
  /// Wraps precomputed rectangles (e.g. from a cache file). levels[j] must hold 4^j rects.
  static PartitionTree from_levels(std::vector<std::vector<ParamRect>> levels);

  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  std::span<const ParamRect> level(int j) const { return levels_.at(static_cast<std::size_t>(j)); }
  const std::vector<std::vector<ParamRect>>& levels() const { return levels_; }
  std::size_t blocks_per_face(int j) const { return level(j).size(); }

  /// Area every level-j block should have.
  static double target_area(int j);

  /// Center of block `index` on `face` at level j, as a unit vector on the sphere.
  Vec3 block_center(int face, int j, std::size_t index) const;

 private:
  explicit PartitionTree(std::vector<std::vector<ParamRect>> levels) : levels_(std::move(levels)) {}
  std::vector<std::vector<ParamRect>> levels_;
};

/// Block diameter estimate: largest chord between the four corner images.
double block_diameter(const ParamRect& rect);

}  // namespace sphframe
