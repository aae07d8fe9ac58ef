#include "sphframe/partition.hpp"

#include "parallel.hpp"
#include "sphframe/errors.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace sphframe {

namespace {

bool in_square(double v) { return v >= -1.0 && v <= 1.0; }

// Root of an increasing function on [lo, hi] by bisection. The bracket must straddle zero.
double bisect_increasing(const std::function<double(double)>& f, double lo, double hi) {
  constexpr double kWidth = 1e-14;
  constexpr double kSlack = 1e-13;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  const double f_mid = f(0.5 * (lo + hi));
  if (!(f_lo <= f_mid && f_mid <= f_hi) || f_lo > kSlack || f_hi < -kSlack)
    throw Error(ErrorKind::no_bracket, "area is not monotone across the split interval");
  for (int iter = 0; iter < 200 && hi - lo > kWidth; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double value = f(mid);
    if (value == 0.0) return mid;
    (value < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

constexpr Mat3 kRotations[kFaceCount] = {
    // +z
    {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}},
    // +x: e1 -> -e3, e2 -> e2, e3 -> e1
    {{{0, 0, 1}, {0, 1, 0}, {-1, 0, 0}}},
    // -x: e1 -> e3, e2 -> e2, e3 -> -e1
    {{{0, 0, -1}, {0, 1, 0}, {1, 0, 0}}},
    // +y: e1 -> e1, e2 -> -e3, e3 -> e2
    {{{1, 0, 0}, {0, 0, 1}, {0, -1, 0}}},
    // -y: e1 -> e1, e2 -> e3, e3 -> -e2
    {{{1, 0, 0}, {0, 0, -1}, {0, 1, 0}}},
    // -z: half turn about e1
    {{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}},
};

double chord(const Vec3& a, const Vec3& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                   (a[2] - b[2]) * (a[2] - b[2]));
}

}  // namespace

void ParamRect::validate() const {
  if (!(in_square(x_l) && in_square(x_r) && in_square(y_b) && in_square(y_t)))
    throw Error(ErrorKind::domain, "rectangle leaves the parameter square");
  if (!(x_l < x_r && y_b < y_t)) throw Error(ErrorKind::domain, "degenerate rectangle");
}

Vec3 map_T(double x, double y) {
  if (!in_square(x) || !in_square(y))
    throw Error(ErrorKind::domain, "point outside [-1,1]^2");
  const double r = std::sqrt(x * x + y * y + 1.0);
  return {x / r, y / r, 1.0 / r};
}

double area_antiderivative(double alpha, double beta) {
  return std::atan(alpha * beta / std::sqrt(alpha * alpha + beta * beta + 1.0));
}

double cap_area(const ParamRect& r) {
  return area_antiderivative(r.x_r, r.y_t) - area_antiderivative(r.x_l, r.y_t) -
         area_antiderivative(r.x_r, r.y_b) + area_antiderivative(r.x_l, r.y_b);
}

SplitPoint split_block(const ParamRect& rect, double target_child_area) {
  rect.validate();
  if (!(target_child_area > 0.0) || std::abs(cap_area(rect) - 4.0 * target_child_area) > 1e-9)
    throw Error(ErrorKind::domain, "rectangle area is not four times the child target");

  SplitPoint s{};
  s.c = bisect_increasing(
      [&](double t) {
        return cap_area({rect.x_l, t, rect.y_b, rect.y_t}) - 2.0 * target_child_area;
      },
      rect.x_l, rect.x_r);
  s.d1 = bisect_increasing(
      [&](double t) { return cap_area({rect.x_l, s.c, rect.y_b, t}) - target_child_area; },
      rect.y_b, rect.y_t);
  s.d2 = bisect_increasing(
      [&](double t) { return cap_area({s.c, rect.x_r, rect.y_b, t}) - target_child_area; },
      rect.y_b, rect.y_t);
  return s;
}

std::array<ParamRect, 4> children(const ParamRect& r, const SplitPoint& s) {
  return {{
      {r.x_l, s.c, r.y_b, s.d1},
      {s.c, r.x_r, r.y_b, s.d2},
      {r.x_l, s.c, s.d1, r.y_t},
      {s.c, r.x_r, s.d2, r.y_t},
  }};
}

const Mat3& face_rotation(int face) {
  if (face < 0 || face >= kFaceCount) throw Error(ErrorKind::domain, "face index out of range");
  return kRotations[face];
}

Vec3 rotate(const Mat3& m, const Vec3& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
          m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
          m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

Vec3 rotate_back(const Mat3& m, const Vec3& v) {
  return {m[0][0] * v[0] + m[1][0] * v[1] + m[2][0] * v[2],
          m[0][1] * v[0] + m[1][1] * v[1] + m[2][1] * v[2],
          m[0][2] * v[0] + m[1][2] * v[1] + m[2][2] * v[2]};
}

std::vector<FacePoint> locate_all(const Vec3& u) {
  std::vector<FacePoint> hits;
  for (int s = 0; s < kFaceCount; ++s) {
    const Vec3 v = rotate_back(kRotations[s], u);
    if (v[2] <= 0.0) continue;
    const double x = v[0] / v[2];
    const double y = v[1] / v[2];
    if (in_square(x) && in_square(y)) hits.push_back({s, x, y});
  }
  return hits;
}

double PartitionTree::target_area(int j) { return kFaceArea / std::pow(4.0, j); }

PartitionTree PartitionTree::build(int depth) {
  if (depth < 0) throw Error(ErrorKind::domain, "depth must be nonnegative");
  if (depth > kMaxDepth)
    throw Error(ErrorKind::depth_limit,
                "depth " + std::to_string(depth) + " exceeds " + std::to_string(kMaxDepth));
  std::vector<std::vector<ParamRect>> levels(static_cast<std::size_t>(depth) + 1);
  levels[0] = {ParamRect{}};
  for (int j = 0; j < depth; ++j) {
    const auto& parents = levels[static_cast<std::size_t>(j)];
    auto& next = levels[static_cast<std::size_t>(j) + 1];
    next.resize(parents.size() * 4);
    const double target = target_area(j + 1);
    detail::parallel_for(parents.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t v = begin; v < end; ++v) {
        const auto kids = children(parents[v], split_block(parents[v], target));
        for (std::size_t i = 0; i < 4; ++i) next[4 * v + i] = kids[i];
      }
    }, 1024);
  }
  return PartitionTree(std::move(levels));
}

PartitionTree PartitionTree::from_levels(std::vector<std::vector<ParamRect>> levels) {
  if (levels.empty()) throw Error(ErrorKind::format, "partition has no levels");
  if (levels.size() > static_cast<std::size_t>(kMaxDepth) + 1)
    throw Error(ErrorKind::depth_limit, "partition deeper than supported");
  std::size_t expected = 1;
  for (const auto& lvl : levels) {
    if (lvl.size() != expected) throw Error(ErrorKind::format, "level has wrong block count");
    for (const auto& r : lvl) r.validate();
    expected *= 4;
  }
  return PartitionTree(std::move(levels));
}

Vec3 PartitionTree::block_center(int face, int j, std::size_t index) const {
  const ParamRect& r = level(j)[index];
  return rotate(face_rotation(face), map_T(0.5 * (r.x_l + r.x_r), 0.5 * (r.y_b + r.y_t)));
}

double block_diameter(const ParamRect& r) {
  const std::array<Vec3, 4> corners = {map_T(r.x_l, r.y_b), map_T(r.x_r, r.y_b),
                                       map_T(r.x_l, r.y_t), map_T(r.x_r, r.y_t)};
  double best = 0.0;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b) best = std::max(best, chord(corners[a], corners[b]));
  return best;
}

}  // namespace sphframe
