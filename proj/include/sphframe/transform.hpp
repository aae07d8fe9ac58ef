#pragma once

#include "sphframe/filter_bank.hpp"
#include "sphframe/signal.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sphframe {

/// Multilevel framelet coefficients of a level-J signal decomposed down to level L.
///
/// `lowpass` holds faces * ell^L values. `highpass[j - L]` holds the n direction planes of
/// level j back to back; plane s is faces * ell^j values in face-major quadtree order.
struct FrameletCoefficients {
  int coarse_level = 0;
  int fine_level = 0;
  int n = 0;
  int ell = 0;
  int faces = 0;
  std::vector<double> lowpass;
  std::vector<std::vector<double>> highpass;

  std::size_t blocks(int level) const;
  std::span<double> plane(int level, int direction);
  std::span<const double> plane(int level, int direction) const;
  /// Throws a dimension error if array sizes disagree with the level/shape fields.
  void validate() const;
};

struct OpCounts {
  std::uint64_t adds = 0;
  std::uint64_t mults = 0;
  bool operator==(const OpCounts&) const = default;
};

/// Analysis: each sibling group (c_1..c_ell) yields lowpass sum_i c_i Q(i,0) and highpass
/// d_s = sum_i c_i Q(i,s), applied from level J down to L. `counts`, when given, is
/// incremented with the arithmetic actually performed.
FrameletCoefficients decompose(std::span<const double> signal, const FilterBank& fb, int fine_level,
                               int coarse_level, int faces = kFaceCount,
                               OpCounts* counts = nullptr);
FrameletCoefficients decompose(const SphericalSignal& signal, const FilterBank& fb,
                               int coarse_level, OpCounts* counts = nullptr);

/// Synthesis: children c_(v,j) = c_v p_j + sum_i A(i,j) d_(v,i), applied from L up to J.
std::vector<double> reconstruct(const FrameletCoefficients& coeffs, const FilterBank& fb,
                                OpCounts* counts = nullptr);

/// Exact arithmetic of `decompose` over `faces` trees; throws unless 0 <= L < J.
OpCounts count_ops(int fine_level, int coarse_level, int ell, int n, int faces = 1);
/// Exact arithmetic of `reconstruct`.
OpCounts count_reconstruct_ops(int fine_level, int coarse_level, int ell, int n, int faces = 1);

}  // namespace sphframe
