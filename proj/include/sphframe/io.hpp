#pragma once

#include "sphframe/denoise.hpp"
#include "sphframe/filter_bank.hpp"
#include "sphframe/partition.hpp"
#include "sphframe/signal.hpp"
#include "sphframe/transform.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace sphframe::io {

// Binary containers are little-endian:
//   SPHP  magic, u32 version=1, u32 depth, then per level j the 4^j rects as
//         (x_l, x_r, y_b, y_t) float64.
//   SPHS  magic, u32 version=1, u32 level, u32 faces=6, u32 dtype=1 (float64), f64 f_max,
//         then 6*4^J float64 values.
//   SPHC  magic, u32 version=1, u32 L, u32 J, u32 n, lowpass (6*4^L float64), then for each
//         level j = L..J-1 the n planes of 6*4^j float64.

std::string encode_partition(const PartitionTree& tree);
PartitionTree decode_partition(std::string_view bytes);

std::string encode_signal(const SphericalSignal& signal);
SphericalSignal decode_signal(std::string_view bytes);

/// Only spherical coefficient sets (ell = 4, six faces) are representable.
std::string encode_coefficients(const FrameletCoefficients& coeffs);
FrameletCoefficients decode_coefficients(std::string_view bytes);

/// Key-value text document: ell, n, c, A (row-major), p, Q (row-major), values printed with
/// 17 significant digits.
std::string encode_filter_bank(const FilterBank& fb);
/// Parses and validates through FilterBank::make.
FilterBank decode_filter_bank(std::string_view text);

/// JSON: {dataset, seed, levels, cells: [{rate, method, psnr_before_mean, psnr_after_mean,
/// improvement, variance, psnr_before, psnr_after}]}.
std::string encode_report(const ExperimentReport& report);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace sphframe::io
