#pragma once

#include "sphframe/filter_bank.hpp"
#include "sphframe/signal.hpp"
#include "sphframe/transform.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sphframe {

/// Gaussian noise with standard deviation sigma = rate * f_max.
struct NoiseSpec {
  double rate = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;

  static NoiseSpec from_rate(double rate, double f_max, std::uint64_t seed);
};

enum class Shrinkage { soft, local_soft, bivariate };

const char* to_string(Shrinkage method);
/// Accepts "soft", "localsoft"/"local_soft", "bivariate".
Shrinkage parse_shrinkage(const std::string& name);
inline constexpr Shrinkage kAllShrinkage[] = {Shrinkage::soft, Shrinkage::local_soft,
                                              Shrinkage::bivariate};

struct ShrinkageParams {
  Shrinkage method = Shrinkage::soft;
  double lambda_s = 0.0;     // soft threshold
  int window_half = 2;       // local window is (2w+1)^2 cells
  double r = 0.3;            // local threshold scale
  double filter_norm = 1.0;  // |b|; every row of the spherical A has unit norm
};

/// Adds i.i.d. N(0, sigma^2) samples. Same seed, same output.
SphericalSignal add_noise(const SphericalSignal& signal, const NoiseSpec& spec);

inline double soft(double d, double lambda) {
  const double mag = std::abs(d) - lambda;
  return mag > 0.0 ? (d > 0.0 ? mag : -mag) : 0.0;
}

/// 0.9 * rate * f_max.
double default_lambda_s(double rate, double f_max);

/// Soft thresholding of every highpass coefficient with one global threshold.
FrameletCoefficients soft_threshold(const FrameletCoefficients& coeffs, double lambda);

/// Per-coefficient threshold r * sigma_b^2 / sigma_i from a square window in the rasterized
/// direction plane of the same level and face. sigma_i == 0 zeroes the coefficient.
FrameletCoefficients local_soft(const FrameletCoefficients& coeffs, double sigma,
                                const ShrinkageParams& params);

/// Local threshold divided by sqrt(1 + (d_parent / d)^2), where d_parent is the same-direction
/// coefficient of the quadtree parent one level coarser (0 at the coarsest highpass level).
FrameletCoefficients bivariate(const FrameletCoefficients& coeffs, double sigma,
                               const ShrinkageParams& params);

FrameletCoefficients shrink(const FrameletCoefficients& coeffs, double sigma,
                            const ShrinkageParams& params);

/// Local energy estimate sigma_hat^2 for each coefficient of one plane (faces * 4^level values).
std::vector<double> window_mean_square(std::span<const double> plane, int level, int faces,
                                       int window_half);

/// decompose -> shrink -> reconstruct.
SphericalSignal denoise(const SphericalSignal& noisy, const FilterBank& fb, int coarse_level,
                        double sigma, const ShrinkageParams& params);

/// 10 log10(f_max^2 / MSE) with f_max from the reference; +inf when MSE == 0.
double psnr(const SphericalSignal& reference, const SphericalSignal& estimate);

/// Per-(item, rate) noise seed, independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t item, std::uint64_t rate_index);

struct ExperimentCell {
  double rate = 0.0;
  Shrinkage method = Shrinkage::soft;
  std::vector<double> psnr_before;
  std::vector<double> psnr_after;
  double psnr_before_mean = 0.0;
  double psnr_after_mean = 0.0;
  double improvement = 0.0;
  double variance = 0.0;  // sample variance of psnr_after over items
};

struct ExperimentReport {
  std::string dataset;
  std::uint64_t seed = 0;
  int levels = 0;
  std::vector<ExperimentCell> cells;  // rate-major, methods in the order given
};

struct ExperimentConfig {
  std::vector<double> rates;
  std::vector<Shrinkage> methods;
  int coarse_level = 0;
  std::uint64_t seed = 0;
  int window_half = 2;
  double r = 0.3;
  std::optional<double> lambda_s;  // default: 0.9 * rate * f_max per item
};

ExperimentReport run_experiment(const std::vector<SphericalSignal>& dataset, const FilterBank& fb,
                                const ExperimentConfig& config, std::string dataset_id = {});

/// Random spherical Voronoi mosaics: a handful of cells with integer gray levels in [0, 255],
/// one cell pinned at 255 so f_max = 255.
std::vector<SphericalSignal> synthetic_piecewise_constant(const PartitionTree& tree, int level,
                                                          int count, std::uint64_t seed);

}  // namespace sphframe
