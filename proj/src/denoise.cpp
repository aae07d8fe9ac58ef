#include "sphframe/denoise.hpp"

#include "parallel.hpp"
#include "sphframe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sphframe {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void require_quadtree(const FrameletCoefficients& coeffs) {
  coeffs.validate();
  if (coeffs.ell != 4)
    throw Error(ErrorKind::dimension, "windowed shrinkage needs a four-way quadtree partition");
}

// Local thresholds for one plane; infinity marks coefficients to be killed.
std::vector<double> local_thresholds(std::span<const double> plane, int level, int faces,
                                     double sigma_b, const ShrinkageParams& params) {
  const auto energy = window_mean_square(plane, level, faces, params.window_half);
  std::vector<double> lambda(plane.size());
  const double sb2 = sigma_b * sigma_b;
  for (std::size_t k = 0; k < plane.size(); ++k) {
    const double sigma_i = std::sqrt(std::max(energy[k] - sb2, 0.0));
    lambda[k] = sigma_i > 0.0 ? params.r * sb2 / sigma_i : std::numeric_limits<double>::infinity();
  }
  return lambda;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

NoiseSpec NoiseSpec::from_rate(double rate, double f_max, std::uint64_t seed) {
  if (rate < 0.0) throw Error(ErrorKind::domain, "noise rate must be nonnegative");
  return {rate, rate * f_max, seed};
}

const char* to_string(Shrinkage method) {
  switch (method) {
    case Shrinkage::soft: return "soft";
    case Shrinkage::local_soft: return "localsoft";
    case Shrinkage::bivariate: return "bivariate";
  }
  return "unknown";
}

Shrinkage parse_shrinkage(const std::string& name) {
  if (name == "soft") return Shrinkage::soft;
  if (name == "localsoft" || name == "local_soft") return Shrinkage::local_soft;
  if (name == "bivariate") return Shrinkage::bivariate;
  throw Error(ErrorKind::domain, "unknown shrinkage method '" + name + "'");
}

SphericalSignal add_noise(const SphericalSignal& signal, const NoiseSpec& spec) {
  std::vector<double> values(signal.values().begin(), signal.values().end());
  if (spec.sigma > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, spec.sigma);
    for (double& v : values) v += gauss(rng);
  }
  return SphericalSignal(signal.level(), std::move(values), signal.f_max(), signal.provenance());
}

double default_lambda_s(double rate, double f_max) { return 0.9 * rate * f_max; }

FrameletCoefficients soft_threshold(const FrameletCoefficients& coeffs, double lambda) {
  if (lambda < 0.0) throw Error(ErrorKind::domain, "threshold must be nonnegative");
  FrameletCoefficients out = coeffs;
  for (auto& level : out.highpass)
    for (double& d : level) d = soft(d, lambda);
  return out;
}

std::vector<double> window_mean_square(std::span<const double> plane, int level, int faces,
                                       int window_half) {
  if (window_half < 1) throw Error(ErrorKind::domain, "window half-width must be >= 1");
  const std::size_t per_face = face_size(level);
  if (plane.size() != per_face * static_cast<std::size_t>(faces))
    throw Error(ErrorKind::dimension, "plane length does not match level and face count");
  const int side = 1 << level;
  std::vector<double> out(plane.size());
  // Summed-area table of squares, (side+1)^2 with a zero border.
  std::vector<double> table(static_cast<std::size_t>(side + 1) * (side + 1));
  auto at = [&](int r, int c) -> double& { return table[static_cast<std::size_t>(r) * (side + 1) + c]; };
  for (int f = 0; f < faces; ++f) {
    const auto face = plane.subspan(static_cast<std::size_t>(f) * per_face, per_face);
    const Grid g = rasterize_face(face, level);
    for (int r = 0; r < side; ++r)
      for (int c = 0; c < side; ++c) {
        const double v = g.at(r, c);
        at(r + 1, c + 1) = v * v + at(r, c + 1) + at(r + 1, c) - at(r, c);
      }
    for (int r = 0; r < side; ++r)
      for (int c = 0; c < side; ++c) {
        const int r0 = std::max(0, r - window_half);
        const int r1 = std::min(side, r + window_half + 1);
        const int c0 = std::max(0, c - window_half);
        const int c1 = std::min(side, c + window_half + 1);
        const double sum = at(r1, c1) - at(r0, c1) - at(r1, c0) + at(r0, c0);
        const double count = static_cast<double>((r1 - r0) * (c1 - c0));
        out[static_cast<std::size_t>(f) * per_face + quadtree_index(r, c, level)] =
            std::max(sum, 0.0) / count;
      }
  }
  return out;
}

FrameletCoefficients local_soft(const FrameletCoefficients& coeffs, double sigma,
                                const ShrinkageParams& params) {
  require_quadtree(coeffs);
  const double sigma_b = sigma * params.filter_norm;
  FrameletCoefficients out = coeffs;
  for (int j = coeffs.coarse_level; j < coeffs.fine_level; ++j)
    for (int s = 0; s < coeffs.n; ++s) {
      const auto src = coeffs.plane(j, s);
      const auto lambda = local_thresholds(src, j, coeffs.faces, sigma_b, params);
      auto dst = out.plane(j, s);
      for (std::size_t k = 0; k < src.size(); ++k)
        dst[k] = std::isinf(lambda[k]) ? 0.0 : soft(src[k], lambda[k]);
    }
  return out;
}

FrameletCoefficients bivariate(const FrameletCoefficients& coeffs, double sigma,
                               const ShrinkageParams& params) {
  require_quadtree(coeffs);
  const double sigma_b = sigma * params.filter_norm;
  FrameletCoefficients out = coeffs;
  for (int j = coeffs.coarse_level; j < coeffs.fine_level; ++j)
    for (int s = 0; s < coeffs.n; ++s) {
      const auto src = coeffs.plane(j, s);
      const auto lambda = local_thresholds(src, j, coeffs.faces, sigma_b, params);
      const bool has_parent = j > coeffs.coarse_level;
      auto dst = out.plane(j, s);
      for (std::size_t k = 0; k < src.size(); ++k) {
        const double d = src[k];
        if (std::isinf(lambda[k]) || d == 0.0) {
          dst[k] = 0.0;
          continue;
        }
        const double parent = has_parent ? coeffs.plane(j - 1, s)[k / 4] : 0.0;
        dst[k] = soft(d, lambda[k] / std::hypot(1.0, parent / d));
      }
    }
  return out;
}

FrameletCoefficients shrink(const FrameletCoefficients& coeffs, double sigma,
                            const ShrinkageParams& params) {
  switch (params.method) {
    case Shrinkage::soft: return soft_threshold(coeffs, params.lambda_s);
    case Shrinkage::local_soft: return local_soft(coeffs, sigma, params);
    case Shrinkage::bivariate: return bivariate(coeffs, sigma, params);
  }
  throw Error(ErrorKind::domain, "unknown shrinkage method");
}

SphericalSignal denoise(const SphericalSignal& noisy, const FilterBank& fb, int coarse_level,
                        double sigma, const ShrinkageParams& params) {
  const auto coeffs = decompose(noisy, fb, coarse_level);
  auto values = reconstruct(shrink(coeffs, sigma, params), fb);
  return SphericalSignal(noisy.level(), std::move(values), noisy.f_max(), noisy.provenance());
}

double psnr(const SphericalSignal& reference, const SphericalSignal& estimate) {
  if (reference.level() != estimate.level())
    throw Error(ErrorKind::level_mismatch, "signals are at different levels");
  const auto a = reference.values();
  const auto b = estimate.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += (a[k] - b[k]) * (a[k] - b[k]);
  const double mse = sum / static_cast<double>(a.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(reference.f_max() * reference.f_max() / mse);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t item, std::uint64_t rate_index) {
  return splitmix64(splitmix64(splitmix64(master) ^ item) ^ rate_index);
}

ExperimentReport run_experiment(const std::vector<SphericalSignal>& dataset, const FilterBank& fb,
                                const ExperimentConfig& config, std::string dataset_id) {
  if (dataset.empty()) throw Error(ErrorKind::empty_input, "dataset is empty");
  const int fine = dataset.front().level();
  for (const auto& s : dataset)
    if (s.level() != fine) throw Error(ErrorKind::level_mismatch, "dataset mixes levels");
  if (config.coarse_level < 0 || config.coarse_level >= fine)
    throw Error(ErrorKind::level_range, "coarse level must satisfy 0 <= L < J");

  const std::size_t n_rates = config.rates.size();
  const std::size_t n_methods = config.methods.size();
  const std::size_t n_items = dataset.size();
  // before[item][rate], after[item][rate * n_methods + method]
  std::vector<std::vector<double>> before(n_items, std::vector<double>(n_rates));
  std::vector<std::vector<double>> after(n_items, std::vector<double>(n_rates * n_methods));

  detail::parallel_for(n_items, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const SphericalSignal& clean = dataset[i];
      for (std::size_t r = 0; r < n_rates; ++r) {
        const auto spec = NoiseSpec::from_rate(config.rates[r], clean.f_max(),
                                               derive_seed(config.seed, i, r));
        const SphericalSignal noisy = add_noise(clean, spec);
        before[i][r] = psnr(clean, noisy);
        const auto coeffs = decompose(noisy, fb, config.coarse_level);
        for (std::size_t m = 0; m < n_methods; ++m) {
          ShrinkageParams params;
          params.method = config.methods[m];
          params.lambda_s = config.lambda_s.value_or(default_lambda_s(spec.rate, clean.f_max()));
          params.window_half = config.window_half;
          params.r = config.r;
          auto values = reconstruct(shrink(coeffs, spec.sigma, params), fb);
          after[i][r * n_methods + m] =
              psnr(clean, SphericalSignal(fine, std::move(values), clean.f_max()));
        }
      }
    }
  }, 1);

  ExperimentReport report;
  report.dataset = std::move(dataset_id);
  report.seed = config.seed;
  report.levels = fine - config.coarse_level;
  for (std::size_t r = 0; r < n_rates; ++r)
    for (std::size_t m = 0; m < n_methods; ++m) {
      ExperimentCell cell;
      cell.rate = config.rates[r];
      cell.method = config.methods[m];
      for (std::size_t i = 0; i < n_items; ++i) {
        cell.psnr_before.push_back(before[i][r]);
        cell.psnr_after.push_back(after[i][r * n_methods + m]);
      }
      cell.psnr_before_mean = mean(cell.psnr_before);
      cell.psnr_after_mean = mean(cell.psnr_after);
      cell.improvement = cell.psnr_after_mean - cell.psnr_before_mean;
      cell.variance = sample_variance(cell.psnr_after);
      report.cells.push_back(std::move(cell));
    }
  return report;
}

std::vector<SphericalSignal> synthetic_piecewise_constant(const PartitionTree& tree, int level,
                                                          int count, std::uint64_t seed) {
  if (level > tree.depth()) throw Error(ErrorKind::level_range, "tree too shallow");
  std::vector<SphericalSignal> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  const std::size_t per_face = face_size(level);
  for (int item = 0; item < count; ++item) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(item), 0xC311));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> cells_dist(6, 16);
    std::uniform_int_distribution<int> gray(0, 255);
    const int cells = cells_dist(rng);
    std::vector<Vec3> centers(static_cast<std::size_t>(cells));
    std::vector<double> levels(static_cast<std::size_t>(cells));
    for (int c = 0; c < cells; ++c) {
      Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
      const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      for (double& x : v) x /= norm;
      centers[static_cast<std::size_t>(c)] = v;
      levels[static_cast<std::size_t>(c)] = c == 0 ? 255.0 : gray(rng);
    }
    std::vector<double> values(sphere_size(level));
    for (std::size_t k = 0; k < values.size(); ++k) {
      const Vec3 u = tree.block_center(static_cast<int>(k / per_face), level, k % per_face);
      std::size_t best = 0;
      double best_dot = -2.0;
      for (std::size_t c = 0; c < centers.size(); ++c) {
        const double dot = u[0] * centers[c][0] + u[1] * centers[c][1] + u[2] * centers[c][2];
        if (dot > best_dot) {
          best_dot = dot;
          best = c;
        }
      }
      values[k] = levels[best];
    }
    out.emplace_back(level, std::move(values), 255.0,
                     "voronoi seed=" + std::to_string(seed) + " item=" + std::to_string(item));
  }
  return out;
}

}  // namespace sphframe
