#include "sphframe/transform.hpp"

#include "sphframe/errors.hpp"

#include <string>

namespace sphframe {

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void require_levels(int fine_level, int coarse_level) {
  if (coarse_level < 0 || coarse_level >= fine_level)
    throw Error(ErrorKind::level_range, "need 0 <= L < J, got L=" + std::to_string(coarse_level) +
                                            " J=" + std::to_string(fine_level));
}

}  // namespace

std::size_t FrameletCoefficients::blocks(int level) const {
  return static_cast<std::size_t>(faces) * ipow(static_cast<std::size_t>(ell), level);
}

std::span<double> FrameletCoefficients::plane(int level, int direction) {
  const std::size_t m = blocks(level);
  return std::span<double>(highpass.at(static_cast<std::size_t>(level - coarse_level)))
      .subspan(static_cast<std::size_t>(direction) * m, m);
}

std::span<const double> FrameletCoefficients::plane(int level, int direction) const {
  const std::size_t m = blocks(level);
  return std::span<const double>(highpass.at(static_cast<std::size_t>(level - coarse_level)))
      .subspan(static_cast<std::size_t>(direction) * m, m);
}

void FrameletCoefficients::validate() const {
  require_levels(fine_level, coarse_level);
  if (n < 0 || ell < 1 || faces < 1) throw Error(ErrorKind::dimension, "invalid coefficient shape");
  if (lowpass.size() != blocks(coarse_level))
    throw Error(ErrorKind::dimension, "lowpass length does not match coarse level");
  if (highpass.size() != static_cast<std::size_t>(fine_level - coarse_level))
    throw Error(ErrorKind::dimension, "wrong number of highpass levels");
  for (int j = coarse_level; j < fine_level; ++j)
    if (highpass[static_cast<std::size_t>(j - coarse_level)].size() !=
        static_cast<std::size_t>(n) * blocks(j))
      throw Error(ErrorKind::dimension, "highpass level " + std::to_string(j) + " has wrong size");
}

FrameletCoefficients decompose(std::span<const double> signal, const FilterBank& fb, int fine_level,
                               int coarse_level, int faces, OpCounts* counts) {
  require_levels(fine_level, coarse_level);
  const int ell = fb.ell();
  const int n = fb.n();
  FrameletCoefficients out;
  out.coarse_level = coarse_level;
  out.fine_level = fine_level;
  out.n = n;
  out.ell = ell;
  out.faces = faces;
  if (signal.size() != out.blocks(fine_level))
    throw Error(ErrorKind::dimension, "signal length " + std::to_string(signal.size()) +
                                          " != faces * ell^J = " +
                                          std::to_string(out.blocks(fine_level)));

  // Analysis filters, one contiguous run of ell weights per output band.
  const std::size_t bands = static_cast<std::size_t>(n) + 1;
  std::vector<double> filters(bands * static_cast<std::size_t>(ell));
  for (std::size_t k = 0; k < bands; ++k)
    for (int i = 0; i < ell; ++i)
      filters[k * ell + static_cast<std::size_t>(i)] = fb.Q()(i, static_cast<Eigen::Index>(k));

  out.highpass.resize(static_cast<std::size_t>(fine_level - coarse_level));
  std::vector<double> current(signal.begin(), signal.end());
  std::vector<double> coarser;
  for (int j = fine_level - 1; j >= coarse_level; --j) {
    const std::size_t groups = out.blocks(j);
    coarser.assign(groups, 0.0);
    auto& high = out.highpass[static_cast<std::size_t>(j - coarse_level)];
    high.assign(static_cast<std::size_t>(n) * groups, 0.0);
    for (std::size_t g = 0; g < groups; ++g) {
      const double* child = current.data() + g * ell;
      for (std::size_t k = 0; k < bands; ++k) {
        const double* q = filters.data() + k * ell;
        double acc = child[0] * q[0];
        for (int i = 1; i < ell; ++i) acc += child[i] * q[i];
        if (k == 0)
          coarser[g] = acc;
        else
          high[(k - 1) * groups + g] = acc;
      }
    }
    if (counts) {
      counts->mults += groups * bands * static_cast<std::uint64_t>(ell);
      counts->adds += groups * bands * static_cast<std::uint64_t>(ell - 1);
    }
    current.swap(coarser);
  }
  out.lowpass = std::move(current);
  return out;
}

FrameletCoefficients decompose(const SphericalSignal& signal, const FilterBank& fb,
                               int coarse_level, OpCounts* counts) {
  return decompose(signal.values(), fb, signal.level(), coarse_level, kFaceCount, counts);
}

std::vector<double> reconstruct(const FrameletCoefficients& coeffs, const FilterBank& fb,
                                OpCounts* counts) {
  coeffs.validate();
  if (coeffs.ell != fb.ell() || coeffs.n != fb.n())
    throw Error(ErrorKind::dimension, "coefficients do not match the filter bank shape");
  const int ell = coeffs.ell;
  const int n = coeffs.n;
  const Eigen::MatrixXd P = fb.P();
  // Synthesis filters, one contiguous run of n+1 weights per child position.
  const std::size_t bands = static_cast<std::size_t>(n) + 1;
  std::vector<double> filters(static_cast<std::size_t>(ell) * bands);
  for (int j = 0; j < ell; ++j)
    for (std::size_t i = 0; i < bands; ++i)
      filters[static_cast<std::size_t>(j) * bands + i] = P(static_cast<Eigen::Index>(i), j);

  std::vector<double> current = coeffs.lowpass;
  std::vector<double> finer;
  std::vector<double> inputs(bands);
  for (int j = coeffs.coarse_level; j < coeffs.fine_level; ++j) {
    const std::size_t groups = coeffs.blocks(j);
    const auto& high = coeffs.highpass[static_cast<std::size_t>(j - coeffs.coarse_level)];
    finer.assign(groups * ell, 0.0);
    for (std::size_t g = 0; g < groups; ++g) {
      inputs[0] = current[g];
      for (std::size_t s = 1; s < bands; ++s) inputs[s] = high[(s - 1) * groups + g];
      double* child = finer.data() + g * ell;
      for (int c = 0; c < ell; ++c) {
        const double* w = filters.data() + static_cast<std::size_t>(c) * bands;
        double acc = inputs[0] * w[0];
        for (std::size_t s = 1; s < bands; ++s) acc += inputs[s] * w[s];
        child[c] = acc;
      }
    }
    if (counts) {
      counts->mults += groups * static_cast<std::uint64_t>(ell) * bands;
      counts->adds += groups * static_cast<std::uint64_t>(ell) * (bands - 1);
    }
    current.swap(finer);
  }
  return current;
}

OpCounts count_ops(int fine_level, int coarse_level, int ell, int n, int faces) {
  require_levels(fine_level, coarse_level);
  OpCounts total;
  const std::uint64_t bands = static_cast<std::uint64_t>(n) + 1;
  for (int j = coarse_level; j < fine_level; ++j) {
    const std::uint64_t groups = static_cast<std::uint64_t>(faces) * ipow(ell, j);
    total.mults += groups * bands * static_cast<std::uint64_t>(ell);
    total.adds += groups * bands * static_cast<std::uint64_t>(ell - 1);
  }
  return total;
}

OpCounts count_reconstruct_ops(int fine_level, int coarse_level, int ell, int n, int faces) {
  require_levels(fine_level, coarse_level);
  OpCounts total;
  const std::uint64_t bands = static_cast<std::uint64_t>(n) + 1;
  for (int j = coarse_level; j < fine_level; ++j) {
    const std::uint64_t groups = static_cast<std::uint64_t>(faces) * ipow(ell, j);
    total.mults += groups * static_cast<std::uint64_t>(ell) * bands;
    total.adds += groups * static_cast<std::uint64_t>(ell) * (bands - 1);
  }
  return total;
}

}  // namespace sphframe
