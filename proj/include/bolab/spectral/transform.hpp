#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "bolab/spectral/fft.hpp"
#include "bolab/spectral/field.hpp"

namespace bolab {

/// Coefficients of samples taken at x_n = 2*pi*n/N:
/// f^(xi) = (2pi/N) sum_n exp(-i xi x_n) f(x_n). Nyquist discarded.
inline SpectralField analyze(std::span<const double> samples,
                             const GridSpec& grid) {
  if (samples.size() != static_cast<std::size_t>(grid.n_modes()))
    throw DimensionError("analyze: got " + std::to_string(samples.size()) +
                         " samples for a grid of " +
                         std::to_string(grid.n_modes()));
  std::vector<cplx> in(samples.begin(), samples.end());
  SpectralField out(grid, Reality::real_valued);
  fft::transform(in, out.mutable_data(), fft::Direction::forward);
  const double scale = kTwoPi / grid.n_modes();
  for (auto& c : out.mutable_data()) c *= scale;
  out.restore_invariants();
  return out;
}

inline SpectralField analyze(std::span<const cplx> samples,
                             const GridSpec& grid) {
  if (samples.size() != static_cast<std::size_t>(grid.n_modes()))
    throw DimensionError("analyze: got " + std::to_string(samples.size()) +
                         " samples for a grid of " +
                         std::to_string(grid.n_modes()));
  SpectralField out(grid, Reality::complex_valued);
  fft::transform(samples, out.mutable_data(), fft::Direction::forward);
  const double scale = kTwoPi / grid.n_modes();
  for (auto& c : out.mutable_data()) c *= scale;
  out.restore_invariants();
  return out;
}

/// Samples f(x_n) = (1/2pi) sum f^(xi) exp(i xi x_n).
inline std::vector<cplx> synthesize_complex(const SpectralField& f) {
  std::vector<cplx> out(f.data().size());
  fft::transform(f.data(), out, fft::Direction::backward);
  for (auto& v : out) v /= kTwoPi;
  return out;
}

/// Real samples of a real-valued field. The imaginary round-off is checked
/// against 1e-13 of the sample scale and dropped.
inline std::vector<double> synthesize(const SpectralField& f) {
  if (!f.is_real())
    throw PreconditionError("synthesize: field is complex-valued; use "
                            "synthesize_complex");
  const auto z = synthesize_complex(f);
  std::vector<double> out(z.size());
  double scale = 0.0, imag = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = z[i].real();
    scale = std::max(scale, std::abs(z[i].real()));
    imag = std::max(imag, std::abs(z[i].imag()));
  }
  if (imag > 1e-13 * std::max(scale, 1.0))
    throw PreconditionError("synthesize: imaginary residue " +
                            std::to_string(imag) + " on a real field");
  return out;
}

/// Moves a field to another grid by zero-padding or truncating modes.
inline SpectralField resample(const SpectralField& f, const GridSpec& target) {
  SpectralField out(target, f.reality());
  const int kmax = std::min(f.max_mode(), target.max_mode());
  auto dst = out.mutable_data();
  const auto src = f.data();
  for (int xi = -kmax; xi <= kmax; ++xi)
    dst[target.slot(xi)] = src[f.grid().slot(xi)];
  out.restore_invariants();
  return out;
}

/// Applies a pointwise map to a real field on a grid refined by `factor`;
/// returns the coefficients of the result on that refined grid.
template <class Fn>
SpectralField pointwise_real(const SpectralField& f, int factor, Fn&& fn) {
  const GridSpec fine = f.grid().refined(factor);
  auto samples = synthesize(resample(f, fine));
  for (auto& v : samples) v = fn(v);
  return analyze(samples, fine);
}

/// Real field -> complex-valued pointwise map on a refined grid.
template <class Fn>
SpectralField pointwise_to_complex(const SpectralField& f, int factor,
                                   Fn&& fn) {
  const GridSpec fine = f.grid().refined(factor);
  const auto samples = synthesize(resample(f, fine));
  std::vector<cplx> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out[i] = fn(samples[i]);
  return analyze(std::span<const cplx>(out), fine);
}

/// Product of two fields evaluated on the grid of `a` (both are first
/// resampled there). Exact when the grid holds the full product band.
inline SpectralField multiply(const SpectralField& a, const SpectralField& b,
                              const GridSpec& grid) {
  const auto sa = synthesize_complex(resample(a, grid));
  const auto sb = synthesize_complex(resample(b, grid));
  std::vector<cplx> prod(sa.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = sa[i] * sb[i];
  SpectralField out = analyze(std::span<const cplx>(prod), grid);
  if (a.is_real() && b.is_real()) return out.as_real(1e-10);
  return out;
}

}  // namespace bolab
