#pragma once

// Fourier multipliers on SpectralField. Every operator is a pure function.

#include <cmath>
#include <complex>

#include "bolab/spectral/field.hpp"

namespace bolab {

/// Applies the multiplier m(xi). When the input is real and `keeps_reality`
/// holds (m(-xi) = conj m(xi)), only xi >= 0 is evaluated and the negative
/// half is mirrored so the output is exactly Hermitian.
template <class Symbol>
SpectralField apply_multiplier(const SpectralField& f, Symbol&& m,
                               bool keeps_reality) {
  const bool real_out = f.is_real() && keeps_reality;
  SpectralField out(f.grid(), real_out ? Reality::real_valued
                                       : Reality::complex_valued);
  const GridSpec& g = f.grid();
  auto dst = out.mutable_data();
  const auto src = f.data();
  const int kmax = g.max_mode();
  for (int xi = real_out ? 0 : -kmax; xi <= kmax; ++xi)
    dst[g.slot(xi)] = cplx(m(xi)) * src[g.slot(xi)];
  out.restore_invariants();
  return out;
}

inline int sgn(int xi) { return (xi > 0) - (xi < 0); }

/// Hilbert transform, symbol -i sgn(xi) with sgn(0) = 0.
inline SpectralField hilbert(const SpectralField& f) {
  return apply_multiplier(
      f, [](int xi) { return cplx(0.0, -static_cast<double>(sgn(xi))); }, true);
}

/// Bessel potential J^s, symbol <xi>^s.
inline SpectralField bessel(const SpectralField& f, double s) {
  return apply_multiplier(
      f, [s](int xi) { return cplx(std::pow(japanese(xi), s), 0.0); }, true);
}

/// |D|^s, symbol |xi|^s (zero at xi = 0 for s > 0).
inline SpectralField abs_derivative_power(const SpectralField& f, double s) {
  return apply_multiplier(
      f,
      [s](int xi) {
        return cplx(xi == 0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(std::abs(xi), s),
                    0.0);
      },
      true);
}

inline SpectralField derivative(const SpectralField& f) {
  return apply_multiplier(
      f, [](int xi) { return cplx(0.0, static_cast<double>(xi)); }, true);
}

inline SpectralField second_derivative(const SpectralField& f) {
  return apply_multiplier(
      f, [](int xi) { return cplx(-static_cast<double>(xi) * xi, 0.0); }, true);
}

/// Mean-zero primitive: symbol 1/(i xi) off zero, 0 at xi = 0.
inline SpectralField antiderivative(const SpectralField& f) {
  if (!f.mean_zero())
    throw PreconditionError(
        "antiderivative requires a mean-zero field (coefficient at 0 is " +
        std::to_string(std::abs(f[0])) + ")");
  return apply_multiplier(
      f,
      [](int xi) {
        return xi == 0 ? cplx{} : cplx(0.0, -1.0 / static_cast<double>(xi));
      },
      true);
}

enum class Projection { zero, plus, minus };

/// Keeps xi > 0 (plus), xi < 0 (minus) or only xi = 0 (zero: the constant
/// function equal to the mean). Plus/minus outputs are complex-valued.
inline SpectralField project(const SpectralField& f, Projection which) {
  switch (which) {
    case Projection::plus:
      return apply_multiplier(
          f, [](int xi) { return cplx(xi > 0 ? 1.0 : 0.0, 0.0); }, false);
    case Projection::minus:
      return apply_multiplier(
          f, [](int xi) { return cplx(xi < 0 ? 1.0 : 0.0, 0.0); }, false);
    case Projection::zero:
      break;
  }
  return apply_multiplier(
      f, [](int xi) { return cplx(xi == 0 ? 1.0 : 0.0, 0.0); }, true);
}

/// Mean value f^(0)/2pi.
inline cplx mean_value(const SpectralField& f) { return f[0] / kTwoPi; }

/// Littlewood-Paley block: keeps 2^(k-1) <= |xi| < 2^k.
inline SpectralField lp_block(const SpectralField& f, int k) {
  if (k < 1) throw PreconditionError("lp_block requires k >= 1");
  const long lo = 1L << (k - 1), hi = 1L << k;
  return apply_multiplier(
      f,
      [lo, hi](int xi) {
        const long a = std::abs(xi);
        return cplx(a >= lo && a < hi ? 1.0 : 0.0, 0.0);
      },
      true);
}

/// Keeps |xi| <= cutoff (low) or |xi| > cutoff (high).
inline SpectralField frequency_cut(const SpectralField& f, int cutoff,
                                   bool keep_low) {
  return apply_multiplier(
      f,
      [cutoff, keep_low](int xi) {
        const bool low = std::abs(xi) <= cutoff;
        return cplx(low == keep_low ? 1.0 : 0.0, 0.0);
      },
      true);
}

/// The function conj(f(x)): coefficients conj(f^(-xi)).
inline SpectralField conjugate(const SpectralField& f) {
  if (f.is_real()) return f;
  SpectralField out(f.grid(), Reality::complex_valued);
  const int kmax = f.max_mode();
  for (int xi = -kmax; xi <= kmax; ++xi) out.set(xi, std::conj(f[-xi]));
  return out;
}

/// Linear Benjamin-Ono group S(t): symbol exp(-i |xi| xi t).
inline SpectralField semigroup_bo(const SpectralField& f, double t) {
  return apply_multiplier(
      f,
      [t](int xi) {
        const double w = static_cast<double>(std::abs(xi)) * xi;
        return std::polar(1.0, -w * t);
      },
      true);
}

/// Free Schroedinger group exp(i t d_xx): symbol exp(-i xi^2 t).
inline SpectralField semigroup_schrodinger(const SpectralField& f, double t) {
  return apply_multiplier(
      f,
      [t](int xi) {
        const double w = static_cast<double>(xi) * xi;
        return std::polar(1.0, -w * t);
      },
      false);
}

/// Translation f(x - a): symbol exp(-i xi a).
inline SpectralField phase_shift(const SpectralField& f, double a) {
  return apply_multiplier(
      f, [a](int xi) { return std::polar(1.0, -xi * a); }, true);
}

/// Zeroes every mode with |xi| above the grid's dealiasing cutoff.
inline SpectralField dealias(const SpectralField& f) {
  return frequency_cut(f, f.grid().dealias_cutoff(), true);
}

}  // namespace bolab
