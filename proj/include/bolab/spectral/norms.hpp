#pragma once

#include <cmath>

#include "bolab/spectral/operators.hpp"
#include "bolab/spectral/transform.hpp"

namespace bolab {

/// ||f||_{H^s}^2 = (1/2pi) sum <xi>^{2s} |f^(xi)|^2.
inline double sobolev_norm(const SpectralField& f, double s) {
  const GridSpec& g = f.grid();
  const auto c = f.data();
  double acc = 0.0;
  for (int xi = -g.max_mode(); xi <= g.max_mode(); ++xi) {
    const double w = s == 0.0 ? 1.0 : std::pow(1.0 + double(xi) * xi, s);
    acc += w * std::norm(c[g.slot(xi)]);
  }
  return std::sqrt(acc / kTwoPi);
}

/// Homogeneous seminorm squared: (1/2pi) sum |xi|^{2s} |f^(xi)|^2.
inline double homogeneous_sobolev_sq(const SpectralField& f, double s) {
  const GridSpec& g = f.grid();
  const auto c = f.data();
  double acc = 0.0;
  for (int xi = -g.max_mode(); xi <= g.max_mode(); ++xi) {
    if (xi == 0) continue;
    acc += std::pow(std::abs(double(xi)), 2.0 * s) * std::norm(c[g.slot(xi)]);
  }
  return acc / kTwoPi;
}

inline double l2_norm(const SpectralField& f) { return sobolev_norm(f, 0.0); }

/// Trapezoidal integral over one period of the samples of a field on the
/// grid refined by `factor`, after applying `fn` pointwise.
template <class Fn>
double integrate_pointwise(const SpectralField& f, int factor, Fn&& fn) {
  const GridSpec fine = f.grid().refined(factor);
  const auto z = synthesize_complex(resample(f, fine));
  double acc = 0.0;
  for (const auto& v : z) acc += fn(v);
  return acc * kTwoPi / static_cast<double>(z.size());
}

/// W^{s,p} norm ||J^s f||_{L^p} for p in {2,3,4,6}. p = 2 is exact through
/// Parseval; other p use collocation on a 2x oversampled grid.
inline double lp_norm(const SpectralField& f, double s, int p) {
  if (p != 2 && p != 3 && p != 4 && p != 6)
    throw ValidationError("lp_norm supports p in {2,3,4,6}, got " +
                          std::to_string(p));
  if (p == 2) return sobolev_norm(f, s);
  const SpectralField g = s == 0.0 ? f : bessel(f, s);
  const double integral = integrate_pointwise(
      g, 2, [p](cplx v) { return std::pow(std::abs(v), p); });
  return std::pow(integral, 1.0 / p);
}

/// Integral of u^3 for a real field; exact on the 2x grid for band-limited u.
inline double cubic_integral(const SpectralField& u) {
  return integrate_pointwise(u, 2, [](cplx v) {
    const double r = v.real();
    return r * r * r;
  });
}

}  // namespace bolab
