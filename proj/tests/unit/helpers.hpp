#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "bolab/spectral/field.hpp"
#include "bolab/spectral/transform.hpp"

namespace testing_util {

using bolab::cplx;
using bolab::GridSpec;
using bolab::SpectralField;

inline SpectralField random_real(const GridSpec& g, unsigned seed,
                                 int band = -1, bool mean_zero = true) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  SpectralField f(g);
  const int kmax = band < 0 ? g.max_mode() : band;
  for (int xi = mean_zero ? 1 : 0; xi <= kmax; ++xi) {
    const double w = 1.0 / (1.0 + xi * xi * 0.01);
    f.set(xi, cplx(n(rng), n(rng)) * w);
  }
  return f;
}

inline SpectralField random_complex(const GridSpec& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  SpectralField f(g, bolab::Reality::complex_valued);
  for (int xi = -g.max_mode(); xi <= g.max_mode(); ++xi)
    f.set(xi, cplx(n(rng), n(rng)));
  return f;
}

inline SpectralField cos_mode(const GridSpec& g, int k = 1, double amp = 1.0) {
  SpectralField f(g);
  f.set(k, cplx(amp * bolab::kPi, 0.0));
  return f;
}

inline SpectralField sin_mode(const GridSpec& g, int k = 1, double amp = 1.0) {
  SpectralField f(g);
  f.set(k, cplx(0.0, -amp * bolab::kPi));
  return f;
}

/// Trapezoidal rule on [0, 2pi) with n points; spectrally accurate for
/// smooth periodic integrands.
template <class Fn>
cplx periodic_quadrature(Fn&& fn, int n = 4096) {
  cplx acc = 0.0;
  for (int i = 0; i < n; ++i) acc += fn(bolab::kTwoPi * i / n);
  return acc * (bolab::kTwoPi / n);
}

}  // namespace testing_util
