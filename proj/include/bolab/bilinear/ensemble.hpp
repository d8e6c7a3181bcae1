#pragma once

// Random space-time test fields for the bilinear estimate.

#include <cstdint>
#include <random>

#include "bolab/bilinear/trilinear.hpp"

namespace bolab {

struct EnsembleSpec {
  int m_points = 256;
  double T = kPi / 2.0;       // dtau = 2 pi / (4T) = 1
  double lambda_max = 32.0;   // modulation cutoff for V
  int q_max = 4;              // time harmonics of the U profile
};

inline std::mt19937_64 cell_rng(std::uint64_t base, int k, int m, int j,
                                int seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(base),
                    static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(m),
                    static_cast<std::uint32_t>(j),
                    static_cast<std::uint32_t>(seed)};
  return std::mt19937_64(seq);
}

namespace detail {

inline cplx complex_gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  return {re, n(rng)};
}

}  // namespace detail

/// V in X on the band |xi| in [2^(k-1), 2^k), values g / <lambda> for
/// |lambda| <= lambda_max, g standard complex Gaussian.
inline SpaceTimeField random_v(int k, const EnsembleSpec& e,
                               std::mt19937_64& rng) {
  const int hi = (1 << k) - 1;
  SpaceTimeField v(-hi, hi, e.m_points, kTwoPi / (4.0 * e.T),
                   Dispersion::schrodinger_minus);
  for (int xi = -hi; xi <= hi; ++xi) {
    if (!in_dyadic_band(xi, k)) continue;
    for (int l = 0; l < e.m_points; ++l) {
      const double lam = v.lambda(l);
      if (std::abs(lam) > e.lambda_max) continue;
      v.at(xi, l) = detail::complex_gaussian(rng) / std::sqrt(1.0 + lam * lam);
    }
  }
  return v;
}

/// U in X-bar on xi in -[2^(m-1), 2^m), with profiles
///   eta(2t/T) sum_{|q|<=q_max} c_q exp(iqt) / <q>^2
/// supported in |t| < T. With zero harmonics other than q = 0 the field sits
/// on the characteristic tau = xi^2.
inline SpaceTimeField random_u(int m, const EnsembleSpec& e,
                               std::mt19937_64& rng, bool characteristic = false) {
  const int lo = -((1 << m) - 1), hi = -(1 << (m - 1));
  const int qn = characteristic ? 0 : e.q_max;
  std::vector<std::vector<cplx>> c(static_cast<std::size_t>(hi - lo + 1));
  for (auto& row : c) {
    row.resize(static_cast<std::size_t>(2 * qn + 1));
    for (int q = -qn; q <= qn; ++q)
      row[q + qn] = detail::complex_gaussian(rng) / (1.0 + double(q) * q);
  }
  const double T = e.T;
  return spacetime_from_profiles(
      lo, hi, e.m_points, T, Dispersion::schrodinger_plus,
      [&](int xi, double t) -> cplx {
        const double cut = cutoff_eta(2.0 * t / T);
        if (cut == 0.0) return cplx{};
        cplx acc = 0.0;
        const auto& row = c[static_cast<std::size_t>(xi - lo)];
        for (int q = -qn; q <= qn; ++q) acc += row[q + qn] * std::polar(1.0, q * t);
        return cut * acc;
      });
}

}  // namespace bolab
