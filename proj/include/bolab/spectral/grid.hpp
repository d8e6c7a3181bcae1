#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "bolab/error.hpp"

namespace bolab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Positive rational number, used for the dealiasing fraction.
struct Fraction {
  int num = 2;
  int den = 3;
  double value() const { return static_cast<double>(num) / den; }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Uniform collocation grid on the circle of length 2*pi.
///
/// Holds N points x_n = 2*pi*n/N and the resolved wavenumbers
/// -N/2 < xi < N/2. The Nyquist wavenumber N/2 is never carried.
class GridSpec {
 public:
  static constexpr double period = kTwoPi;

  explicit GridSpec(int n_modes, Fraction dealias = {2, 3})
      : n_(n_modes), dealias_(dealias) {
    if (n_modes < 8 || !std::has_single_bit(static_cast<unsigned>(n_modes)))
      throw ValidationError("grid size must be a power of two >= 8, got " +
                            std::to_string(n_modes));
    if (dealias.num <= 0 || dealias.den <= 0 || dealias.num > dealias.den)
      throw ValidationError("dealias fraction must lie in (0,1]");
  }

  int n_modes() const { return n_; }
  Fraction dealias_fraction() const { return dealias_; }

  /// Largest resolved |xi| (Nyquist excluded).
  int max_mode() const { return n_ / 2 - 1; }

  /// Largest |xi| kept by the dealiasing rule: |xi| <= fraction * N/2.
  int dealias_cutoff() const {
    const long long c = static_cast<long long>(dealias_.num) * n_ /
                        (2LL * dealias_.den);
    return c > max_mode() ? max_mode() : static_cast<int>(c);
  }

  bool contains(int xi) const { return xi >= -max_mode() && xi <= max_mode(); }

  /// Storage slot of wavenumber xi in FFT order.
  std::size_t slot(int xi) const {
    return static_cast<std::size_t>(xi >= 0 ? xi : xi + n_);
  }

  /// Wavenumber stored at FFT-order slot i (the Nyquist slot maps to N/2).
  int mode_at(std::size_t i) const {
    const int k = static_cast<int>(i);
    return k <= n_ / 2 ? k : k - n_;
  }

  double x(int n) const { return period * n / n_; }

  GridSpec refined(int factor) const { return GridSpec(n_ * factor, dealias_); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int n_;
  Fraction dealias_;
};

/// <xi> = (1 + xi^2)^(1/2).
inline double japanese(double xi) { return std::sqrt(1.0 + xi * xi); }

}  // namespace bolab
