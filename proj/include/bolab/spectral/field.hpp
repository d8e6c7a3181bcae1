#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "bolab/error.hpp"
#include "bolab/spectral/grid.hpp"

namespace bolab {

using cplx = std::complex<double>;

enum class Reality { real_valued, complex_valued };

/// Fourier coefficients of a 2*pi-periodic function on a GridSpec.
///
/// Convention: f^(xi) = integral of exp(-i xi x) f(x) dx over one period, so
/// f(x) = (1/2pi) sum f^(xi) exp(i xi x) and ||f||_2^2 = (1/2pi) sum |f^|^2.
/// Coefficients are stored in FFT order; the Nyquist slot is always zero.
/// A real-valued field satisfies f^(-xi) = conj(f^(xi)) bit-for-bit.
class SpectralField {
 public:
  explicit SpectralField(GridSpec grid, Reality reality = Reality::real_valued)
      : grid_(grid),
        reality_(reality),
        coeffs_(static_cast<std::size_t>(grid.n_modes()), cplx{}) {}

  const GridSpec& grid() const { return grid_; }
  Reality reality() const { return reality_; }
  bool is_real() const { return reality_ == Reality::real_valued; }
  bool mean_zero() const { return coeffs_[0] == cplx{}; }

  int max_mode() const { return grid_.max_mode(); }

  cplx operator[](int xi) const {
    check(xi);
    return coeffs_[grid_.slot(xi)];
  }

  /// Writes one coefficient. On a real field the partner -xi is set to the
  /// conjugate and the zero mode is forced real.
  void set(int xi, cplx value) {
    check(xi);
    if (is_real()) {
      if (xi == 0) {
        coeffs_[0] = cplx(value.real(), 0.0);
        return;
      }
      coeffs_[grid_.slot(xi)] = value;
      coeffs_[grid_.slot(-xi)] = std::conj(value);
      return;
    }
    coeffs_[grid_.slot(xi)] = value;
  }

  /// Raw FFT-order storage (length N, Nyquist slot zero).
  std::span<const cplx> data() const { return coeffs_; }

  /// Mutable storage for kernels; call restore_invariants() afterwards.
  std::span<cplx> mutable_data() { return coeffs_; }

  /// Re-imposes Nyquist = 0 and, for real fields, exact Hermitian symmetry
  /// taken from the non-negative wavenumbers.
  void restore_invariants() {
    coeffs_[static_cast<std::size_t>(grid_.n_modes() / 2)] = cplx{};
    if (!is_real()) return;
    coeffs_[0] = cplx(coeffs_[0].real(), 0.0);
    for (int xi = 1; xi <= max_mode(); ++xi)
      coeffs_[grid_.slot(-xi)] = std::conj(coeffs_[grid_.slot(xi)]);
  }

  void set_mean_zero() { coeffs_[0] = cplx{}; }

  /// Reinterpret as complex-valued (no data change).
  SpectralField as_complex() const {
    SpectralField out = *this;
    out.reality_ = Reality::complex_valued;
    return out;
  }

  /// Declares a complex field real after checking Hermitian symmetry to tol
  /// (relative to the largest coefficient); symmetry is then made exact.
  SpectralField as_real(double tol = 1e-12) const {
    double scale = 0.0, err = 0.0;
    for (int xi = 0; xi <= max_mode(); ++xi) {
      scale = std::max(scale, std::abs((*this)[xi]));
      err = std::max(err, std::abs((*this)[xi] - std::conj((*this)[-xi])));
    }
    if (err > tol * std::max(scale, 1e-300) && err > 0.0)
      throw PreconditionError("field is not Hermitian-symmetric");
    SpectralField out = *this;
    out.reality_ = Reality::real_valued;
    out.restore_invariants();
    return out;
  }

  bool all_finite() const {
    for (const auto& c : coeffs_)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  SpectralField& operator+=(const SpectralField& o) {
    combine(o, 1.0);
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    combine(o, -1.0);
    return *this;
  }
  SpectralField& operator*=(cplx s) {
    for (auto& c : coeffs_) c *= s;
    if (is_real() && s.imag() != 0.0) reality_ = Reality::complex_valued;
    return *this;
  }
  SpectralField& operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) {
    return a += b;
  }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) {
    return a -= b;
  }
  friend SpectralField operator*(cplx s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

 private:
  void check(int xi) const {
    if (!grid_.contains(xi))
      throw DimensionError("wavenumber " + std::to_string(xi) +
                           " outside resolved range of N=" +
                           std::to_string(grid_.n_modes()));
  }

  void combine(const SpectralField& o, double sign) {
    if (!(o.grid_ == grid_))
      throw DimensionError("fields live on different grids");
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      coeffs_[i] += sign * o.coeffs_[i];
    if (!o.is_real()) reality_ = Reality::complex_valued;
  }

  GridSpec grid_;
  Reality reality_;
  std::vector<cplx> coeffs_;
};

/// L2 distance between two fields on the same grid.
inline double l2_distance(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid()))
    throw DimensionError("fields live on different grids");
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    s += std::norm(a.data()[i] - b.data()[i]);
  return std::sqrt(s / kTwoPi);
}

/// Largest coefficient-wise difference.
inline double max_coeff_distance(const SpectralField& a,
                                 const SpectralField& b) {
  if (!(a.grid() == b.grid()))
    throw DimensionError("fields live on different grids");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace bolab
