#pragma once

// Exponential integrators for u_t = L u + N(u) in Fourier space, with
// L = -i |xi| xi (from H u_xx) and N(u) = (1/2) d_x (u^2).
//
// IFRK4: classical RK4 applied to v = exp(-L t) u.
// ETDRK4: Cox-Matthews scheme; phi-functions of the diagonal symbol are
// evaluated by their Taylor series for |z| < 1 and in closed form otherwise.
// Both are exact on the linear flow.

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "bolab/solver/config.hpp"
#include "bolab/spectral/fft.hpp"
#include "bolab/spectral/field.hpp"

namespace bolab {

namespace detail {

/// phi_k(z) = sum_{n>=0} z^n / (n+k)!, k = 1, 2, 3.
inline cplx phi(int k, cplx z) {
  if (std::abs(z) < 1.0) {
    cplx term = 1.0, sum = 0.0;
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    term = 1.0 / fact;  // z^0 / k!
    for (int n = 0; n < 30; ++n) {
      sum += term;
      term *= z / static_cast<double>(n + k + 1);
    }
    return sum;
  }
  const cplx e = std::exp(z);
  switch (k) {
    case 1:
      return (e - 1.0) / z;
    case 2:
      return (e - 1.0 - z) / (z * z);
    default:
      return (e - 1.0 - z - 0.5 * z * z) / (z * z * z);
  }
}

}  // namespace detail

/// Evaluates the dealiased quadratic term (1/2) d_x (u^2) of a real field
/// given in FFT order. Reuses internal buffers; one instance per thread.
class NonlinearTerm {
 public:
  NonlinearTerm(const GridSpec& grid, DealiasRule rule)
      : grid_(grid),
        cutoff_(rule == DealiasRule::two_thirds ? grid.dealias_cutoff()
                                                : grid.max_mode()),
        phys_(static_cast<std::size_t>(grid.n_modes())),
        spec_(phys_.size()) {}

  void operator()(std::span<const cplx> u, std::span<cplx> out) {
    const int n = grid_.n_modes();
    fft::transform(u, phys_, fft::Direction::backward);
    // u(x_n) = phys/2pi; the forward DFT of u^2 is then scaled by 2pi/N.
    const double scale = 1.0 / (kTwoPi * kTwoPi) * (kTwoPi / n);
    for (auto& v : phys_) {
      const double r = v.real();
      v = cplx(r * r * scale, 0.0);
    }
    fft::transform(phys_, spec_, fft::Direction::forward);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const int xi = grid_.mode_at(i);
      if (std::abs(xi) > cutoff_ || xi == n / 2) {
        out[i] = cplx{};
      } else {
        out[i] = cplx(0.0, 0.5 * xi) * spec_[i];
      }
    }
  }

 private:
  GridSpec grid_;
  int cutoff_;
  std::vector<cplx> phys_, spec_;
};

/// Fixed-step integrator on one grid. Not thread-safe; create one per
/// trajectory.
class Stepper {
 public:
  Stepper(const GridSpec& grid, double dt, const SolverConfig& cfg)
      : grid_(grid),
        dt_(dt),
        cfg_(cfg),
        nonlinear_(grid, cfg.dealias),
        size_(static_cast<std::size_t>(grid.n_modes())) {
    e_.resize(size_);
    e2_.resize(size_);
    for (std::size_t i = 0; i < size_; ++i) {
      const int xi = grid.mode_at(i);
      const double w = static_cast<double>(std::abs(xi)) * xi;
      e_[i] = std::polar(1.0, -w * dt);
      e2_[i] = std::polar(1.0, -w * dt / 2.0);
    }
    if (cfg.integrator == Integrator::etdrk4) {
      q_.resize(size_);
      f1_.resize(size_);
      f2_.resize(size_);
      f3_.resize(size_);
      for (std::size_t i = 0; i < size_; ++i) {
        const int xi = grid.mode_at(i);
        const cplx L(0.0, -static_cast<double>(std::abs(xi)) * xi);
        const cplx z = L * dt;
        q_[i] = 0.5 * dt * detail::phi(1, 0.5 * z);
        const cplx p1 = detail::phi(1, z), p2 = detail::phi(2, z),
                   p3 = detail::phi(3, z);
        f1_[i] = dt * (p1 - 3.0 * p2 + 4.0 * p3);
        f2_[i] = dt * (p2 - 2.0 * p3);
        f3_[i] = dt * (-p2 + 4.0 * p3);
      }
    }
    for (auto* b : {&n1_, &n2_, &n3_, &n4_, &a_, &b_, &c_}) b->resize(size_);
  }

  double dt() const { return dt_; }

  /// Advances u (FFT-order coefficients of a real field) by one step.
  void advance(std::span<cplx> u) {
    if (cfg_.integrator == Integrator::ifrk4)
      advance_ifrk4(u);
    else
      advance_etdrk4(u);
  }

 private:
  void eval(std::span<const cplx> u, std::vector<cplx>& out) {
    if (!cfg_.nonlinear) {
      std::fill(out.begin(), out.end(), cplx{});
      return;
    }
    nonlinear_(u, out);
  }

  void advance_ifrk4(std::span<cplx> u) {
    const double h = dt_;
    eval(u, n1_);
    for (std::size_t i = 0; i < size_; ++i)
      a_[i] = e2_[i] * (u[i] + 0.5 * h * n1_[i]);
    eval(a_, n2_);
    for (std::size_t i = 0; i < size_; ++i)
      b_[i] = e2_[i] * u[i] + 0.5 * h * n2_[i];
    eval(b_, n3_);
    for (std::size_t i = 0; i < size_; ++i)
      c_[i] = e_[i] * u[i] + h * e2_[i] * n3_[i];
    eval(c_, n4_);
    for (std::size_t i = 0; i < size_; ++i)
      u[i] = e_[i] * u[i] +
             h / 6.0 *
                 (e_[i] * n1_[i] + 2.0 * e2_[i] * (n2_[i] + n3_[i]) + n4_[i]);
  }

  void advance_etdrk4(std::span<cplx> u) {
    eval(u, n1_);
    for (std::size_t i = 0; i < size_; ++i)
      a_[i] = e2_[i] * u[i] + q_[i] * n1_[i];
    eval(a_, n2_);
    for (std::size_t i = 0; i < size_; ++i)
      b_[i] = e2_[i] * u[i] + q_[i] * n2_[i];
    eval(b_, n3_);
    for (std::size_t i = 0; i < size_; ++i)
      c_[i] = e2_[i] * a_[i] + q_[i] * (2.0 * n3_[i] - n1_[i]);
    eval(c_, n4_);
    for (std::size_t i = 0; i < size_; ++i)
      u[i] = e_[i] * u[i] + f1_[i] * n1_[i] +
             2.0 * f2_[i] * (n2_[i] + n3_[i]) + f3_[i] * n4_[i];
  }

  GridSpec grid_;
  double dt_;
  SolverConfig cfg_;
  NonlinearTerm nonlinear_;
  std::size_t size_;
  std::vector<cplx> e_, e2_, q_, f1_, f2_, f3_;
  std::vector<cplx> n1_, n2_, n3_, n4_, a_, b_, c_;
};

/// (1/2) d_x (u^2) with the configured dealiasing, as a field.
inline SpectralField rhs_nonlinear(const SpectralField& u,
                                   DealiasRule rule = DealiasRule::two_thirds) {
  if (!u.is_real())
    throw PreconditionError("rhs_nonlinear requires a real-valued field");
  NonlinearTerm term(u.grid(), rule);
  SpectralField out(u.grid(), Reality::real_valued);
  term(u.data(), out.mutable_data());
  out.restore_invariants();
  out.set_mean_zero();
  return out;
}

/// One step of the configured integrator. Hermitian symmetry and (when the
/// input has it) the zero mean are re-imposed. dt may be negative.
inline SpectralField step(const SpectralField& u, double dt,
                          const SolverConfig& cfg) {
  if (!u.is_real())
    throw PreconditionError("step requires a real-valued field");
  if (std::abs(dt) > 0.1 || dt == 0.0)
    throw ValidationError("step: |dt| must lie in (0, 0.1]");
  Stepper stepper(u.grid(), dt, cfg);
  SpectralField out = u;
  const bool mz = u.mean_zero();
  stepper.advance(out.mutable_data());
  out.restore_invariants();
  if (mz) out.set_mean_zero();
  if (!out.all_finite()) throw BlowUpError("non-finite coefficient", dt);
  return out;
}

}  // namespace bolab
