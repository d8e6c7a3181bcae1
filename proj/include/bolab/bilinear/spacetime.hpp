#pragma once

// Space-time Fourier data on a (xi, tau) lattice.
//
// A window of length T_win = 4T is sampled at M points t_n = -T_win/2 + n dt,
// dt = T_win / M. The time frequencies form the lattice of spacing
// dtau = 2 pi / T_win. Each row xi is stored relative to its characteristic:
// slot l holds the modulation lambda_l = (l - M/2) dtau = tau + omega(xi), so
//   values(xi, l) = f~(xi, lambda_l - omega(xi))
// with f~(xi, tau) = int exp(-i tau t) f^(xi, t) dt. When omega takes integer
// values and dtau = 1 every row sits on the same tau lattice.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "bolab/bilinear/cutoff.hpp"
#include "bolab/solver/solve.hpp"
#include "bolab/spectral/fft.hpp"
#include "bolab/spectral/field.hpp"

namespace bolab {

/// Dispersion relation selecting the modulation weight <tau + omega(xi)>.
enum class Dispersion {
  schrodinger_minus,  // omega = xi^2, the space X
  schrodinger_plus,   // omega = -xi^2, the space X-bar
  bo                  // omega = |xi| xi
};

inline double omega(Dispersion d, int xi) {
  const double x = xi;
  switch (d) {
    case Dispersion::schrodinger_minus:
      return x * x;
    case Dispersion::schrodinger_plus:
      return -x * x;
    case Dispersion::bo:
      break;
  }
  return std::abs(x) * x;
}

inline std::string to_string(Dispersion d) {
  switch (d) {
    case Dispersion::schrodinger_minus:
      return "schrodinger_minus";
    case Dispersion::schrodinger_plus:
      return "schrodinger_plus";
    case Dispersion::bo:
      break;
  }
  return "bo";
}

class SpaceTimeField {
 public:
  SpaceTimeField(int xi_min, int xi_max, int m_points, double dtau,
                 Dispersion disp)
      : xi_min_(xi_min),
        xi_max_(xi_max),
        m_(m_points),
        dtau_(dtau),
        disp_(disp) {
    if (xi_max < xi_min) throw ValidationError("empty xi range");
    if (m_points < 2 || m_points % 2 != 0)
      throw ValidationError("tau lattice needs an even number of points");
    if (!(dtau > 0.0)) throw ValidationError("dtau must be positive");
    values_.assign(static_cast<std::size_t>(xi_max - xi_min + 1) * m_points,
                   cplx{});
  }

  int xi_min() const { return xi_min_; }
  int xi_max() const { return xi_max_; }
  int m_points() const { return m_; }
  double dtau() const { return dtau_; }
  Dispersion dispersion() const { return disp_; }
  double window() const { return kTwoPi / dtau_; }
  double dt() const { return window() / m_; }

  bool contains(int xi) const { return xi >= xi_min_ && xi <= xi_max_; }

  double lambda(int l) const { return (l - m_ / 2) * dtau_; }
  double tau(int xi, int l) const { return lambda(l) - omega(disp_, xi); }
  /// Sample time t_n of the underlying window.
  double time(int n) const { return -window() / 2.0 + n * dt(); }

  cplx& at(int xi, int l) { return values_[index(xi, l)]; }
  cplx at(int xi, int l) const { return values_[index(xi, l)]; }

  bool all_finite() const {
    for (const auto& v : values_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Zeroes every row for which keep(xi) is false.
  template <class Pred>
  SpaceTimeField restricted(Pred&& keep) const {
    SpaceTimeField out = *this;
    for (int xi = xi_min_; xi <= xi_max_; ++xi)
      if (!keep(xi))
        for (int l = 0; l < m_; ++l) out.at(xi, l) = cplx{};
    return out;
  }

 private:
  std::size_t index(int xi, int l) const {
    if (!contains(xi) || l < 0 || l >= m_)
      throw DimensionError("space-time index (" + std::to_string(xi) + ", " +
                           std::to_string(l) + ") out of range");
    return static_cast<std::size_t>(xi - xi_min_) * m_ +
           static_cast<std::size_t>(l);
  }

  int xi_min_, xi_max_, m_;
  double dtau_;
  Dispersion disp_;
  std::vector<cplx> values_;
};

/// Builds the lattice from profiles p(xi, t_n) = exp(i omega t) f^(xi, t):
///   values(xi, l) = dt sum_n exp(-i lambda_l t_n) p(xi, t_n).
/// T fixes the window: T_win = 4T, dtau = 2pi / (4T).
inline SpaceTimeField spacetime_from_profiles(
    int xi_min, int xi_max, int m_points, double T, Dispersion disp,
    const std::function<cplx(int, double)>& profile) {
  if (!(T > 0.0)) throw ValidationError("window half-length T must be > 0");
  SpaceTimeField f(xi_min, xi_max, m_points, kTwoPi / (4.0 * T), disp);
  const int m = m_points;
  const double sign_m2 = (m / 2) % 2 ? -1.0 : 1.0;
  std::vector<cplx> in(static_cast<std::size_t>(m)), out(in.size());
  for (int xi = xi_min; xi <= xi_max; ++xi) {
    bool any = false;
    for (int n = 0; n < m; ++n) {
      in[n] = profile(xi, f.time(n)) * (n % 2 ? -1.0 : 1.0);
      any = any || in[n] != cplx{};
    }
    if (!any) continue;
    fft::transform(in, out, fft::Direction::forward);
    for (int l = 0; l < m; ++l)
      f.at(xi, l) = out[l] * (f.dt() * sign_m2 * (l % 2 ? -1.0 : 1.0));
  }
  return f;
}

/// Inverse of spacetime_from_profiles: the profile samples p(xi, t_n).
inline std::vector<cplx> profile_samples(const SpaceTimeField& f, int xi) {
  const int m = f.m_points();
  const double sign_m2 = (m / 2) % 2 ? -1.0 : 1.0;
  std::vector<cplx> in(static_cast<std::size_t>(m)), out(in.size());
  for (int l = 0; l < m; ++l) in[l] = f.at(xi, l) * (l % 2 ? -1.0 : 1.0);
  fft::transform(in, out, fft::Direction::backward);
  const double scale = sign_m2 / (m * f.dt());
  for (int n = 0; n < m; ++n) out[n] *= scale * (n % 2 ? -1.0 : 1.0);
  return out;
}

/// f^(xi, t_n) = exp(-i omega t_n) p(xi, t_n).
inline std::vector<cplx> time_samples(const SpaceTimeField& f, int xi) {
  auto p = profile_samples(f, xi);
  const double w = omega(f.dispersion(), xi);
  for (int n = 0; n < f.m_points(); ++n)
    p[n] *= std::polar(1.0, -w * f.time(n));
  return p;
}

/// ||f||_{X^{s,b}} = ( sum_{xi,l} <xi>^{2s} <lambda_l>^{2b} |values|^2 dtau )^{1/2}.
/// With s = b = 0 this is 2 pi times the space-time L2 norm.
inline double bourgain_norm(const SpaceTimeField& f, double s, double b) {
  double acc = 0.0;
  for (int xi = f.xi_min(); xi <= f.xi_max(); ++xi) {
    const double wx = s == 0.0 ? 1.0 : std::pow(1.0 + double(xi) * xi, s);
    for (int l = 0; l < f.m_points(); ++l) {
      const cplx v = f.at(xi, l);
      if (v == cplx{}) continue;
      const double lam = f.lambda(l);
      const double wl = b == 0.0 ? 1.0 : std::pow(1.0 + lam * lam, b);
      acc += wx * wl * std::norm(v);
    }
  }
  return std::sqrt(acc * f.dtau());
}

/// sup_n ||f(t_n)||_{L2_x}, from the inverse transform.
inline double sup_time_l2(const SpaceTimeField& f) {
  std::vector<double> acc(static_cast<std::size_t>(f.m_points()), 0.0);
  for (int xi = f.xi_min(); xi <= f.xi_max(); ++xi) {
    const auto p = profile_samples(f, xi);
    for (int n = 0; n < f.m_points(); ++n) acc[n] += std::norm(p[n]);
  }
  double mx = 0.0;
  for (double a : acc) mx = std::max(mx, a);
  return std::sqrt(mx / kTwoPi);
}

/// Space-time pairing sum values_f conj(values_g) dtau on identical lattices.
inline cplx spacetime_pairing(const SpaceTimeField& f,
                              const SpaceTimeField& g) {
  if (f.xi_min() != g.xi_min() || f.xi_max() != g.xi_max() ||
      f.m_points() != g.m_points() || f.dtau() != g.dtau() ||
      f.dispersion() != g.dispersion())
    throw DimensionError("pairing requires identical lattices");
  cplx acc = 0.0;
  for (int xi = f.xi_min(); xi <= f.xi_max(); ++xi)
    for (int l = 0; l < f.m_points(); ++l)
      acc += f.at(xi, l) * std::conj(g.at(xi, l));
  return acc * f.dtau();
}

namespace detail {

inline std::size_t snapshot_at(const Trajectory& tr, double t) {
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  // Snapshot times are increasing; binary search then check.
  auto it = std::lower_bound(tr.times.begin(), tr.times.end(), t - tol);
  if (it == tr.times.end() || std::abs(*it - t) > tol)
    throw PreconditionError("trajectory has no snapshot at t=" + fmt_g(t) +
                            " (insufficient coverage)");
  return static_cast<std::size_t>(it - tr.times.begin());
}

inline void require_coverage(const Trajectory& tr, double T) {
  if (tr.size() == 0 || tr.times.back() < T - 1e-9 * std::max(1.0, T))
    throw PreconditionError("trajectory ends at t=" +
                            fmt_g(tr.size() ? tr.times.back() : 0.0) +
                            ", before T=" + fmt_g(T));
}

}  // namespace detail

/// u*(t) = S(t) eta_T(t) S(-mu_T(t)) u(mu_T(t)), with S(t) the group with
/// multiplier exp(-i omega(xi) t). u(mu) must be a snapshot time.
inline SpectralField extension(const Trajectory& tr, double T, Dispersion disp,
                               double t) {
  detail::require_coverage(tr, T);
  const double eta = cutoff_eta_T(t, T);
  const bool real_out = disp == Dispersion::bo;
  SpectralField out(tr.grid,
                    real_out ? Reality::real_valued : Reality::complex_valued);
  if (eta == 0.0) return out;
  const double mu = reflection_mu(t, T);
  const SpectralField& u = tr.states[detail::snapshot_at(tr, mu)];
  const int kmax = tr.grid.max_mode();
  for (int xi = real_out ? 0 : -kmax; xi <= kmax; ++xi)
    out.set(xi, eta * std::polar(1.0, -omega(disp, xi) * (t - mu)) * u[xi]);
  return out;
}

/// Lattice of the extension u* over the window [-2T, 2T) for the modes
/// |xi| <= xi_max (default: all resolved modes).
inline SpaceTimeField spacetime_from_trajectory(const Trajectory& tr, double T,
                                                int m_points, Dispersion disp,
                                                int xi_max = -1) {
  detail::require_coverage(tr, T);
  const int kmax = xi_max < 0 ? tr.grid.max_mode() : xi_max;
  if (kmax > tr.grid.max_mode())
    throw DimensionError("xi_max exceeds the trajectory grid");
  const double dt = 4.0 * T / m_points;
  std::vector<std::size_t> snap(static_cast<std::size_t>(m_points));
  std::vector<double> eta(snap.size()), mu(snap.size());
  for (int n = 0; n < m_points; ++n) {
    const double t = -2.0 * T + n * dt;
    eta[n] = cutoff_eta_T(t, T);
    mu[n] = reflection_mu(t, T);
    if (eta[n] != 0.0) snap[n] = detail::snapshot_at(tr, mu[n]);
  }
  return spacetime_from_profiles(
      -kmax, kmax, m_points, T, disp, [&](int xi, double t) -> cplx {
        const int n = static_cast<int>(std::lround((t + 2.0 * T) / dt));
        if (eta[n] == 0.0) return cplx{};
        return eta[n] * std::polar(1.0, omega(disp, xi) * mu[n]) *
               tr.states[snap[n]][xi];
      });
}

}  // namespace bolab
