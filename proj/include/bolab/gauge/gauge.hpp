#pragma once

// Gauge transform w = d_x P+ exp(-iF/2), F the mean-zero primitive of u, and
// residual checks of the equations satisfied by F and w.

#include <cmath>
#include <vector>

#include "bolab/solver/solve.hpp"
#include "bolab/spectral/norms.hpp"
#include "bolab/spectral/operators.hpp"
#include "bolab/spectral/transform.hpp"

namespace bolab {

/// Oversampling factor used for exp(-iF/2).
inline constexpr int kGaugeOversample = 4;

struct GaugeState {
  double t = 0.0;
  SpectralField u;
  SpectralField f_prim;
  SpectralField w;
  double k_const = 0.0;
};

namespace detail {

inline void require_gauge_input(const SpectralField& u, const char* who) {
  require_real(u, who);
  if (!u.mean_zero())
    throw PreconditionError(std::string(who) + " requires mean-zero u");
}

/// exp(-iF/2) on the grid refined by kGaugeOversample.
inline SpectralField gauge_exponential(const SpectralField& u) {
  const SpectralField f = antiderivative(u);
  const GridSpec fine = u.grid().refined(kGaugeOversample);
  const auto fs = synthesize(resample(f, fine));
  std::vector<cplx> e(fs.size());
  for (std::size_t n = 0; n < fs.size(); ++n) {
    e[n] = std::polar(1.0, -0.5 * fs[n]);
    if (std::abs(e[n]) > 1.0 + 1e-12)
      throw NumericalError("exp(-iF/2) is not unimodular at sample " +
                           std::to_string(n));
  }
  return analyze(std::span<const cplx>(e), fine);
}

inline SpectralField plus_derivative(const SpectralField& f) {
  return derivative(project(f, Projection::plus));
}

}  // namespace detail

/// w on the grid of u. Supported on xi >= 1.
inline SpectralField gauge_transform(const SpectralField& u) {
  detail::require_gauge_input(u, "gauge_transform");
  return resample(detail::plus_derivative(detail::gauge_exponential(u)),
                  u.grid());
}

/// K = ||u0||^2 / (8 pi).
inline double gauge_constant(const SpectralField& u0) {
  const double n = l2_norm(u0);
  return n * n / (8.0 * kPi);
}

inline GaugeState make_gauge_state(const SpectralField& u, double t,
                                   double k_const) {
  detail::require_gauge_input(u, "make_gauge_state");
  return GaugeState{t, u, antiderivative(u), gauge_transform(u), k_const};
}

/// r(t) = exp(-iKt) w(t) - exp(it d_xx) w0 at every snapshot, with K taken
/// from the initial state.
inline std::vector<SpectralField> smoothing_residual(const Trajectory& tr) {
  if (tr.size() == 0) throw PreconditionError("empty trajectory");
  const double k = gauge_constant(tr.initial());
  const SpectralField w0 = gauge_transform(tr.initial());
  std::vector<SpectralField> out;
  out.reserve(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double t = tr.times[i];
    SpectralField w = i == 0 ? w0 : gauge_transform(tr.states[i]);
    if (t != 0.0) w *= std::polar(1.0, -k * t);
    w -= semigroup_schrodinger(w0, t);
    out.push_back(std::move(w));
  }
  return out;
}

/// L2 norm of LHS - RHS of
///   F_t + H F_xx - F_x^2 / 2 = -mean(F_x^2) / 2
/// with F_t = d_x^{-1} u_t. Products are formed on a grid that holds them
/// exactly.
inline double f_equation_residual(const SpectralField& u,
                                  const SpectralField& u_t) {
  require_real(u, "f_equation_residual");
  const int n = std::max(u.grid().n_modes() * 2, u_t.grid().n_modes());
  const GridSpec work(n, u.grid().dealias_fraction());
  const SpectralField uw = resample(u, work);
  SpectralField ut = resample(u_t, work);
  ut.set_mean_zero();
  SpectralField lhs = antiderivative(ut);
  lhs += hilbert(derivative(uw));
  SpectralField sq = multiply(uw, uw, work);
  sq *= 0.5;
  lhs -= sq;
  // RHS is the constant -mean(u^2)/2, i.e. coefficient -sq^(0) at xi = 0.
  SpectralField rhs(work);
  rhs.set(0, -sq[0]);
  return l2_distance(lhs, rhs);
}

/// L2 norm (on the grid of u) of LHS - RHS of
///   w_t - i w_xx = -d_x P+((d_x^{-1} w) P-(u_x)) + (i/4) mean(u^2) w.
/// w_t is obtained from u_t through the gauge map,
///   w_t = d_x P+(-(i/2) F_t exp(-iF/2)),
/// with every product formed on the oversampled gauge grid. Setting
/// `include_mean_term` to false drops the last term.
inline double gauged_equation_residual(const GaugeState& st,
                                       const SpectralField& u_t,
                                       bool include_mean_term = true) {
  detail::require_gauge_input(st.u, "gauged_equation_residual");
  const GridSpec& g = st.u.grid();
  const SpectralField e = detail::gauge_exponential(st.u);
  const GridSpec& fine = e.grid();

  SpectralField ut = resample(u_t, fine);
  ut.set_mean_zero();
  const SpectralField ft = antiderivative(ut);
  SpectralField prod = multiply(ft, e, fine);
  prod *= cplx(0.0, -0.5);
  SpectralField lhs = resample(detail::plus_derivative(prod), g);
  SpectralField wxx = second_derivative(st.w);
  wxx *= cplx(0.0, 1.0);
  lhs -= wxx;

  // d_x^{-1} w = P+ exp(-iF/2) on the fine grid.
  const SpectralField pe = project(e, Projection::plus);
  const SpectralField pux =
      project(resample(derivative(st.u), fine), Projection::minus);
  SpectralField rhs_fine = detail::plus_derivative(multiply(pe, pux, fine));
  rhs_fine *= -1.0;
  SpectralField rhs = resample(rhs_fine, g);
  if (include_mean_term) {
    const double n2 = l2_norm(st.u);
    SpectralField mw = st.w;
    mw *= cplx(0.0, 0.25 * n2 * n2 / kTwoPi);
    rhs += mw;
  }
  return l2_distance(lhs, rhs);
}

/// ||u||_{H^s} / ((1 + ||u0||) (||w||_{H^s} + 1 + ||u0||)), norms of u0 in L2.
inline double ungauge_ratio(const SpectralField& u, const SpectralField& w,
                            const SpectralField& u0, double s) {
  if (!(s > 0.5 && s <= 1.0))
    throw ValidationError("ungauge_ratio requires s in (1/2, 1], got " +
                          std::to_string(s));
  const double a = 1.0 + l2_norm(u0);
  return sobolev_norm(u, s) / (a * (sobolev_norm(w, s) + a));
}

}  // namespace bolab
