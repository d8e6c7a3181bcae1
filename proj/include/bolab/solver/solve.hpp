#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bolab/solver/conserved.hpp"
#include "bolab/solver/stepper.hpp"
#include "bolab/spectral/norms.hpp"
#include "bolab/spectral/operators.hpp"
#include "bolab/spectral/transform.hpp"

namespace bolab {

/// Snapshots of one run. States are real-valued; they are mean-zero unless
/// produced by solve_unreduced.
struct Trajectory {
  GridSpec grid{8};
  SolverConfig config;
  std::vector<double> times;
  std::vector<SpectralField> states;
  std::vector<ConservedTriple> invariants;
  std::vector<double> energy_half;
  std::vector<std::string> warnings;

  std::size_t size() const { return states.size(); }
  const SpectralField& initial() const { return states.front(); }
  const SpectralField& final_state() const { return states.back(); }
};

namespace detail {

inline void check_invariants(Trajectory& tr, std::size_t idx) {
  const ConservedTriple& ref = tr.invariants.front();
  const ConservedTriple& now = tr.invariants[idx];
  const double tol = tr.config.conservation_tolerance;
  const double t = tr.times[idx];
  struct Item {
    const char* name;
    double now, ref;
  };
  const Item items[] = {{"i1", now.i1, ref.i1},
                        {"i2", now.i2, ref.i2},
                        {"e3", now.e3, ref.e3},
                        {"energy_half", tr.energy_half[idx],
                         tr.energy_half.front()}};
  for (const auto& it : items) {
    if (within_drift(it.now, it.ref, tol)) continue;
    const double drift = relative_drift(it.now, it.ref);
    if (tr.config.conservation_policy == ConservationPolicy::fail)
      throw ConservationError(it.name, t, drift);
    tr.warnings.push_back(std::string("conservation: ") + it.name +
                          " drift " + fmt_g(drift) + " at t=" + fmt_g(t));
  }
}

inline void record(Trajectory& tr, double t, const SpectralField& u) {
  tr.times.push_back(t);
  tr.states.push_back(u);
  tr.invariants.push_back(conserved(u));
  tr.energy_half.push_back(energy_half(u));
}

inline Trajectory integrate(const SpectralField& u0, const SolverConfig& cfg) {
  cfg.validate();
  require_real(u0, "solve");
  if (!u0.all_finite()) throw ValidationError("initial datum is not finite");

  Trajectory tr;
  tr.grid = u0.grid();
  tr.config = cfg;
  SpectralField u = u0;
  u.restore_invariants();
  const bool mz = u.mean_zero();
  record(tr, 0.0, u);

  const double l2_0 = l2_norm(u);
  const long long steps = cfg.step_count();
  Stepper stepper(u.grid(), cfg.dt, cfg);
  for (long long n = 1; n <= steps; ++n) {
    stepper.advance(u.mutable_data());
    u.restore_invariants();
    if (mz) u.set_mean_zero();
    const double t = static_cast<double>(n) * cfg.dt;
    if (!u.all_finite()) throw BlowUpError("non-finite coefficient", t);
    const double l2 = l2_norm(u);
    if (std::abs(l2 - l2_0) > 0.01 * l2_0)
      throw BlowUpError("L2 norm left the 1% band (" + fmt_g(l2) + " vs " +
                            fmt_g(l2_0) + ")",
                        t);
    if (n % cfg.record_every == 0 || n == steps) {
      record(tr, t, u);
      check_invariants(tr, tr.size() - 1);
    }
  }
  return tr;
}

}  // namespace detail

/// Integrates mean-zero real data to config.t_end. Snapshots are taken every
/// record_every steps and at the final step. Invariants are checked at every
/// snapshot against the initial values.
inline Trajectory solve(const SpectralField& u0, const SolverConfig& cfg) {
  if (!u0.mean_zero())
    throw PreconditionError(
        "solve requires mean-zero data; apply mean_zero_reduce first");
  return detail::integrate(u0, cfg);
}

/// Same as solve but accepts data with nonzero mean.
inline Trajectory solve_unreduced(const SpectralField& u0,
                                  const SolverConfig& cfg) {
  return detail::integrate(u0, cfg);
}

/// c = u0^(0)/2pi and v0 = u0 - c.
inline std::pair<double, SpectralField> mean_zero_reduce(
    const SpectralField& u0) {
  require_real(u0, "mean_zero_reduce");
  const double c = u0[0].real() / kTwoPi;
  SpectralField v0 = u0;
  v0.set_mean_zero();
  return {c, v0};
}

/// Compares two constructions of the mean-zero part of the solution from
/// data with mean c:
///   A: solve for u directly and subtract c;
///   B: solve the mean-zero problem for V and set v(x,t) = V(x + c t, t).
/// With u = v + c the equation for v gains the term c v_x, which the
/// translation removes. Returns the largest L2 gap over the snapshots.
inline double galilean_check(const SpectralField& u0, const SolverConfig& cfg) {
  const auto [c, v0] = mean_zero_reduce(u0);
  const Trajectory full = solve_unreduced(u0, cfg);
  const Trajectory reduced = solve(v0, cfg);
  double dev = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    SpectralField va = full.states[i];
    va.set_mean_zero();
    const SpectralField vb = phase_shift(reduced.states[i], -c * full.times[i]);
    dev = std::max(dev, l2_distance(va, vb));
  }
  return dev;
}

/// u_t = -H u_xx + (1/2) d_x (u^2), evaluated without truncation on the
/// doubled grid (exact for band-limited u).
inline SpectralField bo_time_derivative(const SpectralField& u) {
  require_real(u, "bo_time_derivative");
  const GridSpec fine = u.grid().refined(2);
  const SpectralField uf = resample(u, fine);
  SpectralField out = hilbert(second_derivative(uf));
  out *= -1.0;
  SpectralField sq = multiply(uf, uf, fine);
  SpectralField half_d = derivative(sq);
  half_d *= 0.5;
  out += half_d;
  return out;
}

}  // namespace bolab
