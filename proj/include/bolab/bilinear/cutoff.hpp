#pragma once

#include <cmath>

namespace bolab {

/// psi(x) = exp(-1/x) for x > 0, else 0.
inline double smooth_step_kernel(double x) {
  return x > 0.0 ? std::exp(-1.0 / x) : 0.0;
}

/// Smooth cutoff with eta = 1 on [-1, 1], eta = 0 outside (-2, 2):
///   eta(t) = psi(2 - |t|) / (psi(2 - |t|) + psi(|t| - 1)).
/// C-infinity, even, with values in [0, 1].
inline double cutoff_eta(double t) {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double p = smooth_step_kernel(2.0 - a);
  return p / (p + smooth_step_kernel(a - 1.0));
}

/// eta_T(t) = eta(t / T).
inline double cutoff_eta_T(double t, double T) { return cutoff_eta(t / T); }

/// Reflection map of the extension operator: t on [0, T], 2T - t on
/// [T, 2T], 0 elsewhere.
inline double reflection_mu(double t, double T) {
  if (t >= 0.0 && t <= T) return t;
  if (t > T && t <= 2.0 * T) return 2.0 * T - t;
  return 0.0;
}

}  // namespace bolab
