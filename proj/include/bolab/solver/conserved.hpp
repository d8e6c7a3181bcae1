#pragma once

#include <cmath>

#include "bolab/spectral/norms.hpp"
#include "bolab/spectral/operators.hpp"

namespace bolab {

/// The three classical invariants: int u, int u^2, int (u H u_x - u^3/3).
struct ConservedTriple {
  double i1 = 0.0;
  double i2 = 0.0;
  double e3 = 0.0;
};

inline void require_real(const SpectralField& u, const char* who) {
  if (!u.is_real())
    throw PreconditionError(std::string(who) + " requires a real-valued field");
}

/// e3 is evaluated by collocation of u * H u_x - u^3/3 on the 2x grid, which
/// is exact for band-limited u.
inline ConservedTriple conserved(const SpectralField& u) {
  require_real(u, "conserved");
  ConservedTriple q;
  q.i1 = u[0].real();
  q.i2 = sobolev_norm(u, 0.0);
  q.i2 *= q.i2;

  const GridSpec fine = u.grid().refined(2);
  const auto us = synthesize(resample(u, fine));
  const auto hs = synthesize(resample(hilbert(derivative(u)), fine));
  double acc = 0.0;
  for (std::size_t n = 0; n < us.size(); ++n)
    acc += us[n] * hs[n] - us[n] * us[n] * us[n] / 3.0;
  q.e3 = acc * kTwoPi / static_cast<double>(us.size());
  return q;
}

/// ||u||^2_{dot H^{1/2}} - (1/3) int u^3, the H^{1/2}-level invariant.
/// Computed through Parseval, independently of conserved().e3.
inline double energy_half(const SpectralField& u) {
  require_real(u, "energy_half");
  return homogeneous_sobolev_sq(u, 0.5) - cubic_integral(u) / 3.0;
}

/// |now - ref| <= tol*|ref| + 1e-12.
inline bool within_drift(double now, double ref, double tol) {
  return std::abs(now - ref) <= tol * std::abs(ref) + 1e-12;
}

inline double relative_drift(double now, double ref) {
  const double d = std::abs(now - ref);
  return std::abs(ref) > 0.0 ? d / std::abs(ref) : d;
}

}  // namespace bolab
