#pragma once

// Space-time products, the trilinear form behind the bilinear smoothing
// estimate, its decomposition by modulation size, and the estimate ratio.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "bolab/bilinear/spacetime.hpp"

namespace bolab {

/// Dyadic index k with 2^(k-1) <= |xi| < 2^k.
inline int dyadic_index(long long xi) {
  if (xi == 0) throw PreconditionError("dyadic index of zero frequency");
  return static_cast<int>(std::bit_width(static_cast<unsigned long long>(std::llabs(xi))));
}

inline bool in_dyadic_band(long long xi, int k) {
  return xi != 0 && dyadic_index(xi) == k;
}

/// L1 = |tau1 + xi1^2|, L2 = |tau2 - xi2^2|, L3 = |-(tau1+tau2) - (xi1+xi2)^2|
/// and the dyadic indices m of |xi2| and j of |xi1 + xi2|.
struct ModulationTriple {
  double l1 = 0.0, l2 = 0.0, l3 = 0.0;
  int m = 0, j = 0;

  double bound() const { return std::ldexp(1.0, m + j) / 6.0; }
  double max() const { return std::max(l1, std::max(l2, l3)); }
};

struct ModulationSample {
  long long xi1;
  double tau1;
  long long xi2;
  double tau2;
};

inline ModulationTriple modulation_triple(const ModulationSample& s) {
  const long long xi3 = s.xi1 + s.xi2;
  if (s.xi2 == 0 || xi3 == 0)
    throw PreconditionError("modulation triple needs xi2 != 0 and xi1+xi2 != 0");
  ModulationTriple q;
  const double x1 = static_cast<double>(s.xi1), x2 = static_cast<double>(s.xi2),
               x3 = static_cast<double>(xi3);
  q.l1 = std::abs(s.tau1 + x1 * x1);
  q.l2 = std::abs(s.tau2 - x2 * x2);
  q.l3 = std::abs(-(s.tau1 + s.tau2) - x3 * x3);
  q.m = dyadic_index(s.xi2);
  q.j = dyadic_index(xi3);
  return q;
}

struct ModulationReport {
  std::size_t samples = 0;
  std::size_t identity_violations = 0;
  std::size_t inequality_violations = 0;
  std::size_t violations() const {
    return identity_violations + inequality_violations;
  }
};

/// Checks, for each sample,
///   -(tau1+tau2) - (xi1+xi2)^2 = -(tau1+xi1^2) - (tau2-xi2^2) - 2 xi2 (xi1+xi2)
/// and max{L1, L2, L3} >= 2^(m+j) / 6. Integer-valued samples are evaluated
/// exactly. Real ones use long double with a relative slack of 1e-12.
inline ModulationReport modulation_identity_check(
    const std::vector<ModulationSample>& samples) {
  ModulationReport r;
  for (const auto& s : samples) {
    ++r.samples;
    const ModulationTriple q = modulation_triple(s);
    const long long xi3 = s.xi1 + s.xi2;
    const bool integral = std::nearbyint(s.tau1) == s.tau1 &&
                          std::nearbyint(s.tau2) == s.tau2 &&
                          std::abs(s.tau1) < 1e15 && std::abs(s.tau2) < 1e15;
    if (integral) {
      const __int128 t1 = static_cast<long long>(s.tau1);
      const __int128 t2 = static_cast<long long>(s.tau2);
      const __int128 a = s.xi1, b = s.xi2, c = xi3;
      const __int128 lhs = -(t1 + t2) - c * c;
      const __int128 rhs = -(t1 + a * a) - (t2 - b * b) - 2 * b * c;
      if (lhs != rhs) ++r.identity_violations;
      auto absv = [](__int128 v) { return v < 0 ? -v : v; };
      const __int128 mx =
          std::max(absv(t1 + a * a), std::max(absv(t2 - b * b), absv(lhs)));
      // max >= 2^(m+j)/6  <=>  6 max >= 2^(m+j).
      if (6 * mx < (static_cast<__int128>(1) << (q.m + q.j)))
        ++r.inequality_violations;
      continue;
    }
    using ld = long double;
    const ld t1 = s.tau1, t2 = s.tau2, a = s.xi1, b = s.xi2, c = xi3;
    const ld lhs = -(t1 + t2) - c * c;
    const ld rhs = -(t1 + a * a) - (t2 - b * b) - 2 * b * c;
    const ld scale = std::abs(t1) + std::abs(t2) + a * a + b * b + c * c + 1;
    if (std::abs(lhs - rhs) > 1e-12L * scale) ++r.identity_violations;
    const ld mx = std::max(std::abs(t1 + a * a),
                           std::max(std::abs(t2 - b * b), std::abs(lhs)));
    if (mx < std::ldexp(1.0L, q.m + q.j) / 6 - 1e-12L * scale)
      ++r.inequality_violations;
  }
  return r;
}

namespace detail {

inline long long lattice_shift(double v, double dtau) {
  const double q = v / dtau;
  const double r = std::nearbyint(q);
  if (std::abs(q - r) > 1e-9 * std::max(1.0, std::abs(q)))
    throw DimensionError("lattice mismatch: resonance shift " + fmt_g(v) +
                         " is not a multiple of dtau=" + fmt_g(dtau));
  return static_cast<long long>(r);
}

inline void require_compatible(const SpaceTimeField& a,
                               const SpaceTimeField& b) {
  if (a.m_points() != b.m_points() || a.dtau() != b.dtau())
    throw DimensionError("lattice mismatch: (M, dtau) differ");
}

}  // namespace detail

/// Which part of the modulation partition to keep in the trilinear form.
enum class Region { all, a1, a1c_a3, a1c_a2_a3c };

/// Space-time product h = f g restricted to output frequencies xi3 with
/// keep_out(xi3), on an output lattice with dispersion `out`:
///   h~(xi3, tau3) = (1/4pi^2) sum_{xi1+xi2=xi3} int f~(xi1,tau1) g~(xi2,tau3-tau1) dtau1.
/// The output lattice has M3 = 2M + 2S points, S the largest resonance shift.
template <class Keep>
SpaceTimeField spacetime_product(const SpaceTimeField& f,
                                 const SpaceTimeField& g, Dispersion out,
                                 int xi3_min, int xi3_max, Keep&& keep_out) {
  detail::require_compatible(f, g);
  const int m = f.m_points();
  const double dtau = f.dtau();
  long long smax = 0;
  for (int x3 = xi3_min; x3 <= xi3_max; ++x3) {
    if (!keep_out(x3)) continue;
    for (int x2 = g.xi_min(); x2 <= g.xi_max(); ++x2) {
      const int x1 = x3 - x2;
      if (!f.contains(x1)) continue;
      const double s = omega(out, x3) - omega(f.dispersion(), x1) -
                       omega(g.dispersion(), x2);
      smax = std::max(smax, std::llabs(detail::lattice_shift(s, dtau)));
    }
  }
  const int m3 = 2 * m + 2 * static_cast<int>(smax);
  SpaceTimeField h(xi3_min, xi3_max, m3, dtau, out);
  const double norm = dtau / (4.0 * kPi * kPi);
  for (int x3 = xi3_min; x3 <= xi3_max; ++x3) {
    if (!keep_out(x3)) continue;
    for (int x2 = g.xi_min(); x2 <= g.xi_max(); ++x2) {
      const int x1 = x3 - x2;
      if (!f.contains(x1)) continue;
      const long long s = detail::lattice_shift(
          omega(out, x3) - omega(f.dispersion(), x1) - omega(g.dispersion(), x2),
          dtau);
      const int base = static_cast<int>(s + smax);
      for (int l1 = 0; l1 < m; ++l1) {
        const cplx a = f.at(x1, l1);
        if (a == cplx{}) continue;
        for (int l2 = 0; l2 < m; ++l2) {
          const cplx b = g.at(x2, l2);
          if (b == cplx{}) continue;
          h.at(x3, l1 + l2 + base) += norm * a * b;
        }
      }
    }
  }
  return h;
}

/// Sum over xi1 + xi2 = xi3 and lattice points of
///   V(xi1, lambda1) U(xi2, lambda2) conj(Phi(xi3, lambda3)) dtau^2,
/// with V in X (omega = xi^2), U in X-bar (omega = -xi^2), Phi in X. V is
/// restricted to |xi1| in band k, U to xi2 < 0 in band m, Phi to xi3 > 0 in
/// band j. L1 = |lambda1|, L2 = |lambda2|, L3 = |lambda3|; the region picks
/// terms of the partition 1 = chi_A1 + chi_A1c chi_A3 + chi_A1c chi_A2 chi_A3c
/// with A_i = {L_i >= 2^(m'+j')/6}, m', j' the dyadic indices of the actual
/// |xi2|, |xi3|.
inline cplx trilinear_form(const SpaceTimeField& v, const SpaceTimeField& u,
                           const SpaceTimeField& phi, int k, int m, int j,
                           Region region = Region::all) {
  detail::require_compatible(v, u);
  if (phi.dtau() != v.dtau())
    throw DimensionError("lattice mismatch: Phi has a different dtau");
  if (v.dispersion() != Dispersion::schrodinger_minus ||
      u.dispersion() != Dispersion::schrodinger_plus ||
      phi.dispersion() != Dispersion::schrodinger_minus)
    throw DimensionError("trilinear form expects V, Phi in X and U in X-bar");
  const int mv = v.m_points();
  const double dtau = v.dtau();
  cplx acc = 0.0;
  for (int x3 = std::max(phi.xi_min(), 1); x3 <= phi.xi_max(); ++x3) {
    if (!in_dyadic_band(x3, j)) continue;
    for (int x2 = u.xi_min(); x2 <= std::min(u.xi_max(), -1); ++x2) {
      if (!in_dyadic_band(x2, m)) continue;
      const int x1 = x3 - x2;
      if (!v.contains(x1) || !in_dyadic_band(x1, k)) continue;
      const double thr = std::ldexp(1.0, dyadic_index(x2) + dyadic_index(x3)) / 6.0;
      // lambda3 = lambda1 + lambda2 + 2 xi2 xi3.
      const long long s = detail::lattice_shift(2.0 * x2 * x3, dtau);
      for (int l1 = 0; l1 < mv; ++l1) {
        const cplx a = v.at(x1, l1);
        if (a == cplx{}) continue;
        const double L1 = std::abs(v.lambda(l1));
        for (int l2 = 0; l2 < mv; ++l2) {
          const cplx b = u.at(x2, l2);
          if (b == cplx{}) continue;
          const long long i3 = (l1 - mv / 2) + (l2 - mv / 2) + s;
          const long long l3 = i3 + phi.m_points() / 2;
          if (l3 < 0 || l3 >= phi.m_points()) continue;
          const cplx c = phi.at(x3, static_cast<int>(l3));
          if (c == cplx{}) continue;
          const double L2 = std::abs(u.lambda(l2));
          const double L3 = std::abs(static_cast<double>(i3) * dtau);
          const bool A1 = L1 >= thr, A2 = L2 >= thr, A3 = L3 >= thr;
          bool take = true;
          switch (region) {
            case Region::all:
              break;
            case Region::a1:
              take = A1;
              break;
            case Region::a1c_a3:
              take = !A1 && A3;
              break;
            case Region::a1c_a2_a3c:
              take = !A1 && A2 && !A3;
              break;
          }
          if (take) acc += a * b * std::conj(c);
        }
      }
    }
  }
  return acc * dtau * dtau;
}

struct EstimateTerms {
  double lhs = 0.0;
  double v_norm = 0.0;       // ||V_k||_{X^{0,1/2}}
  double u_sup_l2 = 0.0;     // ||P- U_m||_{L^inf L^2}
  double u_xbar = 0.0;       // ||P- U_m||_{Xbar^{0,1}}
  double rhs = 0.0;
  double ratio = 0.0;
};

/// LHS / RHS of
///   ||P_j P+(V_k P-(U_m))||_{X^{0,-1/2-delta}}
///     <= 2^{(1/6+delta)k - (m+j)/2} ||V_k||_{X^{0,1/2}}
///        (||P-(U_m)||_{L^inf L^2} + 2^{-(m+j)/2} ||P-(U_m)||_{Xbar^{0,1}}).
/// V lives in X, U in X-bar; the band and sign restrictions are applied here.
inline EstimateTerms estimate_terms(const SpaceTimeField& v,
                                    const SpaceTimeField& u, int k, int m,
                                    int j, double delta) {
  if (v.dispersion() != Dispersion::schrodinger_minus ||
      u.dispersion() != Dispersion::schrodinger_plus)
    throw DimensionError("estimate expects V in X and U in X-bar");
  const SpaceTimeField vk =
      v.restricted([k](int xi) { return in_dyadic_band(xi, k); });
  const SpaceTimeField um =
      u.restricted([m](int xi) { return xi < 0 && in_dyadic_band(xi, m); });
  EstimateTerms e;
  e.v_norm = bourgain_norm(vk, 0.0, 0.5);
  e.u_sup_l2 = sup_time_l2(um);
  e.u_xbar = bourgain_norm(um, 0.0, 1.0);
  const double mj = m + j;
  e.rhs = std::exp2((1.0 / 6.0 + delta) * k - mj / 2.0) * e.v_norm *
          (e.u_sup_l2 + std::exp2(-mj / 2.0) * e.u_xbar);
  if (!(e.rhs > 0.0) || !std::isfinite(e.rhs))
    throw UndefinedRatioError("estimate ratio undefined: right-hand side is " +
                              fmt_g(e.rhs));
  const int lo = 1 << (j - 1), hi = (1 << j) - 1;
  const SpaceTimeField prod = spacetime_product(
      vk, um, Dispersion::schrodinger_minus, lo, hi, [](int) { return true; });
  e.lhs = bourgain_norm(prod, 0.0, -0.5 - delta);
  e.ratio = e.lhs / e.rhs;
  return e;
}

inline double estimate_ratio(const SpaceTimeField& v, const SpaceTimeField& u,
                             int k, int m, int j, double delta) {
  return estimate_terms(v, u, k, m, j, delta).ratio;
}

}  // namespace bolab
