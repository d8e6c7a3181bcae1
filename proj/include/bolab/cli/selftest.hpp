#pragma once

// Quick invariant suite behind `bolab selftest`.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bolab/bilinear/trilinear.hpp"
#include "bolab/experiments/lemmas.hpp"
#include "bolab/gauge/gauge.hpp"

namespace bolab {

struct SelfTestResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline SpectralField selftest_field(const GridSpec& g, unsigned seed, int band) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  SpectralField f(g);
  for (int xi = 1; xi <= band; ++xi) {
    const double re = n(rng);
    f.set(xi, cplx(re, n(rng)) / (1.0 + 0.1 * xi * xi));
  }
  return f;
}

}  // namespace detail

inline std::vector<SelfTestResult> run_selftest() {
  std::vector<SelfTestResult> out;
  auto check = [&out](const std::string& name, const std::function<double()>& err, double tol) {
    SelfTestResult r{name, false, ""};
    try {
      const double e = err();
      r.pass = std::isfinite(e) && e <= tol;
      r.detail = "error " + fmt_g(e) + " (tol " + fmt_g(tol) + ")";
    } catch (const std::exception& ex) {
      r.detail = std::string("exception: ") + ex.what();
    }
    out.push_back(r);
  };
  const GridSpec g(64);
  const SpectralField u = detail::selftest_field(g, 1, 20);

  check("hilbert_squared", [&] {
    SpectralField h = hilbert(hilbert(u));
    h += u;
    return h.max_abs();
  }, 1e-12);
  check("projection_partition", [&] {
    SpectralField p = project(u, Projection::plus);
    p += project(u, Projection::minus);
    p += project(u, Projection::zero);
    return max_coeff_distance(p, u);
  }, 1e-12);
  check("littlewood_paley_partition", [&] {
    SpectralField acc = project(u, Projection::zero);
    for (int k = 1; k <= 6; ++k) acc += lp_block(u, k);
    return max_coeff_distance(acc, u);
  }, 1e-12);
  check("derivative_inverse", [&] {
    return max_coeff_distance(derivative(antiderivative(u)), u);
  }, 1e-12);
  check("linear_step_exact", [&] {
    SolverConfig c;
    c.nonlinear = false;
    c.dt = 0.1;
    return max_coeff_distance(step(u, c.dt, c), semigroup_bo(u, c.dt));
  }, 1e-13);
  check("conservation_short_run", [&] {
    SolverConfig c;
    c.dt = 1e-3;
    c.t_end = 1.0;
    c.record_every = 100;
    SpectralField v(g);
    v.set(1, cplx(kPi, 0.0));
    const Trajectory tr = solve(v, c);
    return relative_drift(tr.invariants.back().e3, tr.invariants.front().e3);
  }, 1e-8);
  check("gauge_f_equation", [&] {
    SpectralField v = 0.5 * u;
    return f_equation_residual(v, bo_time_derivative(v));
  }, 1e-9);
  check("modulation_inequality", [&] {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<long long> xi(-1000, 1000);
    std::uniform_int_distribution<long long> tau(-2000000, 2000000);
    std::vector<ModulationSample> s;
    while (s.size() < 10000) {
      const long long a = xi(rng), b = xi(rng);
      if (b == 0 || a + b == 0) continue;
      s.push_back({a, double(tau(rng)), b, double(tau(rng))});
    }
    return double(modulation_identity_check(s).violations());
  }, 0.0);
  check("trilinear_partition", [&] {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    auto fill = [&](SpaceTimeField f) {
      for (int x = f.xi_min(); x <= f.xi_max(); ++x)
        for (int l = 0; l < f.m_points(); ++l) {
          const double re = n(rng);
          f.at(x, l) = cplx(re, n(rng));
        }
      return f;
    };
    const auto v = fill(SpaceTimeField(-7, 7, 16, 1.0, Dispersion::schrodinger_minus));
    const auto w = fill(SpaceTimeField(-7, -1, 16, 1.0, Dispersion::schrodinger_plus));
    const auto p = fill(SpaceTimeField(1, 7, 128, 1.0, Dispersion::schrodinger_minus));
    const cplx all = trilinear_form(v, w, p, 3, 3, 2);
    const cplx parts = trilinear_form(v, w, p, 3, 3, 2, Region::a1) +
                       trilinear_form(v, w, p, 3, 3, 2, Region::a1c_a3) +
                       trilinear_form(v, w, p, 3, 3, 2, Region::a1c_a2_a3c);
    return std::abs(all - parts) / std::abs(all);
  }, 1e-12);
  check("partial_sum", [&] {
    double worst = 0.0;
    for (double a : {-0.5, 0.0, 1.0, 2.0})
      worst = std::max(worst, partial_sum_check(a, 100000).constant);
    return worst;
  }, 3.0);
  check("dyadic_split_pythagoras", [&] {
    const DyadicSplit d = dyadic_split_norm(u, 0.75, 8);
    const double t = sobolev_norm(u, 0.75);
    return std::abs(d.low * d.low + d.high * d.high - t * t) / (t * t);
  }, 1e-12);
  return out;
}

}  // namespace bolab
