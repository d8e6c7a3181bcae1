// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "bolab/bilinear/trilinear.hpp"
#include "bolab/experiments/run.hpp"

using namespace bolab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

SpectralField cosine(const GridSpec& g, int k = 1) {
  SpectralField f(g);
  f.set(k, cplx(kPi, 0.0));
  return f;
}

SpectralField sampled(const GridSpec& g, const std::function<double(double)>& fn) {
  std::vector<double> x(g.n_modes());
  for (int i = 0; i < g.n_modes(); ++i) x[i] = fn(kTwoPi * i / g.n_modes());
  return analyze(std::span<const double>(x), g);
}

SpectralField random_field(const GridSpec& g, unsigned seed, int band) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  SpectralField f(g);
  for (int xi = 1; xi <= band; ++xi) {
    const double re = n(rng);
    f.set(xi, cplx(re, n(rng)) / (1.0 + 0.05 * xi * xi));
  }
  return f;
}

// Serialized outputs of every experiment run here, keyed by config name, for
// the determinism criterion.
std::map<std::string, nlohmann::json> g_configs;
std::map<std::string, std::string> g_outputs;

std::string serialize(const ExperimentResult& r) {
  std::string s;
  for (const auto& t : r.tables) s += "#" + t.name + "\n" + t.str();
  return s + r.summary.dump();
}

ExperimentResult run_named(const std::string& name, const nlohmann::json& j) {
  const ExperimentConfig cfg = parse_experiment_config(j);
  ExperimentResult r = run_experiment(cfg, default_threads());
  g_configs[name] = j;
  g_outputs[name] = serialize(r);
  return r;
}

Outcome operator_algebra() {
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec g(64);
  double e = 0.0;
  auto upd = [&e](double v) { e = std::max(e, v); };
  upd(max_coeff_distance(hilbert(cosine(g)), sampled(g, [](double x) { return std::sin(x); })));
  upd(max_coeff_distance(hilbert(sampled(g, [](double x) { return std::cos(3 * x) + 0.5 * std::sin(7 * x); })),
                         sampled(g, [](double x) { return std::sin(3 * x) - 0.5 * std::cos(7 * x); })));
  SpectralField c(g);
  c.set(0, cplx(kTwoPi * 2.5, 0.0));
  upd(hilbert(c).max_abs());
  for (unsigned seed : {1u, 2u, 3u}) {
    const SpectralField u = random_field(g, seed, g.max_mode());
    SpectralField hh = hilbert(hilbert(u));
    hh += u;
    upd(hh.max_abs() / u.max_abs());
    SpectralField p = project(u, Projection::plus);
    p += project(u, Projection::minus);
    p += project(u, Projection::zero);
    upd(max_coeff_distance(p, u) / u.max_abs());
    upd(max_coeff_distance(derivative(antiderivative(u)), u) / u.max_abs());
    SpectralField lp = project(u, Projection::zero);
    for (int k = 1; (1 << (k - 1)) <= g.max_mode(); ++k) lp += lp_block(u, k);
    upd(max_coeff_distance(lp, u) / u.max_abs());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {e <= 1e-12 && secs < 1.0, "max error " + sci(e) + " (tol 1e-12), " + fmt("%.3f s", secs) + " (limit 1 s)"};
}

Outcome linear_exactness() {
  const GridSpec g(64);
  const SpectralField u = random_field(g, 7, g.max_mode());
  double e = 0.0;
  for (Integrator in : {Integrator::ifrk4, Integrator::etdrk4})
    for (double dt : {0.1, 0.05, 0.0123, 1e-3, 1e-5}) {
      SolverConfig c;
      c.nonlinear = false;
      c.integrator = in;
      c.dt = dt;
      const SpectralField s = step(u, dt, c);
      e = std::max(e, max_coeff_distance(s, semigroup_bo(u, dt)) / u.max_abs());
      // u^(xi, t) = exp(-i xi |xi| t) u^(xi, 0)
      SpectralField o(g);
      for (int xi = 0; xi <= g.max_mode(); ++xi)
        o.set(xi, u[xi] * std::polar(1.0, -double(xi) * xi * dt));
      e = std::max(e, max_coeff_distance(s, o) / u.max_abs());
    }
  return {e <= 1e-13, "max error " + sci(e) + " over IFRK4/ETDRK4, dt in [1e-5, 0.1] (tol 1e-13)"};
}

Outcome conservation() {
  const auto t0 = std::chrono::steady_clock::now();
  SolverConfig c;
  c.dt = 1e-3;
  c.t_end = 10.0;
  c.record_every = 100;
  c.conservation_tolerance = 1e-6;
  const GridSpec g(256);
  const Trajectory tr = solve(cosine(g), c);
  // int u^2 by quadrature on a grid fine enough to hold u^2 exactly.
  auto quad_l2 = [](const SpectralField& u) {
    const auto x = synthesize(resample(u, u.grid().refined(2)));
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc * kTwoPi / double(x.size());
  };
  const double q0 = quad_l2(tr.initial());
  double di2 = 0, de3 = 0, deh = 0, dq = 0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    di2 = std::max(di2, relative_drift(tr.invariants[i].i2, tr.invariants[0].i2));
    de3 = std::max(de3, relative_drift(tr.invariants[i].e3, tr.invariants[0].e3));
    deh = std::max(deh, relative_drift(tr.energy_half[i], tr.energy_half[0]));
    dq = std::max(dq, relative_drift(quad_l2(tr.states[i]), q0));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double worst = std::max({di2, de3, deh, dq});
  return {worst < 1e-6 && tr.times.back() == 10.0 && secs < 60.0,
          "drift i2 " + sci(di2) + ", e3 " + sci(de3) + ", H^1/2 functional " + sci(deh) +
              ", quadrature i2 " + sci(dq) + " (tol 1e-6), " + fmt("%.1f s", secs)};
}

Outcome gauge_algebra() {
  nlohmann::json j = {{"kind", "gauge_residual"},
                      {"n_grid", {256, 512}},
                      {"data_gen", {{"kind", "single_mode"}, {"mode", 1}, {"amplitude", 1.0}}}};
  const ExperimentResult r = run_named("gauge_residual", j);
  const auto& runs = r.summary["runs"];
  const double g256 = runs[0]["gauge_residual_t0"].get<double>();
  const double g512 = runs[1]["gauge_residual_t0"].get<double>();
  const double f256 = runs[0]["f_residual_t0"].get<double>();
  double r0 = 0.0;
  for (const auto& run : runs) r0 = std::max(r0, run["r0_max_abs"].get<double>());
  // Direct evaluation, independent of the experiment driver.
  const SpectralField u = cosine(GridSpec(256));
  const double direct =
      gauged_equation_residual(make_gauge_state(u, 0.0, gauge_constant(u)), bo_time_derivative(u));
  const double decrease = g256 / g512;
  const bool pass = decrease >= 1e2 && f256 < 1e-8 && r0 == 0.0 && direct == g256;
  return {pass, "w-equation residual N=256 " + sci(g256) + ", N=512 " + sci(g512) +
                    ", decrease " + fmt("%.3g", decrease) + " (need >= 1e2); f residual " +
                    sci(f256) + " (tol 1e-8); max |r(0)| " + sci(r0)};
}

Outcome modulation() {
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<long long> xi(-4096, 4096);
  std::uniform_int_distribution<long long> tau(-50000000, 50000000);
  std::uniform_real_distribution<double> rtau(-5e7, 5e7);
  std::vector<ModulationSample> ints, reals;
  while (ints.size() < 100000) {
    const long long a = xi(rng), b = xi(rng);
    if (b == 0 || a + b == 0) continue;
    ints.push_back({a, double(tau(rng)), b, double(tau(rng))});
  }
  while (reals.size() < 100000) {
    const long long a = xi(rng), b = xi(rng);
    if (b == 0 || a + b == 0) continue;
    reals.push_back({a, rtau(rng), b, rtau(rng)});
  }
  const auto ri = modulation_identity_check(ints);
  const auto rr = modulation_identity_check(reals);

  std::normal_distribution<double> n(0.0, 1.0);
  auto fill = [&](SpaceTimeField f) {
    for (int x = f.xi_min(); x <= f.xi_max(); ++x)
      for (int l = 0; l < f.m_points(); ++l) {
        const double re = n(rng);
        f.at(x, l) = cplx(re, n(rng));
      }
    return f;
  };
  double part = 0.0;
  for (auto [k, m, jj] : {std::array{3, 3, 2}, std::array{4, 2, 3}, std::array{2, 3, 3}}) {
    const int top = 1 << std::max({k, m, jj});
    const auto v = fill(SpaceTimeField(-top, top, 32, 1.0, Dispersion::schrodinger_minus));
    const auto w = fill(SpaceTimeField(-top, -1, 32, 1.0, Dispersion::schrodinger_plus));
    const auto p = fill(SpaceTimeField(1, top, 512, 1.0, Dispersion::schrodinger_minus));
    const cplx all = trilinear_form(v, w, p, k, m, jj);
    const cplx sum = trilinear_form(v, w, p, k, m, jj, Region::a1) +
                     trilinear_form(v, w, p, k, m, jj, Region::a1c_a3) +
                     trilinear_form(v, w, p, k, m, jj, Region::a1c_a2_a3c);
    part = std::max(part, std::abs(all - sum) / std::abs(all));
  }
  const std::size_t viol = ri.violations() + rr.violations();
  return {viol == 0 && part <= 1e-12,
          std::to_string(ri.samples + rr.samples) + " samples, " + std::to_string(viol) +
              " violations; partition relative error " + sci(part) + " (tol 1e-12)"};
}

Outcome bilinear_trend() {
  const auto t0 = std::chrono::steady_clock::now();
  nlohmann::json j = {{"kind", "bilinear"},
                      {"ensemble", 16},
                      {"seed", 4000},
                      {"bilinear",
                       {{"pairs", {{3, 3}, {4, 2}}},
                        {"k_grid", {4, 5, 6, 7, 8, 9}},
                        {"delta", 0.01},
                        {"m_points", 256},
                        {"window_t", kPi / 2.0},
                        {"lambda_max", 32.0},
                        {"q_max", 4},
                        {"adversarial", true}}}};
  const ExperimentResult r = run_named("bilinear", j);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool pass = secs < 600.0;
  std::string d;
  for (const auto& p : r.summary["pairs"]) {
    const double slope = p["slope"].get<double>();
    pass = pass && slope <= 0.05;
    double mx = 0.0;
    for (const auto& v : p["max_ratio"]) mx = std::max(mx, v.get<double>());
    d += "(m,j)=(" + std::to_string(p["m"].get<int>()) + "," + std::to_string(p["j"].get<int>()) +
         ") slope " + fmt("%.3f", slope) + (p["slope_degenerate"].get<bool>() ? " [single nonzero k]" : "") +
         " max ratio " + sci(mx) + " vanishing k " + p["vanishing_k"].dump() + "; ";
  }
  return {pass, d + "limit 0.05, " + fmt("%.1f s", secs)};
}

Outcome smoothing() {
  const auto t0 = std::chrono::steady_clock::now();
  nlohmann::json j = {
      {"kind", "smoothing"},
      {"s", 0.55},
      {"a_grid", {0.1, 0.2, 0.3}},
      {"n_grid", {128, 256, 512, 1024}},
      {"ensemble", 8},
      {"seed", 1000},
      {"snapshot_interval", 0.05},
      {"norms", {0.0, 0.5}},
      {"solver",
       {{"dt", 1e-3}, {"dt_rule", "inverse_square"}, {"dt_reference_n", 256},
        {"conservation_tolerance", 1e-4}, {"conservation_policy", "warn"}}},
      {"data_gen", {{"kind", "random_sobolev"}, {"target_norm", 1.0}, {"delta", 0.01}}}};
  const ExperimentResult r = run_named("smoothing", j);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool pass = secs < 1800.0;
  std::string d;
  for (const auto& p : r.summary["per_a"]) {
    const double a = p["a"].get<double>(), beta = p["beta"].get<double>();
    pass = pass && std::isfinite(beta) && beta <= a - 0.05;
    d += "a=" + fmt("%g", a) + " beta " + fmt("%.3f", beta) + " (limit " + fmt("%.2f", a - 0.05) + "); ";
  }
  return {pass, d + fmt("%.1f s", secs)};
}

Outcome growth() {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = [](double s, int seed) {
    return nlohmann::json{
        {"kind", "growth"},
        {"s", s},
        {"n_grid", {256}},
        {"ensemble", 4},
        {"seed", seed},
        {"t_end", 50.0},
        {"snapshot_interval", 0.5},
        {"fit_from", 0.1},
        {"norms", {0.0, 0.5}},
        {"solver", {{"dt", 1e-3}, {"conservation_tolerance", 1e-4}, {"conservation_policy", "warn"}}},
        {"data_gen", {{"kind", "random_sobolev"}, {"target_norm", 1.0}, {"delta", 0.01}}}};
  };
  const double eps = 0.01;
  const ExperimentResult r1 = run_named("growth_s1", cfg(1.0, 2000));
  const ExperimentResult r2 = run_named("growth_s055", cfg(0.55, 3000));
  const double g1 = r1.summary["gamma_max"].get<double>();
  const double g2 = r2.summary["gamma_max"].get<double>();
  const double lim1 = 1.5 + eps + 0.1, lim2 = 0.25;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {g1 <= lim1 && g2 <= lim2 && secs < 3600.0,
          "s=1 gamma " + sci(g1) + " (limit " + fmt("%.2f", lim1) + "); s=0.55 gamma " + sci(g2) +
              " (limit 0.25); " + fmt("%.1f s", secs)};
}

Outcome galilean() {
  const GridSpec g(256);
  SpectralField u = cosine(g);
  u.set(0, cplx(kTwoPi, 0.0));
  SolverConfig c;
  c.dt = 1e-3;
  c.t_end = 2.0;
  c.record_every = 50;
  const double dev = galilean_check(u, c);
  return {dev < 1e-9, "max deviation " + sci(dev) + " over t in [0, 2] (tol 1e-9)"};
}

Outcome partial_sums() {
  double worst = 0.0, naive = 0.0;
  std::string at;
  for (double a : {-0.5, 0.0, 1.0, 2.0})
    for (std::int64_t n = 10; n <= 1000000; n *= 10) {
      const PartialSum p = partial_sum_check(a, n);
      if (p.constant > worst) {
        worst = p.constant;
        at = "alpha=" + fmt("%g", a) + " N=" + std::to_string(n);
      }
      if (n <= 10000) {
        double s = 0.0;
        for (std::int64_t k = 1; k <= n; ++k) s += std::pow(double(k), a);
        naive = std::max(naive, std::abs(s - p.sum) / p.sum);
      }
    }
  return {worst <= 3.0 && naive < 1e-12,
          "worst |error|/N^max(0,alpha) " + fmt("%.4f", worst) + " at " + at +
              " (limit 3); direct-sum cross-check " + sci(naive)};
}

Outcome determinism() {
  std::string d;
  bool pass = !g_outputs.empty();
  for (const auto& [name, j] : g_configs) {
    const ExperimentResult again = run_experiment(parse_experiment_config(j), 1);
    const bool same = serialize(again) == g_outputs[name];
    pass = pass && same;
    d += name + (same ? " identical; " : " DIFFERS; ");
  }
  return {pass, d + "second runs single-threaded"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"operator_algebra", operator_algebra},
      {"linear_exactness", linear_exactness},
      {"conservation", conservation},
      {"gauge_algebra", gauge_algebra},
      {"modulation_inequality", modulation},
      {"bilinear_k_trend", bilinear_trend},
      {"smoothing_scaling", smoothing},
      {"growth_bound", growth},
      {"galilean_reduction", galilean},
      {"partial_sum_bound", partial_sums},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s [%.1f s]: %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
