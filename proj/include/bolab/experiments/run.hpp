#pragma once

// Experiment pipelines. Each returns CSV tables and a JSON summary; writing
// them is left to the caller.

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "bolab/bilinear/ensemble.hpp"
#include "bolab/experiments/config.hpp"
#include "bolab/experiments/fit.hpp"
#include "bolab/experiments/lemmas.hpp"
#include "bolab/experiments/pool.hpp"
#include "bolab/experiments/records.hpp"

namespace bolab {

struct ExperimentResult {
  std::vector<CsvTable> tables;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, Trajectory>> trajectories;
};

/// Failure of one ensemble cell, tagged with its resolution and seed.
template <class E>
[[noreturn]] void rethrow_tagged(const E& e, int n, std::uint64_t seed) {
  const std::string tag = " [N=" + std::to_string(n) + ", seed=" + std::to_string(seed) + "]";
  if constexpr (std::is_same_v<E, BlowUpError>)
    throw BlowUpError(e.reason(), e.time(), tag);
  else if constexpr (std::is_same_v<E, ConservationError>)
    throw ConservationError(e.invariant(), e.time(), e.drift(), tag);
  else
    throw E(std::string(e.what()) + tag);
}

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) throw PreconditionError("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline std::vector<double> unique_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

struct Cell {
  int n;
  int member;
  std::uint64_t seed;
};

inline std::vector<Cell> cells(const ExperimentConfig& c) {
  std::vector<Cell> out;
  for (int n : c.n_grid)
    for (int i = 0; i < c.ensemble; ++i) out.push_back({n, i, c.member_seed(i)});
  return out;
}

inline SpectralField initial_for(const ExperimentConfig& c, const Cell& cell) {
  DataGenSpec d = c.data_gen;
  d.seed = cell.seed;
  return make_initial(d, GridSpec(cell.n));
}

inline SolverConfig solver_for(const ExperimentConfig& c, int n, double t_end) {
  SolverConfig s = c.solver;
  s.dt = c.dt_for(n);
  s.t_end = t_end;
  s.record_every =
      static_cast<int>(std::max<long long>(1, std::llround(c.snapshot_interval / s.dt)));
  return s;
}

/// Runs fn(cell) for every cell, tagging failures with (N, seed).
template <class Fn>
void run_cells(const std::vector<Cell>& cs, int threads, Fn&& fn) {
  parallel_for(cs.size(), threads, [&](std::size_t i) {
    try {
      fn(i);
    } catch (const BlowUpError& e) {
      rethrow_tagged(e, cs[i].n, cs[i].seed);
    } catch (const ConservationError& e) {
      rethrow_tagged(e, cs[i].n, cs[i].seed);
    } catch (const NumericalError& e) {
      rethrow_tagged(e, cs[i].n, cs[i].seed);
    }
  });
}

inline DiagnosticsSpec diagnostics_for(const ExperimentConfig& c,
                                       std::vector<double> residual = {}) {
  DiagnosticsSpec d;
  std::vector<double> ns = c.norms;
  ns.push_back(c.s);
  d.norms = unique_sorted(ns);
  d.residual_norms = unique_sorted(std::move(residual));
  d.ungauge_s = c.s > 0.5 && c.s <= 1.0 ? c.s : 0.0;
  return d;
}

inline void append_diagnostics(CsvTable& t, const Trajectory& tr,
                               const DiagnosticsSpec& spec, const Cell& cell) {
  const std::vector<std::string> lead{std::to_string(cell.n), std::to_string(cell.seed)};
  for (const auto& d : diagnose(tr, spec)) t.add(diagnostics_row(d, lead, spec));
}

inline double default_t_end(const ExperimentConfig& c) {
  return c.t_end > 0.0 ? c.t_end : 1.0;
}

}  // namespace detail

/// Solves every (N, seed) cell and reports invariant drift.
inline ExperimentResult run_conservation(const ExperimentConfig& cfg, int threads,
                                         bool keep_trajectories = false) {
  cfg.validate();
  const auto cs = detail::cells(cfg);
  const auto spec = detail::diagnostics_for(cfg);
  std::vector<Trajectory> trs(cs.size());
  detail::run_cells(cs, threads, [&](std::size_t i) {
    trs[i] = solve(detail::initial_for(cfg, cs[i]),
                   detail::solver_for(cfg, cs[i].n, detail::default_t_end(cfg)));
  });
  ExperimentResult res;
  CsvTable diag{"diagnostics", diagnostics_header({"n", "seed"}, spec), {}};
  CsvTable drift{"conservation", {"n", "seed", "t", "drift_i2", "drift_e3", "drift_energy_half"}, {}};
  nlohmann::json runs = nlohmann::json::array();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const Trajectory& tr = trs[i];
    detail::append_diagnostics(diag, tr, spec, cs[i]);
    double m2 = 0.0, m3 = 0.0, mh = 0.0;
    for (std::size_t k = 0; k < tr.size(); ++k) {
      const double d2 = relative_drift(tr.invariants[k].i2, tr.invariants[0].i2);
      const double d3 = relative_drift(tr.invariants[k].e3, tr.invariants[0].e3);
      const double dh = relative_drift(tr.energy_half[k], tr.energy_half[0]);
      m2 = std::max(m2, d2);
      m3 = std::max(m3, d3);
      mh = std::max(mh, dh);
      drift.add({std::to_string(cs[i].n), std::to_string(cs[i].seed), fmt_num(tr.times[k]),
                 fmt_num(d2), fmt_num(d3), fmt_num(dh)});
    }
    for (const auto& w : tr.warnings)
      res.warnings.push_back("N=" + std::to_string(cs[i].n) + " seed=" +
                             std::to_string(cs[i].seed) + ": " + w);
    runs.push_back({{"n", cs[i].n}, {"seed", cs[i].seed}, {"max_drift_i2", m2},
                    {"max_drift_e3", m3}, {"max_drift_energy_half", mh},
                    {"snapshots", tr.size()}});
    if (keep_trajectories)
      res.trajectories.emplace_back(
          "trajectory_N" + std::to_string(cs[i].n) + "_seed" + std::to_string(cs[i].seed),
          tr);
  }
  res.tables.push_back(std::move(diag));
  res.tables.push_back(std::move(drift));
  res.summary["runs"] = runs;
  return res;
}

/// Checks the F and w equations at t = 0 for every N, and along the
/// trajectory when t_end > 0.
inline ExperimentResult run_gauge_residual(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  const auto cs = detail::cells(cfg);
  struct Row {
    double t, gauge, ablation, f;
  };
  std::vector<std::vector<Row>> rows(cs.size());
  std::vector<double> r0(cs.size());
  detail::run_cells(cs, threads, [&](std::size_t i) {
    const SpectralField u0 = detail::initial_for(cfg, cs[i]);
    const double k = gauge_constant(u0);
    std::vector<double> times{0.0};
    std::vector<SpectralField> states{u0};
    if (cfg.t_end > 0.0) {
      const Trajectory tr = solve(u0, detail::solver_for(cfg, cs[i].n, cfg.t_end));
      times = tr.times;
      states = tr.states;
      r0[i] = smoothing_residual(tr).front().max_abs();
    }
    for (std::size_t s = 0; s < states.size(); ++s) {
      const auto st = make_gauge_state(states[s], times[s], k);
      const auto ut = bo_time_derivative(st.u);
      rows[i].push_back({times[s], gauged_equation_residual(st, ut),
                         gauged_equation_residual(st, ut, false),
                         f_equation_residual(st.u, ut)});
    }
  });
  ExperimentResult res;
  CsvTable t{"gauge_residual", {"t", "n", "seed", "gauge_residual", "ablation_residual", "f_residual"}, {}};
  nlohmann::json per = nlohmann::json::array();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    double mg = 0.0, mf = 0.0;
    for (const auto& r : rows[i]) {
      t.add({fmt_num(r.t), std::to_string(cs[i].n), std::to_string(cs[i].seed),
             fmt_num(r.gauge), fmt_num(r.ablation), fmt_num(r.f)});
      mg = std::max(mg, r.gauge);
      mf = std::max(mf, r.f);
    }
    per.push_back({{"n", cs[i].n}, {"seed", cs[i].seed},
                   {"gauge_residual_t0", rows[i].front().gauge},
                   {"ablation_residual_t0", rows[i].front().ablation},
                   {"f_residual_t0", rows[i].front().f},
                   {"max_gauge_residual", mg}, {"max_f_residual", mf},
                   {"r0_max_abs", r0[i]}});
  }
  res.tables.push_back(std::move(t));
  res.summary["runs"] = per;
  return res;
}

/// Resolution-scaling surrogate for the smoothing estimate: for every N and
/// seed, sup_t ||r(t)||_{H^{s+a}} over [0, T], then per a the exponent beta(a)
/// of the seed-median against N, compared with a.
inline ExperimentResult run_smoothing(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  const auto cs = detail::cells(cfg);
  std::vector<double> sa;
  for (double a : cfg.a_grid) sa.push_back(cfg.s + a);
  const auto spec = detail::diagnostics_for(cfg, sa);
  struct Out {
    double t_window = 0.0, u0_hs = 0.0;
    std::vector<double> sup_r, w0;
    std::vector<DiagnosticsRecord> diag;
    std::vector<std::string> warnings;
  };
  std::vector<Out> outs(cs.size());
  detail::run_cells(cs, threads, [&](std::size_t i) {
    const SpectralField u0 = detail::initial_for(cfg, cs[i]);
    Out& o = outs[i];
    const double l2 = l2_norm(u0);
    o.t_window = cfg.t_end > 0.0 ? cfg.t_end : std::min(1.0, std::pow(l2, -4.0));
    const Trajectory tr = solve(u0, detail::solver_for(cfg, cs[i].n, o.t_window));
    o.diag = diagnose(tr, spec);
    o.u0_hs = sobolev_norm(u0, cfg.s);
    const SpectralField w0 = gauge_transform(u0);
    for (double a : cfg.a_grid) {
      double mx = 0.0;
      for (const auto& d : o.diag) mx = std::max(mx, d.residual_norms.at(cfg.s + a));
      o.sup_r.push_back(mx);
      o.w0.push_back(sobolev_norm(w0, cfg.s + a));
    }
    o.warnings = tr.warnings;
  });

  ExperimentResult res;
  CsvTable diag{"diagnostics", diagnostics_header({"n", "seed"}, spec), {}};
  CsvTable cells{"smoothing_cells", {"n", "seed", "a", "t_window", "sup_r_hs", "w0_hs", "u0_hs"}, {}};
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::vector<std::string> lead{std::to_string(cs[i].n), std::to_string(cs[i].seed)};
    for (const auto& d : outs[i].diag) diag.add(diagnostics_row(d, lead, spec));
    for (std::size_t ia = 0; ia < cfg.a_grid.size(); ++ia)
      cells.add({lead[0], lead[1], fmt_num(cfg.a_grid[ia]), fmt_num(outs[i].t_window),
                 fmt_num(outs[i].sup_r[ia]), fmt_num(outs[i].w0[ia]), fmt_num(outs[i].u0_hs)});
    for (const auto& w : outs[i].warnings)
      res.warnings.push_back("N=" + lead[0] + " seed=" + lead[1] + ": " + w);
  }
  nlohmann::json per_a = nlohmann::json::array();
  const std::vector<int> ns = [&] {
    std::vector<int> v = cfg.n_grid;
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }();
  for (std::size_t ia = 0; ia < cfg.a_grid.size(); ++ia) {
    std::vector<double> xn, mr, mw;
    for (int n : ns) {
      std::vector<double> r, w;
      for (std::size_t i = 0; i < cs.size(); ++i)
        if (cs[i].n == n) {
          r.push_back(outs[i].sup_r[ia]);
          w.push_back(outs[i].w0[ia]);
        }
      xn.push_back(n);
      mr.push_back(detail::median(r));
      mw.push_back(detail::median(w));
    }
    nlohmann::json e = {{"a", cfg.a_grid[ia]}, {"n", ns}, {"median_sup_r", mr},
                        {"median_w0", mw}};
    if (ns.size() >= 2) {
      const FitResult fr = fit_loglog(xn, mr);
      const FitResult fw = fit_loglog(xn, mw);
      e["beta"] = fr.exponent;
      e["beta_r2"] = fr.r2;
      e["beta_degenerate"] = fr.degenerate;
      e["w0_exponent"] = fw.exponent;
      e["beta_margin"] = cfg.a_grid[ia] - fr.exponent;
    }
    per_a.push_back(e);
  }
  res.tables.push_back(std::move(diag));
  res.tables.push_back(std::move(cells));
  res.summary["s"] = cfg.s;
  res.summary["per_a"] = per_a;
  return res;
}

/// Long runs recording ||u(t)||_{H^s}; gamma is the power-law exponent in
/// <t> over [fit_from * t_end, t_end], reported next to 3(s - 1/2) + eps.
inline ExperimentResult run_growth(const ExperimentConfig& cfg, int threads,
                                   double eps = 0.01) {
  cfg.validate();
  const auto cs = detail::cells(cfg);
  const auto spec = detail::diagnostics_for(cfg);
  const double t_end = detail::default_t_end(cfg);
  std::vector<Trajectory> trs(cs.size());
  std::vector<std::vector<DiagnosticsRecord>> diags(cs.size());
  detail::run_cells(cs, threads, [&](std::size_t i) {
    trs[i] = solve(detail::initial_for(cfg, cs[i]), detail::solver_for(cfg, cs[i].n, t_end));
    diags[i] = diagnose(trs[i], spec);
  });
  ExperimentResult res;
  CsvTable diag{"diagnostics", diagnostics_header({"n", "seed"}, spec), {}};
  nlohmann::json runs = nlohmann::json::array();
  std::vector<double> gammas;
  const double t0 = cfg.fit_from * t_end;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::vector<std::string> lead{std::to_string(cs[i].n), std::to_string(cs[i].seed)};
    std::vector<double> ts, vs;
    for (const auto& d : diags[i]) {
      diag.add(diagnostics_row(d, lead, spec));
      if (d.t >= t0 - 1e-12) {
        ts.push_back(d.t);
        vs.push_back(d.hs_norms.at(cfg.s));
      }
    }
    const FitResult f = fit_power_law(ts, vs);
    gammas.push_back(f.exponent);
    runs.push_back({{"n", cs[i].n}, {"seed", cs[i].seed}, {"gamma", f.exponent},
                    {"r2", f.r2}, {"degenerate", f.degenerate}, {"fit_points", ts.size()},
                    {"hs_initial", diags[i].front().hs_norms.at(cfg.s)},
                    {"hs_final", diags[i].back().hs_norms.at(cfg.s)}});
    for (const auto& w : trs[i].warnings)
      res.warnings.push_back("N=" + lead[0] + " seed=" + lead[1] + ": " + w);
  }
  res.tables.push_back(std::move(diag));
  res.summary["s"] = cfg.s;
  res.summary["epsilon"] = eps;
  res.summary["bound_exponent"] = 3.0 * (cfg.s - 0.5) + eps;
  res.summary["fit_window"] = {t0, t_end};
  res.summary["runs"] = runs;
  res.summary["gamma_max"] = *std::max_element(gammas.begin(), gammas.end());
  res.summary["gamma_median"] = detail::median(gammas);
  return res;
}

/// Ensemble sweep of the bilinear estimate ratio over (m, j) pairs, k and
/// seeds. For each pair the summary regresses log(max ratio) on k over the k
/// with a nonzero maximum; bands whose maximum is exactly zero are listed as
/// vanishing.
inline ExperimentResult run_bilinear(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  const auto& b = cfg.bilinear;
  EnsembleSpec es;
  es.m_points = b.m_points;
  es.T = b.window_t;
  es.lambda_max = b.lambda_max;
  es.q_max = b.q_max;
  struct Job {
    int m, j, k, seed;
  };
  std::vector<Job> jobs;
  for (auto [m, j] : b.pairs)
    for (int k : b.k_grid)
      for (int s = 0; s < cfg.ensemble; ++s) jobs.push_back({m, j, k, s});
  struct Out {
    EstimateTerms random, adversarial;
  };
  std::vector<Out> outs(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const Job& q = jobs[i];
    auto rng = cell_rng(cfg.seed, q.k, q.m, q.j, q.seed);
    const auto v = random_v(q.k, es, rng);
    const auto u = random_u(q.m, es, rng);
    outs[i].random = estimate_terms(v, u, q.k, q.m, q.j, b.delta);
    if (b.adversarial) {
      const auto ua = random_u(q.m, es, rng, true);
      outs[i].adversarial = estimate_terms(v, ua, q.k, q.m, q.j, b.delta);
    }
  });
  ExperimentResult res;
  CsvTable t{"bilinear",
             {"k", "m", "j", "seed", "ratio", "lhs", "rhs", "adversarial_ratio"},
             {}};
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& q = jobs[i];
    t.add({std::to_string(q.k), std::to_string(q.m), std::to_string(q.j),
           std::to_string(q.seed), fmt_num(outs[i].random.ratio), fmt_num(outs[i].random.lhs),
           fmt_num(outs[i].random.rhs),
           b.adversarial ? fmt_num(outs[i].adversarial.ratio) : std::string("nan")});
  }
  nlohmann::json pairs = nlohmann::json::array();
  for (auto [m, j] : b.pairs) {
    std::vector<double> ks, mx, mxa, kfit, lfit;
    std::vector<int> vanishing;
    for (int k : b.k_grid) {
      double r = 0.0, ra = 0.0;
      for (std::size_t i = 0; i < jobs.size(); ++i)
        if (jobs[i].m == m && jobs[i].j == j && jobs[i].k == k) {
          r = std::max(r, outs[i].random.ratio);
          ra = std::max(ra, outs[i].adversarial.ratio);
        }
      ks.push_back(k);
      mx.push_back(r);
      mxa.push_back(ra);
      if (r > 0.0) {
        kfit.push_back(k);
        lfit.push_back(std::log(r));
      } else {
        vanishing.push_back(k);
      }
    }
    nlohmann::json e = {{"m", m}, {"j", j}, {"k", ks}, {"max_ratio", mx},
                        {"max_adversarial_ratio", mxa}, {"vanishing_k", vanishing},
                        {"fit_k", kfit}};
    if (kfit.size() >= 2) {
      const FitResult f = linear_fit(kfit, lfit);
      e["slope"] = f.exponent;
      e["slope_degenerate"] = f.degenerate;
    } else {
      e["slope"] = 0.0;
      e["slope_degenerate"] = true;
    }
    pairs.push_back(e);
  }
  res.tables.push_back(std::move(t));
  res.summary["delta"] = b.delta;
  res.summary["seeds"] = cfg.ensemble;
  res.summary["pairs"] = pairs;
  return res;
}

/// Norms of the initial data of every cell, including the dyadic split at
/// M = N/8.
inline ExperimentResult run_norms(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  const auto cs = detail::cells(cfg);
  const auto spec = detail::diagnostics_for(cfg);
  std::vector<std::vector<std::vector<std::string>>> rows(cs.size());
  detail::run_cells(cs, threads, [&](std::size_t i) {
    const SpectralField u0 = detail::initial_for(cfg, cs[i]);
    const SpectralField w0 = gauge_transform(u0);
    const int m = std::max(1, cs[i].n / 8);
    for (double s : spec.norms) {
      const DyadicSplit d = dyadic_split_norm(u0, s, m);
      rows[i].push_back({std::to_string(cs[i].n), std::to_string(cs[i].seed), fmt_num(s),
                         fmt_num(sobolev_norm(u0, s)), fmt_num(sobolev_norm(w0, s)),
                         std::to_string(m), fmt_num(d.low), fmt_num(d.high),
                         fmt_num(d.bound)});
    }
  });
  ExperimentResult res;
  CsvTable t{"norms", {"n", "seed", "s", "u_hs", "w_hs", "split_m", "low", "high", "low_bound"}, {}};
  for (auto& r : rows)
    for (auto& row : r) t.add(std::move(row));
  res.tables.push_back(std::move(t));
  res.summary["cells"] = cs.size();
  return res;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads) {
  switch (cfg.kind) {
    case ExperimentKind::smoothing:
      return run_smoothing(cfg, threads);
    case ExperimentKind::growth:
      return run_growth(cfg, threads);
    case ExperimentKind::conservation:
      return run_conservation(cfg, threads);
    case ExperimentKind::gauge_residual:
      return run_gauge_residual(cfg, threads);
    case ExperimentKind::bilinear:
      break;
  }
  return run_bilinear(cfg, threads);
}

}  // namespace bolab
