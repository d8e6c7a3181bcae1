#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <random>
#include <vector>

#include "bolab/experiments/run.hpp"
#include "helpers.hpp"

using namespace bolab;

namespace {

// Ordinary least squares slope, written out independently of linear_fit.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string table_text(const ExperimentResult& r, const std::string& name) {
  for (const auto& t : r.tables)
    if (t.name == name) return t.str();
  ADD_FAILURE() << "no table " << name;
  return {};
}

ExperimentConfig small_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  c.n_grid = {64};
  c.ensemble = 2;
  c.seed = 11;
  c.t_end = 0.2;
  c.snapshot_interval = 0.05;
  c.norms = {0.0, 0.5};
  c.solver.dt = 1e-3;
  c.solver.conservation_policy = ConservationPolicy::warn;
  c.data_gen.kind = DataKind::random_sobolev;
  return c;
}

}  // namespace

TEST(DataGen, Deterministic) {
  const GridSpec g(128);
  DataGenSpec s;
  s.seed = 42;
  const SpectralField a = gen_random_sobolev(s, g);
  const SpectralField b = gen_random_sobolev(s, g);
  EXPECT_EQ(max_coeff_distance(a, b), 0.0);
  s.seed = 43;
  EXPECT_GT(max_coeff_distance(a, gen_random_sobolev(s, g)), 0.0);
}

TEST(DataGen, RescaledToTarget) {
  const GridSpec g(256);
  DataGenSpec s;
  s.s_target = 0.55;
  s.target_norm = 0.7;
  s.seed = 5;
  const SpectralField u = gen_random_sobolev(s, g);
  EXPECT_NEAR(sobolev_norm(u, 0.55), 0.7, 1e-10);
  EXPECT_EQ(u[0], cplx(0.0, 0.0));
  for (int xi = 256 / 4 + 1; xi <= g.max_mode(); ++xi) EXPECT_EQ(u[xi], cplx(0.0, 0.0));
}

TEST(DataGen, SpectralSlope) {
  const GridSpec g(512);
  DataGenSpec s;
  s.s_target = 0.75;
  s.delta = 0.01;
  s.target_norm = 0.0;
  const int top = 512 / 4;
  std::vector<double> mean(top + 1, 0.0);
  const int seeds = 32;
  for (int k = 0; k < seeds; ++k) {
    s.seed = 100 + k;
    const SpectralField u = gen_random_sobolev(s, g);
    for (int xi = 1; xi <= top; ++xi) mean[xi] += std::log(std::abs(u[xi])) / seeds;
  }
  std::vector<double> x, y;
  for (int xi = 1; xi <= top; ++xi) {
    x.push_back(0.5 * std::log(1.0 + double(xi) * xi));
    y.push_back(mean[xi]);
  }
  EXPECT_NEAR(ols_slope(x, y), -(0.75 + 0.5 + 0.01), 0.1);
}

TEST(DataGen, SingleModeIsCosine) {
  const GridSpec g(64);
  DataGenSpec s;
  s.kind = DataKind::single_mode;
  s.mode = 3;
  s.amplitude = 0.5;
  const SpectralField u = make_initial(s, g);
  EXPECT_LT(max_coeff_distance(u, testing_util::cos_mode(g, 3, 0.5)), 1e-15);
  s.mode = 40;
  EXPECT_THROW(make_initial(s, g), ValidationError);
}

TEST(Fit, ExactPowerLaw) {
  std::vector<double> t, v;
  for (int i = 0; i < 40; ++i) {
    t.push_back(0.5 * i);
    v.push_back(3.0 * std::pow(1.0 + t.back() * t.back(), 0.75));
  }
  const FitResult f = fit_power_law(t, v);
  EXPECT_NEAR(f.exponent, 1.5, 1e-10);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-10);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_FALSE(f.degenerate);
}

TEST(Fit, ConstantSeriesIsDegenerate) {
  std::vector<double> t, v;
  for (int i = 0; i < 20; ++i) {
    t.push_back(i);
    v.push_back(2.0);
  }
  const FitResult f = fit_power_law(t, v);
  EXPECT_EQ(f.exponent, 0.0);
  EXPECT_TRUE(f.degenerate);
}

TEST(Fit, NoisyPowerLaw) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 0.01);
  std::vector<double> t, v;
  for (int i = 0; i < 200; ++i) {
    t.push_back(1.0 + i);
    v.push_back(std::pow(1.0 + t.back() * t.back(), 0.4) * (1.0 + n(rng)));
  }
  EXPECT_NEAR(fit_power_law(t, v).exponent, 0.8, 0.05);
}

TEST(Fit, Preconditions) {
  std::vector<double> t{1, 2, 3, 4, 5, 6, 7}, v{1, 2, 3, 4, 5, 6, 7};
  EXPECT_THROW(fit_power_law(t, v), PreconditionError);
  std::vector<double> x{1, 2, 3}, y{1, -1, 2};
  EXPECT_THROW(fit_loglog(x, y), PreconditionError);
}

TEST(PartialSum, SmallExact) {
  const PartialSum p = partial_sum_check(1.0, 10);
  EXPECT_DOUBLE_EQ(p.sum, 55.0);
  EXPECT_DOUBLE_EQ(p.asymptote, 50.0);
  EXPECT_DOUBLE_EQ(p.error, 5.0);
  EXPECT_DOUBLE_EQ(p.scale, 10.0);
  EXPECT_EQ(partial_sum_check(0.0, 100).error, 0.0);
}

TEST(PartialSum, NegativeExponent) {
  // sum k^{-1/2} - 2 sqrt(N) -> zeta(1/2) = -1.4603545...
  const PartialSum p = partial_sum_check(-0.5, 1000000);
  EXPECT_NEAR(p.error, -1.4603545088095868, 1e-3);
  EXPECT_LE(std::abs(p.error), 2.0);
}

TEST(PartialSum, Rejects) {
  EXPECT_THROW(partial_sum_check(-1.0, 10), ValidationError);
  EXPECT_THROW(partial_sum_check(-2.0, 10), ValidationError);
  EXPECT_THROW(partial_sum_check(1.0, 0), ValidationError);
}

TEST(DyadicSplit, Cases) {
  const GridSpec g(64);
  const SpectralField u = testing_util::random_real(g, 4, 20);
  const DyadicSplit all = dyadic_split_norm(u, 0.75, 32);
  EXPECT_EQ(all.high, 0.0);
  EXPECT_NEAR(all.low, sobolev_norm(u, 0.75), 1e-14);

  const DyadicSplit hi = dyadic_split_norm(testing_util::cos_mode(g, 5), 1.0, 4);
  EXPECT_EQ(hi.low, 0.0);

  for (int m : {1, 3, 8, 15}) {
    const DyadicSplit d = dyadic_split_norm(u, 0.9, m);
    const double t = sobolev_norm(u, 0.9);
    EXPECT_NEAR(d.low * d.low + d.high * d.high, t * t, 1e-12 * t * t);
    EXPECT_LE(d.low, d.bound);
  }
  EXPECT_THROW(dyadic_split_norm(u, 0.9, 0), ValidationError);
}

TEST(Config, RejectsUnknownKeys) {
  EXPECT_THROW(parse_experiment_config(nlohmann::json{{"bogus", 1}}), ValidationError);
  EXPECT_THROW(parse_experiment_config(nlohmann::json{{"solver", {{"bogus", 1}}}}),
               ValidationError);
  EXPECT_THROW(parse_experiment_config(nlohmann::json{{"data_gen", {{"kind", "nope"}}}}),
               ValidationError);
}

TEST(Config, SmoothingRange) {
  nlohmann::json j{{"kind", "smoothing"}, {"s", 0.4}, {"a_grid", {0.35}}};
  try {
    parse_experiment_config(j);
    FAIL() << "expected rejection";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("admissible range"), std::string::npos);
  }
  j["a_grid"] = {0.2};
  EXPECT_NO_THROW(parse_experiment_config(j));
  j["s"] = 0.1;
  EXPECT_THROW(parse_experiment_config(j), ValidationError);
  j["s"] = 0.9;
  j["a_grid"] = {1.0 / 3.0};
  EXPECT_THROW(parse_experiment_config(j), ValidationError);
}

TEST(Config, GrowthRange) {
  EXPECT_THROW(parse_experiment_config(nlohmann::json{{"kind", "growth"}, {"s", 0.5}}),
               ValidationError);
  EXPECT_NO_THROW(parse_experiment_config(nlohmann::json{{"kind", "growth"}, {"s", 1.0}}));
  EXPECT_THROW(parse_experiment_config(nlohmann::json{{"kind", "growth"}, {"s", 1.1}}),
               ValidationError);
}

TEST(Config, OverridesAndSeeds) {
  nlohmann::json j{{"kind", "conservation"}, {"seed", 7}};
  apply_override(j, "solver.dt=0.002");
  apply_override(j, "n_grid=[32,64]");
  apply_override(j, "data_gen.kind=single_mode");
  const ExperimentConfig c = parse_experiment_config(j);
  EXPECT_EQ(c.solver.dt, 0.002);
  EXPECT_EQ(c.n_grid, (std::vector<int>{32, 64}));
  EXPECT_EQ(c.data_gen.kind, DataKind::single_mode);
  EXPECT_EQ(c.member_seed(2), 9u);

  apply_override(j, "data_gen.seed=100");
  EXPECT_EQ(parse_experiment_config(j).member_seed(2), 102u);
  EXPECT_THROW(apply_override(j, "no_equals_sign"), ValidationError);

  const ExperimentConfig back = parse_experiment_config(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Config, DtRule) {
  ExperimentConfig c;
  c.solver.dt = 1e-3;
  c.dt_rule = DtRule::inverse_square;
  EXPECT_EQ(c.dt_for(128), 1e-3);
  EXPECT_DOUBLE_EQ(c.dt_for(512), 2.5e-4);
  c.dt_rule = DtRule::fixed;
  EXPECT_EQ(c.dt_for(1024), 1e-3);
}

TEST(Pool, CoversEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(500);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Pool, RethrowsLowestIndex) {
  try {
    parallel_for(100, 4, [](std::size_t i) {
      if (i % 10 == 3) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "3");
  }
}

TEST(Runs, ConservationDeterministicAcrossThreads) {
  const ExperimentConfig c = small_config(ExperimentKind::conservation);
  const auto a = run_conservation(c, 1, false);
  const auto b = run_conservation(c, 3, false);
  EXPECT_EQ(table_text(a, "diagnostics"), table_text(b, "diagnostics"));
  EXPECT_EQ(table_text(a, "conservation"), table_text(b, "conservation"));
  ASSERT_EQ(a.summary["runs"].size(), 2u);
  for (const auto& r : a.summary["runs"]) EXPECT_LT(r["max_drift_i2"].get<double>(), 1e-8);
}

TEST(Runs, SmoothingDeterministicAndShaped) {
  ExperimentConfig c = small_config(ExperimentKind::smoothing);
  c.s = 0.55;
  c.a_grid = {0.1, 0.3};
  c.n_grid = {64, 128};
  c.t_end = 0.1;
  c.data_gen.s_target = 0.55;
  const auto a = run_smoothing(c, 1);
  const auto b = run_smoothing(c, 4);
  EXPECT_EQ(table_text(a, "smoothing_cells"), table_text(b, "smoothing_cells"));
  EXPECT_EQ(table_text(a, "diagnostics"), table_text(b, "diagnostics"));
  ASSERT_EQ(a.summary["per_a"].size(), 2u);
  for (const auto& p : a.summary["per_a"]) {
    EXPECT_EQ(p["n"].size(), 2u);
    EXPECT_TRUE(std::isfinite(p["beta"].get<double>()));
  }
}

TEST(Runs, GaugeResidualTable) {
  ExperimentConfig c = small_config(ExperimentKind::gauge_residual);
  c.data_gen.kind = DataKind::single_mode;
  c.ensemble = 1;
  c.n_grid = {64, 128};
  const auto r = run_gauge_residual(c, 2);
  ASSERT_EQ(r.summary["runs"].size(), 2u);
  for (const auto& run : r.summary["runs"]) {
    EXPECT_EQ(run["r0_max_abs"].get<double>(), 0.0);
    EXPECT_LT(run["max_f_residual"].get<double>(), 1e-8);
    EXPECT_GT(run["ablation_residual_t0"].get<double>(), 1e-3);
  }
}

TEST(Runs, GrowthNeedsEnoughSnapshots) {
  ExperimentConfig c = small_config(ExperimentKind::growth);
  c.s = 1.0;
  c.t_end = 0.1;
  EXPECT_THROW(run_growth(c, 1), PreconditionError);
  c.t_end = 2.0;
  c.snapshot_interval = 0.05;
  const auto r = run_growth(c, 2);
  EXPECT_EQ(r.summary["runs"].size(), 2u);
  EXPECT_TRUE(std::isfinite(r.summary["gamma_max"].get<double>()));
}

TEST(Runs, BilinearDeterministic) {
  ExperimentConfig c;
  c.kind = ExperimentKind::bilinear;
  c.ensemble = 2;
  c.seed = 3;
  c.bilinear.pairs = {{3, 3}};
  c.bilinear.k_grid = {4, 5};
  c.bilinear.m_points = 64;
  const auto a = run_bilinear(c, 1);
  const auto b = run_bilinear(c, 2);
  EXPECT_EQ(table_text(a, "bilinear"), table_text(b, "bilinear"));
  const auto& p = a.summary["pairs"][0];
  EXPECT_GT(p["max_ratio"][0].get<double>(), 0.0);
  EXPECT_EQ(p["max_ratio"][1].get<double>(), 0.0);
  EXPECT_EQ(p["vanishing_k"], nlohmann::json::array({5}));
}

TEST(Runs, NormsTable) {
  ExperimentConfig c = small_config(ExperimentKind::conservation);
  c.norms = {0.5, 1.0};
  const auto r = run_norms(c, 2);
  ASSERT_EQ(r.tables.size(), 1u);
  EXPECT_EQ(r.tables[0].rows.size(), 4u);
}

TEST(Runs, SingleModeResidualResolved) {
  ExperimentConfig c = small_config(ExperimentKind::smoothing);
  c.s = 0.55;
  c.a_grid = {0.2};
  c.n_grid = {256, 512};
  c.ensemble = 1;
  c.t_end = 0.1;
  c.dt_rule = DtRule::inverse_square;
  c.data_gen.kind = DataKind::single_mode;
  c.data_gen.amplitude = 0.5;
  const auto r = run_smoothing(c, 2);
  const auto& sup = r.summary["per_a"][0]["median_sup_r"];
  const double a = sup[0].get<double>(), b = sup[1].get<double>();
  EXPECT_GT(a, 0.0);
  EXPECT_LT(std::abs(a - b), 1e-6 * a);
}
