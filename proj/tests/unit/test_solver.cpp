#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "bolab/solver/solve.hpp"
#include "bolab/solver/trajectory_io.hpp"
#include "helpers.hpp"

using namespace bolab;
using namespace testing_util;

namespace {

SolverConfig quiet_config(double dt, double t_end, int record_every = 1) {
  SolverConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.record_every = record_every;
  c.conservation_policy = ConservationPolicy::warn;
  return c;
}

SpectralField final_state(const SpectralField& u0, const SolverConfig& c) {
  return solve(u0, c).final_state();
}

}  // namespace

TEST(Nonlinear, CosineSquared) {
  const GridSpec g(64);
  const auto n = rhs_nonlinear(cos_mode(g));
  // -1/2 sin 2x has coefficient (i pi / 2) at xi = 2.
  EXPECT_NEAR(std::abs(n[2] - cplx(0.0, kPi / 2)), 0.0, 1e-14);
  for (int xi = 0; xi <= g.max_mode(); ++xi)
    if (xi != 2) EXPECT_NEAR(std::abs(n[xi]), 0.0, 1e-14) << xi;
  EXPECT_EQ(rhs_nonlinear(SpectralField(g)).max_abs(), 0.0);
}

TEST(Nonlinear, RefinementConsistency) {
  const GridSpec coarse(128), fine(256);
  const auto u = random_real(coarse, 41, 40);
  const auto a = rhs_nonlinear(u);
  const auto b = rhs_nonlinear(resample(u, fine));
  for (int xi = -coarse.dealias_cutoff(); xi <= coarse.dealias_cutoff(); ++xi)
    EXPECT_NEAR(std::abs(a[xi] - b[xi]), 0.0, 1e-12) << xi;
}

TEST(Nonlinear, DealiasingZeroesUpperThird) {
  const GridSpec g(64);
  const auto n = rhs_nonlinear(random_real(g, 42));
  for (int xi = g.dealias_cutoff() + 1; xi <= g.max_mode(); ++xi)
    EXPECT_EQ(n[xi], cplx(0.0));
}

class LinearExactness : public ::testing::TestWithParam<Integrator> {};

TEST_P(LinearExactness, MatchesSemigroup) {
  const GridSpec g(64);
  SolverConfig c;
  c.integrator = GetParam();
  c.nonlinear = false;
  const auto u = random_real(g, 43);
  for (double dt : {1e-4, 1e-2, 0.05, 0.1}) {
    const auto a = step(u, dt, c);
    EXPECT_LE(max_coeff_distance(a, semigroup_bo(u, dt)), 1e-13 * u.max_abs())
        << dt;
  }
}

TEST_P(LinearExactness, TimeReversible) {
  const GridSpec g(64);
  SolverConfig c;
  c.integrator = GetParam();
  c.nonlinear = false;
  const auto u = random_real(g, 44);
  const auto back = step(step(u, 0.07, c), -0.07, c);
  EXPECT_LE(max_coeff_distance(back, u), 1e-13 * u.max_abs());
}

INSTANTIATE_TEST_SUITE_P(Both, LinearExactness,
                         ::testing::Values(Integrator::ifrk4,
                                           Integrator::etdrk4));

class Convergence : public ::testing::TestWithParam<Integrator> {};

TEST_P(Convergence, FourthOrder) {
  const GridSpec g(64);
  const auto u0 = cos_mode(g);
  auto run = [&](double dt) {
    auto c = quiet_config(dt, 1.0, 1000000);
    c.integrator = GetParam();
    return final_state(u0, c);
  };
  const double dt = 0.01;
  const auto ref = run(dt / 8);
  const double e1 = l2_distance(run(dt), ref);
  const double e2 = l2_distance(run(dt / 2), ref);
  const double order = std::log2(e1 / e2);
  EXPECT_NEAR(order, 4.0, 0.3) << e1 << " " << e2;
}

INSTANTIATE_TEST_SUITE_P(Both, Convergence,
                         ::testing::Values(Integrator::ifrk4,
                                           Integrator::etdrk4));

TEST(Step, OneStepL2Drift) {
  const GridSpec g(256);
  const auto u = cos_mode(g);
  SolverConfig c;
  const auto v = step(u, 1e-3, c);
  const double a = l2_norm(u), b = l2_norm(v);
  EXPECT_LT(std::abs(b * b - a * a) / (a * a), 1e-12);
}

TEST(Step, RejectsComplexAndBadDt) {
  const GridSpec g(32);
  SolverConfig c;
  EXPECT_THROW(step(random_complex(g, 1), 1e-3, c), PreconditionError);
  EXPECT_THROW(step(cos_mode(g), 0.2, c), ValidationError);
}

TEST(Step, BlowUpOnNonFinite) {
  const GridSpec g(32);
  SpectralField u = cos_mode(g);
  u.set(3, cplx(std::nan(""), 0.0));
  SolverConfig c;
  EXPECT_THROW(step(u, 1e-3, c), BlowUpError);
}

TEST(Solve, ZeroStaysZero) {
  const GridSpec g(64);
  const auto tr = solve(SpectralField(g), quiet_config(1e-2, 0.5, 5));
  for (const auto& s : tr.states) EXPECT_EQ(s.max_abs(), 0.0);
  EXPECT_EQ(tr.times.front(), 0.0);
  for (std::size_t i = 1; i < tr.size(); ++i)
    EXPECT_GT(tr.times[i], tr.times[i - 1]);
}

TEST(Solve, ConservesL2ForCosine) {
  const GridSpec g(256);
  SolverConfig c;
  c.dt = 1e-3;
  c.t_end = 10.0;
  c.record_every = 100;
  const auto tr = solve(cos_mode(g), c);
  EXPECT_TRUE(tr.warnings.empty());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    EXPECT_NEAR(tr.invariants[i].i2 / kPi, 1.0, 1e-8);
    EXPECT_NEAR(tr.invariants[i].i1, 0.0, 1e-14);
    const auto s = synthesize_complex(tr.states[i]);
    double imag = 0.0;
    for (const auto& v : s) imag = std::max(imag, std::abs(v.imag()));
    EXPECT_LT(imag, 1e-11);
  }
}

TEST(Solve, RefinementAgreement) {
  SolverConfig c = quiet_config(1e-3, 5.0, 5000);
  const auto a = final_state(cos_mode(GridSpec(256)), c);
  const auto b = final_state(cos_mode(GridSpec(512)), c);
  EXPECT_LT(l2_distance(resample(a, GridSpec(512)), b), 1e-8);
}

TEST(Solve, SpectralAccuracyInN) {
  SolverConfig c = quiet_config(1e-3, 1.0, 1000);
  const GridSpec ref_grid(512);
  const auto ref = final_state(cos_mode(ref_grid), c);
  double prev = -1.0;
  for (int n : {32, 64, 128, 256}) {
    const auto u = final_state(cos_mode(GridSpec(n)), c);
    const double err = l2_distance(resample(u, ref_grid), ref);
    if (prev > 1e-12) EXPECT_LT(err, prev / 1e3) << n;
    prev = err;
  }
}

TEST(Solve, RequiresMeanZero) {
  const GridSpec g(64);
  EXPECT_THROW(solve(random_real(g, 3, -1, false), quiet_config(1e-2, 0.1)),
               PreconditionError);
}

TEST(Solve, ConservationFailureNamesInvariant) {
  const GridSpec g(32);
  SolverConfig c;
  c.dt = 0.05;
  c.t_end = 1.0;
  c.conservation_tolerance = 1e-14;
  try {
    solve(cos_mode(g), c);
    FAIL() << "expected a conservation error";
  } catch (const ConservationError& e) {
    EXPECT_FALSE(e.invariant().empty());
    EXPECT_GT(e.time(), 0.0);
  }
}

TEST(Conserved, Cosine) {
  const GridSpec g(64);
  const auto q = conserved(cos_mode(g));
  EXPECT_NEAR(q.i1, 0.0, 1e-15);
  EXPECT_NEAR(q.i2, kPi, 1e-14);
  EXPECT_NEAR(q.e3, kPi, 1e-13);
  EXPECT_NEAR(energy_half(cos_mode(g)), kPi, 1e-13);
  const auto z = conserved(SpectralField(g));
  EXPECT_EQ(z.i2, 0.0);
  EXPECT_EQ(z.e3, 0.0);
}

TEST(Conserved, TwoRoutesAgreeOnRandomData) {
  const GridSpec g(128);
  const auto u = random_real(g, 51, 40);
  EXPECT_NEAR(conserved(u).e3, energy_half(u), 1e-11 * std::abs(energy_half(u)));
}

TEST(Reduce, Examples) {
  const GridSpec g(64);
  SpectralField u = cos_mode(g);
  u.set(0, 2.0 * kTwoPi);
  const auto [c, v] = mean_zero_reduce(u);
  EXPECT_NEAR(c, 2.0, 1e-15);
  EXPECT_EQ(max_coeff_distance(v, cos_mode(g)), 0.0);
  EXPECT_TRUE(v.mean_zero());
  SpectralField back = v;
  back.set(0, c * kTwoPi);
  EXPECT_EQ(max_coeff_distance(back, u), 0.0);
  const auto [c0, v0] = mean_zero_reduce(cos_mode(g));
  EXPECT_EQ(c0, 0.0);
  EXPECT_EQ(max_coeff_distance(v0, cos_mode(g)), 0.0);
}

TEST(Galilean, ZeroMeanIsExact) {
  const GridSpec g(64);
  EXPECT_EQ(galilean_check(cos_mode(g), quiet_config(1e-2, 0.5, 10)), 0.0);
}

TEST(Galilean, UnitMean) {
  const GridSpec g(256);
  SpectralField u = cos_mode(g);
  u.set(0, kTwoPi);
  EXPECT_LT(galilean_check(u, quiet_config(1e-3, 2.0, 100)), 1e-9);
}

TEST(Galilean, SingleModeShift) {
  const GridSpec g(32);
  SpectralField e(g, Reality::complex_valued);
  e.set(1, 1.0);
  const double c = 0.7, t = 1.3;
  const auto s = phase_shift(e, c * t);
  EXPECT_NEAR(std::abs(s[1] - std::polar(1.0, -c * t)), 0.0, 1e-15);
}

TEST(TimeDerivative, MatchesFiniteDifference) {
  const GridSpec g(64);
  const auto u0 = cos_mode(g);
  SolverConfig c;
  c.dealias = DealiasRule::none;
  const double h = 1e-3;
  // Fourth-order central difference.
  SpectralField fd = step(u0, h, c) - step(u0, -h, c);
  fd *= 8.0;
  fd -= step(step(u0, h, c), h, c) - step(step(u0, -h, c), -h, c);
  fd *= 1.0 / (12.0 * h);
  const auto ut = resample(bo_time_derivative(u0), g);
  EXPECT_LT(l2_distance(fd, ut), 1e-9);
}

TEST(TrajectoryIO, RoundTrip) {
  const GridSpec g(32);
  const auto tr = solve(random_real(g, 61, 5), quiet_config(1e-2, 0.2, 5));
  const auto path =
      (std::filesystem::temp_directory_path() / "bolab_traj_test.bin").string();
  write_trajectory(path, tr, "test");
  const auto back = read_trajectory(path);
  ASSERT_EQ(back.size(), tr.size());
  EXPECT_EQ(back.config.record_every, 5);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    EXPECT_EQ(back.times[i], tr.times[i]);
    EXPECT_EQ(max_coeff_distance(back.states[i], tr.states[i]), 0.0);
  }
  std::remove(path.c_str());
}

TEST(TrajectoryIO, RejectsGarbage) {
  const auto path =
      (std::filesystem::temp_directory_path() / "bolab_garbage.bin").string();
  {
    std::ofstream os(path, std::ios::binary);
    os << "not a trajectory";
  }
  EXPECT_THROW(read_trajectory(path), ValidationError);
  std::remove(path.c_str());
}
