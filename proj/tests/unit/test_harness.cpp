#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nskp/harness.hpp"
#include "test_support.hpp"

using namespace nskp;
using nskp::testing::max_abs_diff;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralField shear_mode(const Grid& g, double k) {
  return SpectralField::from_function(g, [k](const Point& x, int c) { return c == 0 ? std::sin(k * x[1]) : 0.0; });
}

TestFunction uniform_test_function(const Grid& g, int a, int b) {
  TestFunction tf;
  tf.weight = SpectralField::from_function(g, [](const Point&) { return 1.0; });
  tf.matrix[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1.0;
  tf.matrix[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1.0;
  return tf;
}

}  // namespace

TEST(NsReference, TaylorGreenDecay) {
  const Grid g(2, 32, 2.0 * kPi);
  const double nu = 1.0;
  NsOptions o;
  o.dt = 0.01;
  o.t_final = 1.0;
  o.record_interval = 0.1;
  const auto u0 = taylor_green_velocity(g);
  const auto traj = run_ns_reference(u0, nu, o);
  ASSERT_EQ(traj.velocity.times.size(), 11u);
  const auto exact = std::exp(-2.0 * nu) * u0;
  EXPECT_LE(l2_norm(traj.velocity.fields.back() - exact) / l2_norm(exact), 1e-3);
  EXPECT_LE(traj.max_divergence, 1e-10);
  EXPECT_LE(traj.max_mean_drift, 1e-14);
}

TEST(NsReference, ZeroDataStaysZero) {
  const Grid g(2, 16, 2.0 * kPi);
  NsOptions o;
  o.t_final = 0.1;
  const auto traj = run_ns_reference(SpectralField::vector(g), 1.0, o);
  for (const auto& f : traj.velocity.fields) EXPECT_EQ(max_abs(f), 0.0);
}

TEST(NsReference, LinearDiffusionIsExact) {
  const Grid g(2, 16, 2.0 * kPi);
  const double nu = 0.7;
  NsOptions o;
  o.dt = 0.05;
  o.t_final = 2.0;
  o.record_interval = 0.5;
  o.nonlinear = false;
  const auto u0 = shear_mode(g, 3.0);
  const auto traj = run_ns_reference(u0, nu, o);
  for (std::size_t i = 0; i < traj.velocity.times.size(); ++i) {
    const double t = traj.velocity.times[i];
    EXPECT_LE(max_abs_diff(traj.velocity.fields[i], std::exp(-nu * 9.0 * t) * u0), 1e-10);
  }
}

TEST(NsReference, PreservesMeanAndSolenoidality) {
  const Grid g(2, 32, 2.0 * kPi * 8.0);
  PhysParams p;
  const auto d = ill_prepared(g, p, 3);
  const auto u0 = d.u_solenoidal + SpectralField::from_function(g, [](const Point&, int c) { return 0.3 * (c + 1); });
  NsOptions o;
  o.t_final = 0.2;
  const auto traj = run_ns_reference(u0, 0.5, o);
  EXPECT_LE(traj.max_divergence, 1e-10);
  EXPECT_LE(traj.max_mean_drift, 1e-12);
}

TEST(NsReference, RejectsCompressibleData) {
  const Grid g(2, 16, 2.0 * kPi);
  const auto grad = gradient(SpectralField::from_function(g, [](const Point& x) { return std::cos(x[0]); }));
  EXPECT_THROW(run_ns_reference(grad, 1.0), ContractViolation);
}

TEST(TestFunctions, BumpsAreCompactlySupported) {
  EXPECT_DOUBLE_EQ(bump(0.0), 1.0);
  EXPECT_EQ(bump(1.0), 0.0);
  EXPECT_EQ(bump(-1.5), 0.0);
  const Grid g(2, 64, 2.0 * kPi * 8.0);
  const auto tfs = make_test_functions(g, 42);
  ASSERT_EQ(tfs.size(), 5u);
  EXPECT_DOUBLE_EQ(tfs[0].radius, g.length() / 4.0);
  EXPECT_DOUBLE_EQ(tfs[4].radius, g.length() / 16.0);
  for (const auto& tf : tfs) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) EXPECT_EQ(tf.matrix[a][b], tf.matrix[b][a]);
    }
    const auto w = tf.weight.values(0);
    std::size_t zeros = 0;
    for (double v : w) zeros += v == 0.0 ? 1 : 0;
    EXPECT_GT(zeros, 0u);
  }
  const auto again = make_test_functions(g, 42);
  EXPECT_EQ(max_abs_diff(again[2].weight, tfs[2].weight), 0.0);
  EXPECT_NE(make_test_functions(g, 43)[0].center, tfs[0].center);
}

TEST(Witness, ZeroPotentialGivesZero) {
  const Grid g(2, 32, 2.0 * kPi * 8.0);
  PhysParams p;
  const auto s = equilibrium(g, p);
  const auto tfs = make_test_functions(g, 1);
  std::vector<FluidState> traj{s, s, s};
  traj[1].time = 0.5;
  traj[2].time = 1.0;
  for (double w : efield_witness(traj, tfs)) EXPECT_EQ(w, 0.0);
}

TEST(Witness, StaticSingleModeMatchesHandIntegral) {
  // rho - 1 = eps sin(k0 x) gives lambda E_x = -eps cos(k0 x) / (lambda k0); against
  // phi = e_x (x) e_x the pairing is eps^2 / (lambda^2 k0^2) V / 2 per unit time.
  const Grid g(2, 32, 2.0 * kPi * 8.0);
  const double k0 = 2.0 * kPi / g.length();
  const double eps = 0.01;
  PhysParams p;
  p.lambda = 0.1;
  const auto s = make_state(SpectralField::from_function(g, [&](const Point& x) { return 1.0 + eps * std::sin(k0 * x[0]); }),
                            SpectralField::vector(g), p);
  std::vector<FluidState> traj;
  for (int i = 0; i <= 4; ++i) {
    traj.push_back(s);
    traj.back().time = 0.25 * i;
  }
  const std::vector<TestFunction> tfs{uniform_test_function(g, 0, 0), uniform_test_function(g, 1, 1),
                                      uniform_test_function(g, 0, 1)};
  const auto w = efield_witness(traj, tfs);
  const double expected = eps * eps / (p.lambda * p.lambda * k0 * k0) * g.volume() / 2.0;
  EXPECT_NEAR(w[0], expected, 1e-12 * expected);
  EXPECT_NEAR(w[1], 0.0, 1e-12 * expected);
  EXPECT_NEAR(w[2], 0.0, 1e-12 * expected);
}

TEST(ConvergenceMetrics, IdenticalTrajectoriesGiveZero) {
  const Grid g(2, 16, 2.0 * kPi);
  const auto u = taylor_green_velocity(g);
  FieldSeries a{{0.0, 0.5, 1.0}, {u, 0.9 * u, 0.8 * u}};
  const auto m = convergence_metrics(a, a);
  // The projector is applied to both sides; only round-off survives.
  EXPECT_LT(m.solenoidal_l2_error, 1e-13);
  EXPECT_EQ(m.median_pointwise_error, 0.0);
}

TEST(ConvergenceMetrics, ZeroReferenceGivesSolenoidalNorm) {
  const Grid g(2, 16, 2.0 * kPi);
  const auto v = taylor_green_velocity(g);
  const auto grad = gradient(SpectralField::from_function(g, [](const Point& x) { return std::sin(x[0] + x[1]); }));
  FieldSeries m{{0.0, 1.0}, {v + grad, v + grad}};
  FieldSeries zero{{0.0, 1.0}, {SpectralField::vector(g), SpectralField::vector(g)}};
  EXPECT_NEAR(convergence_metrics(m, zero).solenoidal_l2_error, l2_norm(v), 1e-12 * l2_norm(v));
}

TEST(ConvergenceMetrics, HandQuadrature) {
  // m(t) = (1 + t) v, ref = v: error t ||v||; trapezoid of t^2 on {0, 1/2, 1} is 3/8.
  const Grid g(2, 16, 2.0 * kPi);
  const auto v = shear_mode(g, 2.0);
  FieldSeries m{{0.0, 0.5, 1.0}, {v, 1.5 * v, 2.0 * v}};
  FieldSeries ref{{0.0, 0.5, 1.0}, {v, v, v}};
  const auto r = convergence_metrics(m, ref);
  EXPECT_NEAR(r.solenoidal_l2_error, std::sqrt(0.375) * l2_norm(v), 1e-12);
  // |sin(2y)| has median sqrt(2)/2 over the 16-point grid.
  EXPECT_NEAR(r.median_pointwise_error, std::sqrt(0.5), 1e-12);
  FieldSeries shifted{{0.0, 0.5, 1.1}, {v, v, v}};
  EXPECT_THROW(convergence_metrics(m, shifted), ContractViolation);
}

TEST(Sweep, MixedNormExponents) {
  EXPECT_NEAR(mixed_norm_p(1.5), 1.2, 1e-15);
  EXPECT_NEAR(mixed_norm_q(1.5), 2.25, 1e-15);
}

TEST(Sweep, ValidatesConfig) {
  SweepConfig c;
  c.lambdas = {0.1, 0.2};
  EXPECT_THROW(c.validate(), ContractViolation);
  c.lambdas = {0.1};
  c.t_final = 0.0105;
  EXPECT_THROW(c.validate(), ContractViolation);
}

TEST(Sweep, SmallSweepIsDeterministicAndComplete) {
  SweepConfig c;
  c.lambdas = {0.2, 0.1};
  c.grid = {2, 32, 2.0 * kPi * 8.0};
  c.t_final = 0.1;
  c.record_interval = 0.02;
  const auto a = run_sweep(c);
  ASSERT_TRUE(a.all_ok());
  ASSERT_EQ(a.entries.size(), 2u);
  EXPECT_EQ(a.entries[0].series.size(), 6u);
  EXPECT_EQ(a.entries[0].efield_per_function.size(), 5u);
  EXPECT_LT(a.entries[1].fluct_l2, a.entries[0].fluct_l2);
  EXPECT_TRUE(std::isfinite(a.fluct_slope));
  c.threads = 1;
  const auto b = run_sweep(c);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a.entries[i].grad_mom, b.entries[i].grad_mom);
    EXPECT_EQ(a.entries[i].sol_mom_err, b.entries[i].sol_mom_err);
    EXPECT_EQ(a.entries[i].efield_witness, b.entries[i].efield_witness);
  }
}

TEST(Sweep, WellPreparedDataTrackNavierStokesBetter) {
  SweepConfig c;
  c.lambdas = {0.1};
  c.grid = {2, 32, 2.0 * kPi * 8.0};
  c.t_final = 0.2;
  const auto ill = run_sweep(c);
  c.well_prepared = true;
  const auto well = run_sweep(c);
  ASSERT_TRUE(ill.all_ok() && well.all_ok());
  EXPECT_LT(well.entries[0].sol_mom_err, ill.entries[0].sol_mom_err);
}

TEST(Sweep, FailedEntryCarriesDiagnostic) {
  SweepConfig c;
  c.lambdas = {2.0, 0.1};
  c.grid = {2, 32, 2.0 * kPi * 8.0};
  c.t_final = 0.02;
  const auto r = run_sweep(c);
  EXPECT_FALSE(r.all_ok());
  EXPECT_FALSE(r.entries[0].ok);
  EXPECT_NE(r.entries[0].diagnostic.find("density"), std::string::npos);
  EXPECT_TRUE(r.entries[1].ok);
}
