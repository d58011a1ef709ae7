#include <cmath>
#include <cstdlib>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "reference_values.hpp"
#include "uavnoma/errors.hpp"
#include "uavnoma/montecarlo.hpp"

using namespace uavnoma;
using namespace uavnoma::mc;

namespace {

ScenarioConfig scenario(double rho_db, Mode mode = Mode::fast, std::uint64_t trials = 20000) {
  ScenarioConfig c;
  c.power.rho_db = rho_db;
  c.mode = mode;
  c.trials = trials;
  return c;
}

double z(const Estimate& e, double truth) { return std::abs(e.value - truth) / e.std_error; }

}  // namespace

TEST(Simulate, IdenticalAcrossWorkerCounts) {
  for (Mode mode : {Mode::fast, Mode::exact, Mode::upper_bound}) {
    auto c = scenario(40, mode, 9000);
    c.power.interference = sigalign::InterferenceMode::fixed;
    const auto a = simulate(c, 1);
    const auto b = simulate(c, 3);
    EXPECT_EQ(a.far_outage.value, b.far_outage.value);
    EXPECT_EQ(a.near_outage.value, b.near_outage.value);
    EXPECT_EQ(a.far_rate.value, b.far_rate.value);
    EXPECT_EQ(a.near_rate.value, b.near_rate.value);
    EXPECT_EQ(a.near_rate.std_error, b.near_rate.std_error);
  }
}

TEST(Simulate, SeedChangesResults) {
  auto a = scenario(40), b = scenario(40);
  b.seed = a.seed + 1;
  EXPECT_NE(simulate(a, 1).far_rate.value, simulate(b, 1).far_rate.value);
}

TEST(Simulate, InfeasibleRatesGiveCertainOutage) {
  auto c = scenario(60);
  c.rates.R_far = 2.5;
  const auto s = simulate(c, 1);
  EXPECT_FALSE(s.feasible);
  EXPECT_EQ(s.far_outage.value, 1.0);
  EXPECT_EQ(s.near_outage.value, 1.0);
  EXPECT_EQ(s.far_outage.std_error, 0.0);
  EXPECT_EQ(estimate_outage_far(c).value, 1.0);
}

TEST(Simulate, VeryLowSnrIsAlmostAlwaysInOutage) {
  const auto s = simulate(scenario(-20, Mode::fast, 5000), 1);
  EXPECT_GT(s.far_outage.value, 0.99);
  EXPECT_GT(s.near_outage.value, 0.99);
}

TEST(Simulate, FastModeMatchesReferenceIntegrals) {
  const auto s = simulate(scenario(60, Mode::fast, 200000), 1);
  EXPECT_LT(z(s.far_outage, ref::outage_far_60db_m1), 4.0);
  EXPECT_LT(z(s.near_outage, ref::outage_near_60db_m1), 4.0);
  EXPECT_LT(z(s.near_rate, ref::near_rate_60db_m1), 4.0);
  EXPECT_LT(z(s.far_rate, ref::far_rate_60db_m1), 4.0);
}

TEST(Simulate, ScatterOverSeedsIsConsistentWithStandardError) {
  int inside = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto c = scenario(50, Mode::fast, 10000);
    c.fading.m = 2;
    c.seed = seed;
    if (z(simulate(c, 1).far_outage, ref::outage_far_50db_m2) <= 2.0) ++inside;
  }
  // P(|Z| <= 2) = 0.954; 15 or fewer of 20 has probability below 1%.
  EXPECT_GE(inside, 16);
}

TEST(Simulate, ProportionStandardError) {
  const auto e = proportion(25, 100);
  EXPECT_DOUBLE_EQ(e.value, 0.25);
  EXPECT_DOUBLE_EQ(e.std_error, std::sqrt(0.25 * 0.75 / 100));
  EXPECT_EQ(e.trials, 100u);
}

TEST(Simulate, MonotoneInSnrUnderCommonDraws) {
  double prev_far = 1.1, prev_near = 1.1;
  for (double db = 10; db <= 60; db += 10) {
    auto c = scenario(db, Mode::exact, 4096);
    c.power.interference = sigalign::InterferenceMode::fixed;
    const auto s = simulate(c, 1);
    EXPECT_LE(s.far_outage.value, prev_far);
    EXPECT_LE(s.near_outage.value, prev_near);
    prev_far = s.far_outage.value;
    prev_near = s.near_outage.value;
  }
}

TEST(CompareModes, UpperBoundNeverBelowExact) {
  for (double db : {20.0, 40.0, 60.0}) {
    auto c = scenario(db, Mode::exact, 4096);
    c.power.interference = sigalign::InterferenceMode::fixed;
    c.power.delta = c.N;
    const auto p = compare_modes(c, 1);
    EXPECT_EQ(p.trials, 4096u);
    EXPECT_EQ(p.violations, 0u);
    EXPECT_GE(p.far_upper, p.far_exact);
    EXPECT_GE(p.near_upper, p.near_exact);
  }
}

TEST(Validate, RejectsBadScenarios) {
  auto c = scenario(60);
  c.N = 2;
  EXPECT_THROW(c.validate(), ConfigError);
  c = scenario(60);
  c.trials = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = scenario(60);
  c.rates.R_far = 2.5;
  EXPECT_EQ(c.validate().size(), 1u);
}

TEST(WorkerCount, ReadsEnvironment) {
  ::setenv("UAVNOMA_WORKERS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  ::setenv("UAVNOMA_WORKERS", "0", 1);
  EXPECT_GE(worker_count(), 1u);
  ::unsetenv("UAVNOMA_WORKERS");
  EXPECT_GE(worker_count(), 1u);
}

TEST(Fits, LeastSquaresRecoversLine) {
  const std::vector<std::pair<double, double>> xy{{0, 1}, {1, 3}, {2, 5}};
  const auto f = least_squares(xy);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_THROW(least_squares(std::vector<std::pair<double, double>>{{1, 1}}), std::invalid_argument);
  EXPECT_THROW(least_squares(std::vector<std::pair<double, double>>{{1, 1}, {1, 2}}), std::invalid_argument);
}

TEST(Fits, DiversityOrderDropsZeros) {
  const std::vector<std::pair<double, double>> curve{{40, 1e-4}, {50, 1e-5}, {60, 1e-6}, {70, 0.0}};
  const auto f = fit_diversity_order(curve);
  EXPECT_NEAR(f.slope, 1.0, 1e-12);
  EXPECT_EQ(f.used, 3u);
  EXPECT_EQ(f.dropped, 1u);
}

TEST(Fits, SnrSlopeInBitsPerDoubling) {
  std::vector<std::pair<double, double>> r;
  for (double db : {40.0, 50.0, 60.0}) r.emplace_back(db, 0.5 * std::log2(std::pow(10.0, db / 10)) + 3);
  EXPECT_NEAR(fit_snr_slope(r).slope, 0.5, 1e-12);
}
