#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/gamma.hpp>
#include <gtest/gtest.h>

#include "uavnoma/channel.hpp"
#include "uavnoma/errors.hpp"
#include "uavnoma/geometry.hpp"
#include "uavnoma/quadrature.hpp"
#include "uavnoma/rng.hpp"

using namespace uavnoma;

TEST(Quadrature, Polynomial) {
  EXPECT_NEAR(integrate([](double x) { return x * x; }, 0, 3), 9.0, 1e-12);
  EXPECT_EQ(integrate([](double x) { return x; }, 2, 2), 0.0);
}

TEST(Quadrature, EndpointSingularity) {
  EXPECT_NEAR(integrate([](double x) { return 1 / std::sqrt(x); }, 0, 1), 2.0, 1e-8);
  EXPECT_NEAR(integrate([](double x) { return std::log(x); }, 0, 1), -1.0, 1e-8);
}

TEST(Quadrature, BudgetExhaustionCarriesEstimate) {
  QuadratureControl ctl;
  ctl.max_subdivisions = 2;
  ctl.rel_tol = 1e-14;
  ctl.abs_tol = 1e-300;
  try {
    integrate([](double x) { return std::sin(1 / x); }, 1e-4, 1, ctl);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_TRUE(std::isfinite(e.estimate()));
    EXPECT_GT(e.error(), 0.0);
  }
}

TEST(Quadrature, RejectsBadControl) {
  QuadratureControl ctl;
  ctl.max_subdivisions = 0;
  EXPECT_THROW(integrate([](double) { return 1.0; }, 0, 1, ctl), std::invalid_argument);
  EXPECT_THROW(integrate([](double) { return 1.0; }, 0, INFINITY), std::domain_error);
}

// Known-answer vectors of the Random123 reference implementation.
TEST(Philox, KnownAnswers) {
  using P = Philox4x32;
  EXPECT_EQ(P::block({0, 0, 0, 0}, {0, 0}), (P::counter_type{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(P::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (P::counter_type{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(P::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (P::counter_type{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterStream, ReproducibleAndKeyed) {
  CounterStream a(7, 11, StreamRole::placement), b(7, 11, StreamRole::placement);
  CounterStream c(7, 12, StreamRole::placement), d(7, 11, StreamRole::lemma), e(8, 11, StreamRole::placement);
  std::vector<std::uint64_t> xa, xb, xc, xd, xe;
  for (int i = 0; i < 9; ++i) {
    xa.push_back(a());
    xb.push_back(b());
    xc.push_back(c());
    xd.push_back(d());
    xe.push_back(e());
  }
  EXPECT_EQ(xa, xb);
  EXPECT_NE(xa, xc);
  EXPECT_NE(xa, xd);
  EXPECT_NE(xa, xe);
}

TEST(CounterStream, UniformRanges) {
  CounterStream s(1, 0, 0u);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = s.uniform_pos();
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Geometry, SlantDistance) {
  EXPECT_DOUBLE_EQ(geometry::slant_distance(3, 4), 5.0);
  EXPECT_THROW(geometry::slant_distance(-1, 4), std::domain_error);
}

TEST(Geometry, EndpointsOfInverseCdf) {
  geometry::GeometryConfig g;
  EXPECT_DOUBLE_EQ(geometry::near_radius(g, 1.0), g.R_m);
  EXPECT_DOUBLE_EQ(geometry::far_radius(g, 0.0), g.R_m);
  EXPECT_DOUBLE_EQ(geometry::far_radius(g, 1.0), g.R_d);
  EXPECT_NEAR(g.l_m(), std::sqrt(200.0), 1e-12);
  EXPECT_NEAR(g.l_d(), std::sqrt(500.0), 1e-12);
}

TEST(Geometry, UserPlacementMomentsAndSupport) {
  geometry::GeometryConfig g;
  double near_sq = 0, far_sq = 0;
  const int n = 100000;
  for (int t = 0; t < n; ++t) {
    CounterStream rng(3, t, StreamRole::placement);
    const auto p = geometry::sample_placement(g, rng);
    ASSERT_GT(p.r_near, 0.0);
    ASSERT_LE(p.r_near, g.R_m);
    ASSERT_GE(p.r_far, g.R_m);
    ASSERT_LE(p.r_far, g.R_d);
    near_sq += p.r_near * p.r_near;
    far_sq += p.r_far * p.r_far;
  }
  // Uniform in area: E r^2 is the midpoint of the squared radii.
  EXPECT_NEAR(near_sq / n, 50.0, 1.0);
  EXPECT_NEAR(far_sq / n, 250.0, 1.5);
}

TEST(Geometry, ConfigValidation) {
  geometry::GeometryConfig g;
  g.R_m = 25;
  EXPECT_THROW(g.validate(), ConfigError);
  g = {};
  g.h = -1;
  EXPECT_THROW(g.validate(), ConfigError);
  g = {};
  g.r_0 = 2000;
  EXPECT_THROW(g.validate(), ConfigError);
}

TEST(Geometry, InterfererCountAndAggregate) {
  geometry::GeometryConfig g;
  EXPECT_NEAR(g.mean_interferers(), 1e-4 * std::numbers::pi * (1e6 - 1), 1e-9);
  double count = 0;
  const int n = 4000;
  for (int t = 0; t < n; ++t) {
    CounterStream a(5, t, StreamRole::interference_far), b(5, t, StreamRole::interference_far);
    const auto f = geometry::sample_interferers(g, a);
    for (double d : f.distances) {
      ASSERT_GE(d, g.r_0);
      ASSERT_LE(d, g.R_I);
    }
    count += static_cast<double>(f.distances.size());
    EXPECT_DOUBLE_EQ(f.aggregate(3.0), geometry::sample_interference_sum(g, 3.0, b));
  }
  const double mean = g.mean_interferers();
  EXPECT_NEAR(count / n, mean, 4 * std::sqrt(mean / n));
}

TEST(Geometry, EmptyFieldAndAlphaDomain) {
  EXPECT_EQ(geometry::interference_aggregate({}, 3.0), 0.0);
  const std::vector<double> d{2.0, 4.0};
  EXPECT_NEAR(geometry::interference_aggregate(d, 3.0), 1 / 8.0 + 1 / 64.0, 1e-15);
  EXPECT_THROW(geometry::interference_aggregate(d, 2.0), std::domain_error);
  geometry::GeometryConfig g;
  g.lambda_I = 0;
  CounterStream rng(1, 1, 0u);
  EXPECT_TRUE(geometry::sample_interferers(g, rng).distances.empty());
}

TEST(Channel, LargeScale) {
  EXPECT_NEAR(channel::large_scale(std::sqrt(200.0), 3), std::pow(200.0, -0.75), 1e-15);
  EXPECT_THROW(channel::large_scale(0, 3), std::domain_error);
  EXPECT_NEAR(channel::compose(channel::ChannelMatrix::Ones(3, 4), 4.0, 2.0).beta, 0.25, 1e-15);
}

TEST(Channel, NakagamiPowerMatchesGammaDistribution) {
  for (double m : {0.5, 1.0, 2.0}) {
    std::vector<double> xs;
    for (int t = 0; t < 20000; ++t) {
      CounterStream rng(9, t, 0u);
      xs.push_back(channel::sample_nakagami_power(m, rng));
    }
    std::sort(xs.begin(), xs.end());
    boost::math::gamma_distribution<double> dist(m, 1 / m);
    double ks = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double F = boost::math::cdf(dist, xs[i]);
      ks = std::max({ks, std::abs(F - double(i) / xs.size()), std::abs(F - double(i + 1) / xs.size())});
    }
    EXPECT_LT(ks, 1.63 / std::sqrt(double(xs.size()))) << m;
  }
}

TEST(Channel, MatrixShapeAndUnitMeanPower) {
  CounterStream rng(2, 0, 0u);
  const auto H = channel::sample_channel_matrix(3, 4, 2.0, rng);
  EXPECT_EQ(H.rows(), 3);
  EXPECT_EQ(H.cols(), 4);
  double p = 0;
  const int n = 5000;
  for (int t = 0; t < n; ++t) {
    CounterStream r(2, t, 0u);
    p += channel::sample_channel_matrix(3, 4, 2.0, r).squaredNorm() / 12;
  }
  EXPECT_NEAR(p / n, 1.0, 0.02);
  EXPECT_THROW(channel::sample_channel_matrix(0, 4, 1, rng), std::domain_error);
  EXPECT_THROW(channel::sample_channel_matrix(3, 4, 0.4, rng), std::domain_error);
}

TEST(Channel, FastGainIsExponentialWithHalfMMean) {
  double s = 0;
  const int n = 200000;
  for (int t = 0; t < n; ++t) {
    CounterStream rng(4, t, StreamRole::fading_fast);
    s += channel::effective_gain_fast(2.0, rng);
  }
  EXPECT_NEAR(s / n, 1.0, 4 * 1.0 / std::sqrt(double(n)));
}

TEST(Channel, FadingValidation) {
  channel::FadingConfig f;
  f.m = 0.3;
  EXPECT_THROW(f.validate(), ConfigError);
  f = {};
  f.alpha = 2.0;
  EXPECT_THROW(f.validate(), ConfigError);
}
