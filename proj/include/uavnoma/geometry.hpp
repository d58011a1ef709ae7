#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "uavnoma/errors.hpp"
#include "uavnoma/rng.hpp"

namespace uavnoma::geometry {

struct GeometryConfig {
  double h = 10.0;
  double R_d = 20.0;
  double R_m = 10.0;
  double r_0 = 1.0;
  double R_I = 1000.0;
  double lambda_I = 1e-4;
  double lambda_u = 1e-3;  // recorded only

  void validate() const {
    if (!(R_m > 0.0)) throw ConfigError("geometry.R_m must be > 0");
    if (!(R_m < R_d)) throw ConfigError("geometry.R_m must be < geometry.R_d");
    if (!(h >= 0.0)) throw ConfigError("geometry.h must be >= 0");
    if (!(r_0 > 0.0)) throw ConfigError("geometry.r_0 must be > 0");
    if (!(r_0 < R_I)) throw ConfigError("geometry.r_0 must be < geometry.R_I");
    if (!(lambda_I >= 0.0)) throw ConfigError("geometry.lambda_I must be >= 0");
    if (!(lambda_u >= 0.0)) throw ConfigError("geometry.lambda_u must be >= 0");
  }

  double l_m() const { return std::sqrt(h * h + R_m * R_m); }
  double l_d() const { return std::sqrt(h * h + R_d * R_d); }
  double mean_interferers() const {
    return lambda_I * std::numbers::pi * (R_I * R_I - r_0 * r_0);
  }
};

struct UserPlacement {
  double r_near = 0.0;
  double r_far = 0.0;
};

struct InterferenceField {
  std::vector<double> distances;

  double aggregate(double alpha) const;
};

inline double near_radius(const GeometryConfig& g, double u) { return g.R_m * std::sqrt(u); }

inline double far_radius(const GeometryConfig& g, double u) {
  return std::sqrt(g.R_m * g.R_m + u * (g.R_d * g.R_d - g.R_m * g.R_m));
}

inline double slant_distance(double r, double h) {
  if (r < 0.0 || h < 0.0) throw std::domain_error("slant_distance: r and h must be >= 0");
  return std::sqrt(h * h + r * r);
}

inline double sample_near_user(const GeometryConfig& g, CounterStream& rng) {
  return near_radius(g, rng.uniform_pos());
}

inline double sample_far_user(const GeometryConfig& g, CounterStream& rng) {
  return far_radius(g, rng.uniform());
}

inline UserPlacement sample_placement(const GeometryConfig& g, CounterStream& rng) {
  UserPlacement p;
  p.r_near = sample_near_user(g, rng);
  p.r_far = sample_far_user(g, rng);
  return p;
}

inline double path_loss(double d, double alpha) {
  if (alpha == 3.0) return 1.0 / (d * d * d);
  return std::pow(d, -alpha);
}

inline double interference_aggregate(std::span<const double> distances, double alpha) {
  if (!(alpha > 2.0))
    throw std::domain_error("interference_aggregate: alpha must be > 2 for a finite field sum");
  double s = 0.0;
  for (double d : distances) s += path_loss(d, alpha);
  return s;
}

inline double InterferenceField::aggregate(double alpha) const {
  return interference_aggregate(distances, alpha);
}

namespace detail {

// Visits the ground distances of one Poisson field on the annulus
// [r_0, R_I] around the evaluated user.
template <class Visit>
void for_each_interferer(const GeometryConfig& g, CounterStream& rng, Visit visit) {
  const double mean = g.mean_interferers();
  if (!(mean > 0.0)) return;
  std::poisson_distribution<std::int64_t> count_dist(mean);
  const std::int64_t n = count_dist(rng);
  const double r02 = g.r_0 * g.r_0;
  const double span2 = g.R_I * g.R_I - r02;
  for (std::int64_t j = 0; j < n; ++j) visit(std::sqrt(r02 + rng.uniform() * span2));
}

}  // namespace detail

inline InterferenceField sample_interferers(const GeometryConfig& g, CounterStream& rng) {
  InterferenceField f;
  detail::for_each_interferer(g, rng, [&](double d) { f.distances.push_back(d); });
  return f;
}

// Same draws as sample_interferers followed by aggregate, without storing
// the field.
inline double sample_interference_sum(const GeometryConfig& g, double alpha, CounterStream& rng) {
  if (!(alpha > 2.0))
    throw std::domain_error("interference_aggregate: alpha must be > 2 for a finite field sum");
  double s = 0.0;
  detail::for_each_interferer(g, rng, [&](double d) { s += path_loss(d, alpha); });
  return s;
}

}  // namespace uavnoma::geometry
