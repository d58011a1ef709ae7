#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "uavnoma/errors.hpp"
#include "uavnoma/rng.hpp"

namespace uavnoma::channel {

struct FadingConfig {
  double m = 1.0;
  double alpha = 3.0;

  void validate() const {
    if (!(m >= 0.5)) throw ConfigError("fading.m must be >= 0.5");
    if (!(alpha > 2.0)) throw ConfigError("fading.alpha must be > 2");
  }
};

using ChannelMatrix = Eigen::MatrixXcd;

struct CompositeChannel {
  ChannelMatrix H;
  double beta = 0.0;
  double d = 0.0;
};

// Gamma(shape m, scale 1/m): unit-mean Nakagami power.
inline double sample_nakagami_power(double m, CounterStream& rng) {
  if (!(m >= 0.5)) throw std::domain_error("sample_nakagami_power: m must be >= 0.5");
  std::gamma_distribution<double> dist(m, 1.0 / m);
  return dist(rng);
}

inline ChannelMatrix sample_channel_matrix(int N, int K, double m, CounterStream& rng) {
  if (N < 1 || K < 1) throw std::domain_error("sample_channel_matrix: N and K must be >= 1");
  if (!(m >= 0.5)) throw std::domain_error("sample_channel_matrix: m must be >= 0.5");
  std::gamma_distribution<double> power(m, 1.0 / m);
  ChannelMatrix H(N, K);
  for (int k = 0; k < K; ++k)
    for (int n = 0; n < N; ++n) {
      const double amp = std::sqrt(power(rng));
      H(n, k) = std::polar(amp, 2.0 * std::numbers::pi * rng.uniform());
    }
  return H;
}

inline double large_scale(double d, double alpha) {
  if (!(d > 0.0)) throw std::domain_error("large_scale: d must be > 0");
  return std::pow(d, -alpha / 2.0);
}

inline CompositeChannel compose(ChannelMatrix H, double d, double alpha) {
  return {std::move(H), large_scale(d, alpha), d};
}

// Exponential with mean m/2: the small-scale part Z of |u|^2 = d^{-alpha} Z.
inline double effective_gain_fast(double m, CounterStream& rng) {
  if (!(m >= 0.5)) throw std::domain_error("effective_gain_fast: m must be >= 0.5");
  return -0.5 * m * std::log(rng.uniform_pos());
}

}  // namespace uavnoma::channel
