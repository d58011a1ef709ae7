#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uavnoma/channel.hpp"
#include "uavnoma/errors.hpp"
#include "uavnoma/rng.hpp"

namespace uavnoma::sigalign {

enum class InterferenceMode { off, fixed, proportional };

struct PowerConfig {
  double rho_db = 60.0;
  double a_near_sq = 0.25;
  double a_far_sq = 0.75;
  InterferenceMode interference = InterferenceMode::off;
  double P_I_dbm = 30.0;
  double kappa = 0.01;
  double delta = 3.0;

  double rho() const { return std::pow(10.0, rho_db / 10.0); }

  // Linear interferer power relative to unit noise.
  double interference_power() const {
    switch (interference) {
      case InterferenceMode::off: return 0.0;
      case InterferenceMode::fixed: return std::pow(10.0, P_I_dbm / 10.0);
      case InterferenceMode::proportional: return kappa * rho();
    }
    return 0.0;
  }

  void validate(int N) const {
    if (!std::isfinite(rho_db)) throw ConfigError("power.rho_db must be finite");
    if (!(a_near_sq >= 0.0) || !(a_far_sq > 0.0))
      throw ConfigError("power.a_near_sq and power.a_far_sq must be nonnegative");
    if (std::abs(a_near_sq + a_far_sq - 1.0) > 1e-9)
      throw ConfigError("power.a_near_sq + power.a_far_sq must equal 1");
    if (!(a_far_sq > a_near_sq)) throw ConfigError("power.a_far_sq must exceed power.a_near_sq");
    if (!(delta >= 1.0) || delta > N) throw ConfigError("power.delta must lie in [1, antennas.N]");
    if (interference == InterferenceMode::proportional && !(kappa >= 0.0))
      throw ConfigError("power.kappa must be >= 0");
    if (interference == InterferenceMode::fixed && !std::isfinite(P_I_dbm))
      throw ConfigError("power.P_I_dbm must be finite");
  }
};

struct TargetRates {
  double R_near = 1.5;
  double R_far = 1.5;

  double eps_near() const { return std::exp2(R_near) - 1.0; }
  double eps_far() const { return std::exp2(R_far) - 1.0; }

  // The far signal must be decodable at any SNR: a_far^2 - a_near^2 eps_far > 0.
  bool feasible(const PowerConfig& p) const { return p.a_far_sq - p.a_near_sq * eps_far() > 0.0; }

  void validate() const {
    if (!(R_near > 0.0)) throw ConfigError("rates.R_near must be > 0");
    if (!(R_far > 0.0)) throw ConfigError("rates.R_far must be > 0");
  }
};

struct DetectionPair {
  Eigen::VectorXcd t_near;
  Eigen::VectorXcd t_far;
  Eigen::VectorXcd x;
};

struct EffectiveChannel {
  double u_sq_near = 0.0;
  double u_sq_far = 0.0;
  double inv_gram_kk = 0.0;  // (B^{-1} B^{-H})_{kk}
};

// |t|^2 and |t^H 1|^2 as they enter the SINR denominators.
struct DetectionPower {
  double norm_sq = 2.0;
  double ones_sq = 6.0;
};

inline DetectionPower exact_power(const Eigen::VectorXcd& t) {
  return {t.squaredNorm(), std::norm(t.sum())};
}

inline DetectionPower upper_bound_power(double delta) { return {2.0, 2.0 * delta}; }

// Unit detection power, used with the exponential gain abstraction.
inline DetectionPower unit_power(double delta) { return {1.0, delta}; }

// Orthonormal basis of the null space of [H_near^H, -H_far^H] (K x 2N).
// The trailing 2N-K columns of the unitary factor of A^H = QR span the
// same subspace as the zero right singular vectors.
inline Eigen::MatrixXcd null_space_basis(const channel::ChannelMatrix& H_near,
                                         const channel::ChannelMatrix& H_far) {
  const auto N = H_near.rows();
  const auto K = H_near.cols();
  if (H_far.rows() != N || H_far.cols() != K)
    throw std::invalid_argument("null_space_basis: channel shapes differ");
  if (!(2 * N > K)) throw std::domain_error("null_space_basis: requires 2N > K");
  Eigen::MatrixXcd At(2 * N, K);
  At << H_near, -H_far;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(At);
  const auto diag = qr.matrixQR().diagonal().head(K).cwiseAbs();
  if (!(diag.minCoeff() > 1e-10 * diag.maxCoeff()))
    throw RankDeficiencyError("null_space_basis: stacked channel has fewer than K nonzero singular values");
  const Eigen::MatrixXcd Q = qr.householderQ();
  return Q.rightCols(2 * N - K);
}

// x uniform on the sphere |x|^2 = 2 inside the null space.
inline DetectionPair detection_vectors(const Eigen::MatrixXcd& D, CounterStream& rng) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd x(D.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    x(i) = {re, im};
  }
  x *= std::sqrt(2.0) / x.norm();
  const Eigen::VectorXcd t = D * x;
  const auto N = D.rows() / 2;
  return {t.head(N), t.tail(N), x};
}

// B has rows b_j^H; the tagged pair is cluster k.
inline EffectiveChannel effective_channel(std::span<const Eigen::VectorXcd> b, std::size_t k,
                                          double beta_near, double beta_far) {
  const auto K = static_cast<Eigen::Index>(b.size());
  if (K == 0 || k >= b.size()) throw std::invalid_argument("effective_channel: bad cluster index");
  Eigen::MatrixXcd B(K, K);
  for (Eigen::Index j = 0; j < K; ++j) {
    if (b[j].size() != K) throw std::invalid_argument("effective_channel: B must be square");
    B.row(j) = b[j].adjoint();
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(B);
  if (!(lu.rcond() > 1e-12)) throw SingularChannelError("effective_channel: B is singular");
  const Eigen::MatrixXcd inv = lu.inverse();
  const double m_kk = inv.row(static_cast<Eigen::Index>(k)).squaredNorm();
  return {beta_near * beta_near / m_kk, beta_far * beta_far / m_kk, m_kk};
}

// interference_term is P_I * sum d^{-alpha}.
inline double sinr_far(double u_sq_far, DetectionPower tp, double interference_term,
                       const PowerConfig& p) {
  const double rs = p.rho() * u_sq_far;
  return rs * p.a_far_sq / (tp.norm_sq + rs * p.a_near_sq + tp.ones_sq * interference_term);
}

inline double sinr_far(double u_sq_far, const Eigen::VectorXcd& t_far, double interference_term,
                       const PowerConfig& p) {
  return sinr_far(u_sq_far, exact_power(t_far), interference_term, p);
}

struct NearSinr {
  double sic = 0.0;  // far signal decoded at the near user
  double own = 0.0;  // own signal after cancellation
};

inline NearSinr sinr_near(double u_sq_near, DetectionPower tp, double interference_term,
                          const PowerConfig& p) {
  const double rs = p.rho() * u_sq_near;
  const double floor = tp.norm_sq + tp.ones_sq * interference_term;
  return {rs * p.a_far_sq / (floor + rs * p.a_near_sq), rs * p.a_near_sq / floor};
}

inline NearSinr sinr_near(double u_sq_near, const Eigen::VectorXcd& t_near, double interference_term,
                          const PowerConfig& p) {
  return sinr_near(u_sq_near, exact_power(t_near), interference_term, p);
}

// One cluster of the full construction: both users' channels, the
// null-space detection pair and the shared effective vector b.
struct Cluster {
  channel::ChannelMatrix H_near;
  channel::ChannelMatrix H_far;
  DetectionPair detection;
  Eigen::VectorXcd b;
};

inline Cluster sample_cluster(int N, int K, double m, CounterStream& rng) {
  Cluster c;
  c.H_near = channel::sample_channel_matrix(N, K, m, rng);
  c.H_far = channel::sample_channel_matrix(N, K, m, rng);
  c.detection = detection_vectors(null_space_basis(c.H_near, c.H_far), rng);
  c.b = c.H_near.adjoint() * c.detection.t_near;
  return c;
}

// Small-scale part 1/(B^{-1}B^{-H})_{00} of the tagged gain for a full
// K-cluster draw. Useful for distributional checks.
inline double full_construction_gain(int N, int K, double m, CounterStream& rng) {
  std::vector<Eigen::VectorXcd> b;
  b.reserve(K);
  for (int j = 0; j < K; ++j) b.push_back(sample_cluster(N, K, m, rng).b);
  return effective_channel(b, 0, 1.0, 1.0).u_sq_near;
}

// K = N = 1 with real channel coefficients from the Box-Muller pair.
// The null space of [h_near, -h_far] is (h_far, h_near)/norm, |x|^2 = 2,
// and the gain is |b|^2 = 2 h_near^2 h_far^2 / (h_near^2 + h_far^2).
inline double real_scalar_alignment_gain(CounterStream& rng) {
  const double w1 = rng.uniform_pos();
  const double w2 = rng.uniform();
  const double r = std::sqrt(-2.0 * std::log(w1));
  const double h_near = r * std::cos(2.0 * std::numbers::pi * w2);
  const double h_far = r * std::sin(2.0 * std::numbers::pi * w2);
  channel::ChannelMatrix Hn(1, 1), Hf(1, 1);
  Hn(0, 0) = h_near;
  Hf(0, 0) = h_far;
  const Eigen::MatrixXcd D = null_space_basis(Hn, Hf);
  const Eigen::VectorXcd t = D * std::sqrt(2.0);
  const std::complex<double> b = std::conj(Hn(0, 0)) * t(0);
  return std::norm(b);
}

}  // namespace uavnoma::sigalign
