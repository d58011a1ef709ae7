#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "uavnoma/errors.hpp"
#include "uavnoma/geometry.hpp"
#include "uavnoma/montecarlo.hpp"
#include "uavnoma/quadrature.hpp"
#include "uavnoma/specfun.hpp"

namespace uavnoma::analytic {

// How the near-user high-SNR series is evaluated.
//   printed: coefficients exactly as published.
//   rederived: coefficients recomputed from the integration-by-parts
//     derivation, boundary terms dropped (high-SNR approximation).
//   rederived_with_boundary: same, boundary terms kept; exact for any SNR.
enum class NearSeriesForm { printed, rederived, rederived_with_boundary };

struct AnalyticOptions {
  QuadratureControl quad{};
  SeriesControl series{};
  // strict: the interference field enters through its exact Laplace
  // functional on [r_0, R_I] and its first-order (Campbell) expansion
  // instead of the published closed forms.
  bool strict = false;
  NearSeriesForm series_form = NearSeriesForm::printed;
};

struct AnalyticInputs {
  double h = 0, R_m = 0, R_d = 0, l_m = 0, l_d = 0;
  double m = 1, alpha = 3, rho = 1;
  double a_near_sq = 0, a_far_sq = 0;
  double eps_near = 0, eps_far = 0;
  double V_near = 0, V_far = 0, V_max = 0;
  bool feasible = true;
  double P_I = 0, delta = 1, lambda_I = 0, r_0 = 1, R_I = 1;
  bool strict = false;
  // (1 + ...) factors multiplying V in the asymptotic outage and in the
  // rate constants.
  double outage_factor = 1, rate_factor = 1;
  double T_far = 0, T_near = 0, Q_far = 0, C = 0, alpha_hat = 0;

  bool interference_active() const { return P_I > 0.0 && lambda_I > 0.0; }
  double phi(double x, double V) const { return 2.0 / m * V * delta * P_I * std::pow(x, alpha); }
};

inline double campbell_mean(double lambda_I, double r_0, double R_I, double alpha) {
  return 2.0 * std::numbers::pi * lambda_I *
         (std::pow(r_0, 2.0 - alpha) - std::pow(R_I, 2.0 - alpha)) / (alpha - 2.0);
}

inline AnalyticInputs make_inputs(const mc::ScenarioConfig& cfg, bool strict = false) {
  cfg.validate();
  const auto& g = cfg.geometry;
  const auto& p = cfg.power;
  AnalyticInputs in;
  in.h = g.h;
  in.R_m = g.R_m;
  in.R_d = g.R_d;
  in.l_m = g.l_m();
  in.l_d = g.l_d();
  in.m = cfg.fading.m;
  in.alpha = cfg.fading.alpha;
  in.rho = p.rho();
  in.a_near_sq = p.a_near_sq;
  in.a_far_sq = p.a_far_sq;
  in.eps_near = cfg.rates.eps_near();
  in.eps_far = cfg.rates.eps_far();
  in.feasible = cfg.feasible();
  const double inf = std::numeric_limits<double>::infinity();
  in.V_far = in.feasible ? in.eps_far / (in.rho * (in.a_far_sq - in.a_near_sq * in.eps_far)) : inf;
  in.V_near = in.a_near_sq > 0.0 ? in.eps_near / (in.rho * in.a_near_sq) : inf;
  in.V_max = std::max(in.V_far, in.V_near);
  in.P_I = p.interference_power();
  in.delta = p.delta;
  in.lambda_I = g.lambda_I;
  in.r_0 = g.r_0;
  in.R_I = g.R_I;
  in.strict = strict;
  const double pi = std::numbers::pi;
  if (strict) {
    in.outage_factor = in.rate_factor =
        1.0 + in.delta * in.P_I * campbell_mean(in.lambda_I, in.r_0, in.R_I, in.alpha);
  } else {
    in.outage_factor = 1.0 + pi * in.lambda_I * in.delta * in.P_I * in.alpha / in.r_0;
    in.rate_factor = 1.0 + pi * in.lambda_I * in.delta * in.P_I / (in.alpha * in.r_0);
  }
  in.T_far = 2.0 / in.m * in.V_far * in.outage_factor;
  in.T_near = 2.0 / in.m * in.V_max * in.outage_factor;
  in.Q_far = 4.0 * in.rate_factor * (std::pow(in.l_d, in.alpha + 2) - std::pow(in.l_m, in.alpha + 2)) /
             (in.m * in.rho * (in.R_d * in.R_d - in.R_m * in.R_m) * (in.alpha + 2));
  in.C = in.a_near_sq > 0.0 ? 2.0 * in.rate_factor / (in.m * in.rho * in.a_near_sq) : inf;
  in.alpha_hat = in.a_near_sq > 0.0 ? in.a_far_sq / in.a_near_sq : inf;
  return in;
}

// -log of the interference Laplace factor.
inline double laplace_exponent(double phi, const geometry::GeometryConfig& g, double alpha,
                               bool strict = false) {
  if (!(phi >= 0.0)) throw std::domain_error("laplace_interference_factor: phi must be >= 0");
  if (phi == 0.0 || g.lambda_I == 0.0) return 0.0;
  const double pi = std::numbers::pi;
  const double t0 = phi / std::pow(g.r_0, alpha);
  if (!strict)
    return g.lambda_I * pi * std::pow(phi, 2.0 / alpha) *
           specfun::lower_incomplete_gamma(1.0 / alpha, t0);
  const double s = 1.0 - 2.0 / alpha;
  const double tR = phi / std::pow(g.R_I, alpha);
  const double gamma_part = std::pow(phi, 2.0 / alpha) * (specfun::lower_incomplete_gamma(s, t0) -
                                                          specfun::lower_incomplete_gamma(s, tR));
  const double edge = g.R_I * g.R_I * -std::expm1(-tR) - g.r_0 * g.r_0 * -std::expm1(-t0);
  return g.lambda_I * pi * (gamma_part + edge);
}

inline double laplace_interference_factor(double phi, const geometry::GeometryConfig& g, double alpha,
                                          bool strict = false) {
  return std::exp(-laplace_exponent(phi, g, alpha, strict));
}

namespace detail {

inline geometry::GeometryConfig field_of(const AnalyticInputs& in) {
  geometry::GeometryConfig g;
  g.h = in.h;
  g.R_m = in.R_m;
  g.R_d = in.R_d;
  g.r_0 = in.r_0;
  g.R_I = in.R_I;
  g.lambda_I = in.lambda_I;
  return g;
}

// (2/(b^2-a^2)) int_a^b (1 - exp(-(2/m)V x^alpha) Q(phi(x))) x dx. The
// outage itself is integrated when small and its complement when large, so
// the result stays in [0, 1] without clamping.
inline double outage_integral(const AnalyticInputs& in, double V, double a, double b,
                              double weight, const AnalyticOptions& opt) {
  const auto g = field_of(in);
  const bool interf = in.interference_active();
  auto exponent = [&](double x) {
    double e = 2.0 / in.m * V * std::pow(x, in.alpha);
    if (interf) e += laplace_exponent(in.phi(x, V), g, in.alpha, opt.strict);
    return e;
  };
  const double p = weight * integrate([&](double x) { return -std::expm1(-exponent(x)) * x; }, a, b, opt.quad);
  if (p <= 0.5) return p;
  return 1.0 - weight * integrate([&](double x) { return std::exp(-exponent(x)) * x; }, a, b, opt.quad);
}

inline void require_no_interference(const AnalyticInputs& in, const char* what) {
  if (in.interference_active())
    throw std::domain_error(std::string(what) + ": closed form holds only without interference");
}

inline void require_feasible(const AnalyticInputs& in, const char* what) {
  if (!in.feasible)
    throw std::domain_error(std::string(what) +
                            ": far-user target rate violates the decodability constraint");
}

// 1 - [x^2 e^{-c x^alpha}]_a^b / W - c^{-2/alpha} [gamma(2/alpha+1, c x^alpha)]_a^b / W
inline double exact_outage(double c, double alpha, double a, double b, double W) {
  const double s = 2.0 / alpha + 1.0;
  const double ca = c * std::pow(a, alpha), cb = c * std::pow(b, alpha);
  const double edge = b * b * std::exp(-cb) - a * a * std::exp(-ca);
  const double body = std::pow(c, -2.0 / alpha) *
                      (specfun::lower_incomplete_gamma(s, cb) - specfun::lower_incomplete_gamma(s, ca));
  return 1.0 - edge / W - body / W;
}

}  // namespace detail

inline double outage_far_upper(const AnalyticInputs& in, const AnalyticOptions& opt = {}) {
  if (!in.feasible) return 1.0;
  return detail::outage_integral(in, in.V_far, in.l_m, in.l_d, 2.0 / (in.R_d * in.R_d - in.R_m * in.R_m),
                                 opt);
}

inline double outage_far_asymptotic(const AnalyticInputs& in) {
  if (!in.feasible) return 1.0;
  const double a2 = in.alpha + 2.0;
  return 2.0 * in.T_far / (in.R_d * in.R_d - in.R_m * in.R_m) *
         (std::pow(in.l_d, a2) - std::pow(in.l_m, a2)) / a2;
}

inline double outage_far_exact_no_interference(const AnalyticInputs& in) {
  detail::require_no_interference(in, "outage_far_exact_no_interference");
  if (!in.feasible) return 1.0;
  return detail::exact_outage(2.0 / in.m * in.V_far, in.alpha, in.l_m, in.l_d,
                              in.R_d * in.R_d - in.R_m * in.R_m);
}

inline double outage_near_upper(const AnalyticInputs& in, const AnalyticOptions& opt = {}) {
  if (!in.feasible) return 1.0;
  return detail::outage_integral(in, in.V_max, in.h, in.l_m, 2.0 / (in.R_m * in.R_m), opt);
}

inline double outage_near_asymptotic(const AnalyticInputs& in) {
  if (!in.feasible) return 1.0;
  const double a2 = in.alpha + 2.0;
  return 2.0 * in.T_near / (in.R_m * in.R_m) * (std::pow(in.l_m, a2) - std::pow(in.h, a2)) / a2;
}

inline double outage_near_exact_no_interference(const AnalyticInputs& in) {
  detail::require_no_interference(in, "outage_near_exact_no_interference");
  if (!in.feasible) return 1.0;
  return detail::exact_outage(2.0 / in.m * in.V_max, in.alpha, in.h, in.l_m, in.R_m * in.R_m);
}

inline double ergodic_far(const AnalyticInputs& in) {
  detail::require_feasible(in, "ergodic_far");
  if (!std::isfinite(in.alpha_hat)) throw std::domain_error("ergodic_far: a_near_sq must be > 0");
  const double top = std::log2(1.0 + in.alpha_hat);
  return top + in.Q_far * in.alpha_hat * std::log2(1.0 + in.a_near_sq) - in.Q_far * top;
}

namespace detail {

// int_0^1 (1-t)^nu / (1+t) dt = sum_j 2^{-j-1} / (nu + j + 1)
inline double half_beta_sum(double nu) {
  double s = 0.0, w = 0.5;
  for (int j = 0; j < 200; ++j) {
    const double add = w / (nu + j + 1.0);
    s += add;
    if (add < 1e-17 * s) break;
    w *= 0.5;
  }
  return s;
}

// Sum over powers k of c = C l^alpha of the double series, with the inner
// sum done in closed form. Returns the sum without the l^2 prefactor.
inline double near_series_columns(double c, double alpha, NearSeriesForm form, const SeriesControl& ctl) {
  if (c == 0.0) return form == NearSeriesForm::printed ? alpha * half_beta_sum(2.0 / alpha)
                                                       : alpha / 2.0;
  const double a = 2.0 / alpha;
  double w = 1.0;  // c^k Gamma(a+1) / Gamma(a+1+k)
  double sum = 0.0, biggest = 0.0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    const double term = form == NearSeriesForm::printed ? alpha * w * half_beta_sum(a + k)
                                                        : (k % 2 ? -w : w) / (a + k);
    sum += term;
    biggest = std::max(biggest, std::abs(term));
    if (k > c && std::abs(term) <= ctl.rel_tol * std::abs(sum)) {
      if (biggest > 1e10 * std::abs(sum))
        throw ConvergenceError("near-user series: C*l^alpha = " + std::to_string(c) +
                                   " is outside the high-SNR regime (cancellation)",
                               sum, biggest * 1e-16);
      return sum;
    }
    w *= c / (a + 1.0 + k);
  }
  throw ConvergenceError("near-user series: no convergence within " + std::to_string(ctl.max_terms) +
                             " terms at C*l^alpha = " + std::to_string(c) +
                             (c > 1.0 ? " (low-SNR regime; the series needs C*l^alpha well below 1)" : ""),
                         sum, 0.0);
}

// e^c E1(c) sum_p (-c)^{p+1} / (a+1)_{p+1}: the boundary terms that the
// high-SNR approximation drops.
inline double near_series_boundary(double c, double alpha, const SeriesControl& ctl) {
  if (c == 0.0) return 0.0;
  const double a = 2.0 / alpha;
  double q = -c / (a + 1.0);
  double sum = 0.0, biggest = 0.0;
  for (int p = 0; p < ctl.max_terms; ++p) {
    sum += q;
    biggest = std::max(biggest, std::abs(q));
    if (p > c && std::abs(q) <= ctl.rel_tol * std::abs(sum)) {
      if (biggest > 1e10 * std::abs(sum))
        throw ConvergenceError("near-user boundary series: cancellation at C*l^alpha = " + std::to_string(c),
                               sum, biggest * 1e-16);
      return specfun::scaled_e1(c) * sum;
    }
    q *= -c / (a + 2.0 + p);
  }
  throw ConvergenceError("near-user boundary series: no convergence", sum, 0.0);
}

// l^2 e^{C l^alpha} E1(C l^alpha), zero at l = 0.
inline double ei_edge(double C, double l, double alpha) {
  if (l == 0.0) return 0.0;
  return l * l * specfun::scaled_e1(C * std::pow(l, alpha));
}

}  // namespace detail

inline double ergodic_near_highsnr_series(const AnalyticInputs& in, const AnalyticOptions& opt = {}) {
  detail::require_feasible(in, "ergodic_near_highsnr_series");
  opt.series.validate();
  if (!std::isfinite(in.C)) throw std::domain_error("ergodic_near_highsnr_series: a_near_sq must be > 0");
  const double C = in.C, al = in.alpha;
  auto S = [&](double l) {
    if (l == 0.0) return 0.0;
    const double c = C * std::pow(l, al);
    double s = l * l * detail::near_series_columns(c, al, opt.series_form, opt.series);
    if (opt.series_form == NearSeriesForm::rederived_with_boundary)
      s += l * l * detail::near_series_boundary(c, al, opt.series);
    return s;
  };
  const double edges = detail::ei_edge(C, in.l_m, al) - detail::ei_edge(C, in.h, al);
  return (edges + S(in.l_m) - S(in.h)) / (std::numbers::ln2 * in.R_m * in.R_m);
}

inline double ergodic_near_exact_alpha3(const AnalyticInputs& in) {
  if (in.alpha != 3.0) throw std::domain_error("ergodic_near_exact_alpha3: requires alpha = 3");
  detail::require_feasible(in, "ergodic_near_exact_alpha3");
  if (!std::isfinite(in.C)) throw std::domain_error("ergodic_near_exact_alpha3: a_near_sq must be > 0");
  const double C = in.C;
  auto meijer = [C](double l) {
    if (l == 0.0) return 0.0;
    return specfun::meijer_g_2232(1.0 / (C * l * l * l)) / (C * l);
  };
  const double edges = detail::ei_edge(C, in.l_m, 3.0) - detail::ei_edge(C, in.h, 3.0);
  return (edges + meijer(in.l_m) - meijer(in.h)) / (std::numbers::ln2 * in.R_m * in.R_m);
}

struct ReferenceConstants {
  double diversity_far_fixed = 1.0;
  double diversity_near_fixed = 1.0;
  double diversity_proportional = 0.0;
  double slope_far = 0.0;
  double slope_near = 1.0;
};

inline ReferenceConstants reference_constants() { return {}; }

}  // namespace uavnoma::analytic
