#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "uavnoma/quadrature.hpp"

namespace uavnoma::specfun {

namespace detail {

inline constexpr double eps = std::numeric_limits<double>::epsilon();
inline constexpr double tiny = 1e-300;
inline constexpr int max_iter = 100000;

// Modified Lentz evaluation of the continued fraction for Gamma(s,x)
// scaled by exp(x) x^{-s}. Converges quickly for x >= s+1.
inline double upper_gamma_cf(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < max_iter; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw ConvergenceError("upper incomplete gamma continued fraction did not converge", h, 0.0);
}

// gamma(s,x) e^x x^{-s} as the positive series sum x^n / (s (s+1) ... (s+n)).
inline double lower_gamma_series(double s, double x) {
  double ap = s;
  double del = 1.0 / s;
  double sum = del;
  for (int n = 1; n < max_iter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * eps) return sum;
  }
  throw ConvergenceError("lower incomplete gamma series did not converge", sum, del);
}

// e^x E1(x) for x > 1 by continued fraction.
inline double scaled_e1_cf(double x) {
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < max_iter; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw ConvergenceError("E1 continued fraction did not converge", h, 0.0);
}

// E1(x) for 0 < x <= 1.
inline double e1_series(double x) {
  double sum = 0.0;
  double fact = 1.0;
  for (int k = 1; k < max_iter; ++k) {
    fact *= -x / k;
    const double term = fact / k;
    sum += term;
    if (std::abs(term) < std::abs(sum) * eps) break;
  }
  return -std::numbers::egamma - std::log(x) - sum;
}

// Ei(x) for x > 0: convergent series up to 40, asymptotic expansion beyond.
inline double ei_positive(double x) {
  if (x <= 40.0) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < max_iter; ++k) {
      term *= x / k;
      const double add = term / k;
      sum += add;
      if (add < sum * eps) break;
    }
    return std::numbers::egamma + std::log(x) + sum;
  }
  double sum = 1.0;
  double term = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * k / x;
    if (next > term) break;
    term = next;
    sum += term;
    if (term < eps * sum) break;
  }
  return std::exp(x) / x * sum;
}

inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_p[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace detail

// log Gamma(z) for complex z, Lanczos with reflection. Only exp() of the
// result is meaningful: the imaginary part is not reduced to a branch.
inline std::complex<double> log_gamma(std::complex<double> z) {
  using C = std::complex<double>;
  constexpr double pi = std::numbers::pi;
  if (z.real() < 0.5) return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
  z -= 1.0;
  C x = detail::lanczos_p[0];
  for (int i = 1; i < 9; ++i) x += detail::lanczos_p[i] / (z + static_cast<double>(i));
  const C t = z + detail::lanczos_g + 0.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

inline double lower_incomplete_gamma(double s, double x) {
  if (!(s > 0.0)) throw std::domain_error("lower_incomplete_gamma: s must be > 0");
  if (!(x >= 0.0)) throw std::domain_error("lower_incomplete_gamma: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return std::tgamma(s);
  const double lead = std::exp(-x + s * std::log(x));
  if (x < s + 1.0) return lead * detail::lower_gamma_series(s, x);
  return std::tgamma(s) - lead * detail::upper_gamma_cf(s, x);
}

// Alternating power series sum (-1)^n x^{s+n} / (n! (s+n)).
inline double lower_incomplete_gamma_small_x(double s, double x, const SeriesControl& ctl = {}) {
  if (!(s > 0.0)) throw std::domain_error("lower_incomplete_gamma_small_x: s must be > 0");
  if (!(x >= 0.0)) throw std::domain_error("lower_incomplete_gamma_small_x: x must be >= 0");
  ctl.validate();
  if (x == 0.0) return 0.0;
  const double xs = std::pow(x, s);
  double p = 1.0;
  double sum = xs / s;
  for (int n = 1; n < ctl.max_terms; ++n) {
    p *= -x / n;
    const double term = xs * p / (s + n);
    sum += term;
    if (n > x && std::abs(term) <= ctl.rel_tol * std::abs(sum)) return sum;
  }
  throw ConvergenceError("small-x incomplete gamma series needs more than " +
                             std::to_string(ctl.max_terms) + " terms at x = " + std::to_string(x),
                         sum, 0.0);
}

// e^c E1(c) = -e^c Ei(-c) for c > 0, without overflow for large c.
inline double scaled_e1(double c) {
  if (!(c > 0.0)) throw std::domain_error("scaled_e1: argument must be > 0");
  if (c > 1.0) return detail::scaled_e1_cf(c);
  return std::exp(c) * detail::e1_series(c);
}

inline double exp_integral_ei(double x) {
  if (x == 0.0) throw std::domain_error("exp_integral_ei: logarithmic singularity at x = 0");
  if (std::isnan(x)) throw std::domain_error("exp_integral_ei: argument is NaN");
  if (x > 0.0) return detail::ei_positive(x);
  const double y = -x;
  if (y <= 1.0) return -detail::e1_series(y);
  return -std::exp(-y) * detail::scaled_e1_cf(y);
}

// int_0^inf x^{-2/3} gamma(5/3, c x) / (1 + x) dx. Split at x = 1; x = t^3
// on the left and x = v^{-3} on the right leave smooth integrands.
inline double j_integral(double c, const QuadratureControl& ctl = {}) {
  if (!(c > 0.0)) throw std::domain_error("j_integral: c must be > 0");
  constexpr double s = 5.0 / 3.0;
  auto left = [c](double t) {
    const double x = t * t * t;
    return 3.0 * lower_incomplete_gamma(s, c * x) / (1.0 + x);
  };
  auto right = [c](double v) {
    if (v == 0.0) return 0.0;
    const double v3 = v * v * v;
    return 3.0 * v * lower_incomplete_gamma(s, c / v3) / (1.0 + v3);
  };
  return integrate(left, 0.0, 1.0, ctl) + integrate(right, 0.0, 1.0, ctl);
}

// G^{2,2}_{3,2}(z | -1, 0, 2/3 ; -1/3, 0), the instance for which
// G(z) = z^{-1/3} j_integral(1/z). Evaluated from its Mellin-Barnes
// integral on Re s = -2/3 with the trapezoid rule, which converges
// geometrically for this analytic, exponentially decaying integrand.
inline double meijer_g_2232(double z) {
  if (!(z > 0.0)) throw std::domain_error("meijer_g_2232: z must be > 0");
  if (!std::isfinite(z)) throw std::domain_error("meijer_g_2232: z must be finite");
  using C = std::complex<double>;
  constexpr double c = -2.0 / 3.0;
  constexpr double step = 0.04;
  constexpr int n = 400;
  const double lz = std::log(z);
  auto f = [lz](double t) {
    const C s(c, t);
    const C lg = log_gamma(-1.0 / 3.0 - s) + log_gamma(-s) + log_gamma(2.0 + s) +
                 log_gamma(1.0 + s) - log_gamma(2.0 / 3.0 - s) + s * lz;
    return std::exp(lg).real();
  };
  double sum = 0.5 * f(0.0);
  for (int k = 1; k <= n; ++k) sum += f(k * step);
  return sum * step / std::numbers::pi;
}

}  // namespace uavnoma::specfun
