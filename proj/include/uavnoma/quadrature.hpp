#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavnoma/errors.hpp"

namespace uavnoma {

struct SeriesControl {
  int max_terms = 2000;
  double rel_tol = 1e-15;

  void validate() const {
    if (max_terms < 1) throw std::invalid_argument("SeriesControl.max_terms must be >= 1");
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
      throw std::invalid_argument("SeriesControl.rel_tol must lie in (0, 1)");
  }
};

struct QuadratureControl {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  int max_subdivisions = 200;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
      throw std::invalid_argument("QuadratureControl tolerances must be > 0");
    if (max_subdivisions < 1)
      throw std::invalid_argument("QuadratureControl.max_subdivisions must be >= 1");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule.
inline constexpr double kronrod_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kronrod_w[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gauss_w[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
};

template <class F>
Segment gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kronrod_w[7];
  double g = fc * gauss_w[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kronrod_x[j];
    const double s = f(c - dx) + f(c + dx);
    k += kronrod_w[j] * s;
    if (j % 2 == 1) g += gauss_w[j / 2] * s;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod on a finite interval. Splits the
// segment with the largest error estimate until the total error meets
// max(abs_tol, rel_tol*|I|).
template <class F>
QuadratureResult integrate_gk(F f, double a, double b, const QuadratureControl& ctl = {}) {
  ctl.validate();
  if (a == b) return {};
  if (!std::isfinite(a) || !std::isfinite(b))
    throw std::domain_error("integrate_gk: bounds must be finite");
  std::vector<detail::Segment> segs{detail::gk15(f, a, b)};
  double value = segs[0].value;
  double error = segs[0].error;
  int splits = 0;
  while (error > std::max(ctl.abs_tol, ctl.rel_tol * std::abs(value))) {
    if (splits >= ctl.max_subdivisions)
      throw ConvergenceError("adaptive quadrature hit the subdivision limit (" +
                                 std::to_string(ctl.max_subdivisions) + ")",
                             value, error);
    auto worst = std::max_element(segs.begin(), segs.end(),
                                  [](const auto& x, const auto& y) { return x.error < y.error; });
    const double lo = worst->a, hi = worst->b, mid = 0.5 * (lo + hi);
    *worst = detail::gk15(f, lo, mid);
    segs.push_back(detail::gk15(f, mid, hi));
    ++splits;
    value = 0.0;
    error = 0.0;
    for (const auto& sg : segs) {
      value += sg.value;
      error += sg.error;
    }
  }
  return {value, error, splits};
}

template <class F>
double integrate(F f, double a, double b, const QuadratureControl& ctl = {}) {
  return integrate_gk(std::move(f), a, b, ctl).value;
}

}  // namespace uavnoma
