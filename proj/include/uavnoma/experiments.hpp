#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uavnoma/analytic.hpp"
#include "uavnoma/config.hpp"
#include "uavnoma/montecarlo.hpp"
#include "uavnoma/report.hpp"

namespace uavnoma::cli {

inline const std::vector<std::string>& outage_methods() {
  static const std::vector<std::string> m = {"mc_exact",       "mc_upper",           "mc_fast",
                                             "analytic_upper", "analytic_asymptotic", "analytic_exact"};
  return m;
}

inline const std::vector<std::string>& rate_methods() {
  static const std::vector<std::string> m = {"mc", "theorem3", "theorem4_series", "corollary4_exact"};
  return m;
}

inline void check_methods(const std::vector<std::string>& requested, Metric metric) {
  const auto& known = metric == Metric::outage ? outage_methods() : rate_methods();
  for (const auto& m : requested)
    if (std::find(known.begin(), known.end(), m) == known.end())
      throw ConfigError("run.methods: '" + m + "' is not a " + (metric == Metric::outage ? "outage" : "rate") +
                        " method");
}

struct Evaluation {
  std::vector<Row> rows;
  std::vector<std::string> warnings;
};

namespace detail {

inline bool requested(const std::vector<std::string>& methods, std::string_view m) {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

inline bool wanted(const std::vector<std::string>& methods, std::string_view m) {
  return methods.empty() || requested(methods, m);
}

inline Row analytic_row(double x, const char* user, std::string method, double v, const mc::ScenarioConfig& cfg,
                        bool feasible) {
  return {x, user, std::move(method), v, 0.0, 0, cfg.seed, feasible};
}

inline std::vector<mc::Mode> mc_modes(const std::vector<std::string>& methods, mc::Mode fallback) {
  if (methods.empty()) return {fallback};
  std::vector<mc::Mode> out;
  for (auto m : {mc::Mode::exact, mc::Mode::upper_bound, mc::Mode::fast})
    if (requested(methods, std::string("mc_") + mc::to_string(m))) out.push_back(m);
  return out;
}

}  // namespace detail

// Rows for one scenario point. Users are emitted far first, then near,
// each in the fixed method order of outage_methods() / rate_methods().
inline Evaluation evaluate_point(const Settings& s, const mc::ScenarioConfig& cfg, double x, Metric metric,
                                 const std::string& suffix = "") {
  Evaluation ev;
  for (auto& w : cfg.validate()) ev.warnings.push_back(std::move(w));
  const bool feasible = cfg.feasible();
  const auto in = analytic::make_inputs(cfg, s.analytic.strict);
  const auto& want = s.methods;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  if (metric == Metric::outage) {
    struct McOut {
      std::string method;
      mc::SimulationSummary sum;
    };
    std::vector<McOut> mcs;
    for (auto mode : detail::mc_modes(want, cfg.mode)) {
      McOut o{std::string("mc_") + mc::to_string(mode), {}};
      if (feasible) {
        auto c = cfg;
        c.mode = mode;
        o.sum = mc::simulate(c);
      } else {
        o.sum.feasible = false;
        o.sum.far_outage = o.sum.near_outage = {1.0, 0.0, cfg.trials, {}};
      }
      mcs.push_back(std::move(o));
    }
    const bool interf = in.interference_active();
    if (interf && detail::requested(want, "analytic_exact"))
      throw std::domain_error("analytic_exact: closed form holds only without interference");
    for (auto user : {mc::User::far, mc::User::near}) {
      const bool far = user == mc::User::far;
      const char* u = mc::to_string(user);
      for (const auto& o : mcs) {
        const auto& e = far ? o.sum.far_outage : o.sum.near_outage;
        ev.rows.push_back({x, u, o.method + suffix, e.value, e.std_error, e.trials, cfg.seed, feasible});
      }
      if (detail::wanted(want, "analytic_upper"))
        ev.rows.push_back(detail::analytic_row(
            x, u, "analytic_upper" + suffix,
            far ? analytic::outage_far_upper(in, s.analytic) : analytic::outage_near_upper(in, s.analytic), cfg,
            feasible));
      if (detail::wanted(want, "analytic_asymptotic"))
        ev.rows.push_back(detail::analytic_row(
            x, u, "analytic_asymptotic" + suffix,
            far ? analytic::outage_far_asymptotic(in) : analytic::outage_near_asymptotic(in), cfg, feasible));
      if (!interf && detail::wanted(want, "analytic_exact"))
        ev.rows.push_back(detail::analytic_row(x, u, "analytic_exact" + suffix,
                                               far ? analytic::outage_far_exact_no_interference(in)
                                                   : analytic::outage_near_exact_no_interference(in),
                                               cfg, feasible));
    }
    return ev;
  }

  const bool alpha3 = cfg.fading.alpha == 3.0;
  if (!alpha3 && detail::requested(want, "corollary4_exact"))
    throw std::domain_error("corollary4_exact: requires fading.alpha = 3");
  mc::SimulationSummary sum;
  const bool run_mc = detail::wanted(want, "mc");
  if (run_mc) sum = mc::simulate(cfg);

  // Formula failures become NaN rows so the grid stays rectangular.
  auto formula = [&](const char* user, const char* method, auto fn) {
    double v = nan;
    try {
      v = fn();
    } catch (const std::domain_error&) {
      if (feasible) throw;
    } catch (const ConvergenceError& e) {
      ev.warnings.push_back(std::string(method) + " at axis value " + format_number(x) + ": " + e.what());
    }
    ev.rows.push_back(detail::analytic_row(x, user, method + suffix, v, cfg, feasible));
  };

  if (run_mc)
    ev.rows.push_back({x, "far", "mc" + suffix, sum.far_rate.value, sum.far_rate.std_error, sum.far_rate.trials,
                       cfg.seed, feasible});
  if (detail::wanted(want, "theorem3")) formula("far", "theorem3", [&] { return analytic::ergodic_far(in); });
  if (run_mc)
    ev.rows.push_back({x, "near", "mc" + suffix, sum.near_rate.value, sum.near_rate.std_error, sum.near_rate.trials,
                       cfg.seed, feasible});
  if (detail::wanted(want, "theorem4_series"))
    formula("near", "theorem4_series", [&] { return analytic::ergodic_near_highsnr_series(in, s.analytic); });
  if (alpha3 && detail::wanted(want, "corollary4_exact"))
    formula("near", "corollary4_exact", [&] { return analytic::ergodic_near_exact_alpha3(in); });
  return ev;
}

// All points of the configured sweep; without sweep values the current
// scenario is a single point on the configured axis.
inline Evaluation evaluate_sweep(const Settings& s, Metric metric) {
  check_methods(s.methods, metric);
  std::vector<double> values = s.sweep.values;
  if (values.empty()) values.push_back(axis_value(s.scenario, s.sweep.axis));
  SweepSpec spec{s.sweep.axis, values};
  spec.validate();
  Evaluation all;
  for (double x : values) {
    auto ev = evaluate_point(s, apply_axis(s.scenario, s.sweep.axis, x), x, metric);
    all.rows.insert(all.rows.end(), ev.rows.begin(), ev.rows.end());
    for (auto& w : ev.warnings)
      if (std::find(all.warnings.begin(), all.warnings.end(), w) == all.warnings.end()) all.warnings.push_back(w);
  }
  return all;
}

struct Panel {
  std::string label;  // appended to method names as "@label"
  mc::ScenarioConfig cfg;
  std::vector<std::string> users;  // empty: both
};

struct FigureSpec {
  std::string name;
  std::string title;
  Metric metric = Metric::outage;
  SweepAxis axis = SweepAxis::rho_db;
  std::vector<double> values;
  std::vector<Panel> panels;
  bool slopes = false;  // add local high-SNR slope rows
};

inline const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> n = {"fig2", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b", "fig6"};
  return n;
}

inline std::vector<double> grid(double first, double step, double last) {
  std::vector<double> v;
  for (int i = 0; first + i * step <= last + 1e-9; ++i) v.push_back(first + i * step);
  return v;
}

// Presets. Run-level settings (seed, trials, mode) and any parameter not
// named here come from the base scenario.
inline FigureSpec figure_spec(const std::string& name, const mc::ScenarioConfig& base) {
  using IM = sigalign::InterferenceMode;
  auto with = [&](double m, IM mode, double P_I_dbm = 30.0) {
    auto c = base;
    c.fading.m = m;
    c.power.interference = mode;
    c.power.P_I_dbm = P_I_dbm;
    return c;
  };
  FigureSpec f;
  f.name = name;
  if (name == "fig2") {
    f.title = "Outage vs transmit SNR, m = 1";
    f.values = grid(10, 5, 60);
    f.panels = {{"interference=off", with(1, IM::off), {}},
                {"P_I=20dBm", with(1, IM::fixed, 20), {}},
                {"P_I=30dBm", with(1, IM::fixed, 30), {}},
                {"interference=proportional", with(1, IM::proportional), {}}};
  } else if (name == "fig5a") {
    f.title = "Outage vs transmit SNR, LoS and NLoS";
    f.values = grid(10, 5, 60);
    for (double m : {1.0, 2.0}) {
      const std::string ms = "m=" + format_number(m);
      f.panels.push_back({ms + ",interference=off", with(m, IM::off), {}});
      f.panels.push_back({ms + ",P_I=30dBm", with(m, IM::fixed), {}});
    }
  } else if (name == "fig3a") {
    f.title = "Outage vs UAV height and target rate, m = 2, 60 dB";
    f.axis = SweepAxis::height;
    f.values = grid(0, 5, 50);
    for (double R : {0.5, 1.0, 1.5, 2.0, 2.5}) {
      auto c = with(2, IM::fixed);
      c.power.rho_db = 60;
      c.rates.R_near = c.rates.R_far = R;
      f.panels.push_back({"R=" + format_number(R), c, {}});
    }
  } else if (name == "fig3b") {
    f.title = "Outage vs UAV height and radius, m = 2, R = 1";
    f.axis = SweepAxis::height;
    f.values = grid(0, 5, 50);
    for (double R_d : {10.0, 20.0, 30.0, 40.0}) {
      auto c = with(2, IM::fixed);
      c.power.rho_db = 60;
      c.rates.R_near = c.rates.R_far = 1.0;
      c.geometry.R_d = R_d;
      c.geometry.R_m = R_d / 2;
      f.panels.push_back({"R_d=" + format_number(R_d), c, {}});
    }
  } else if (name == "fig4a" || name == "fig4b") {
    const double m = name == "fig4a" ? 1.0 : 2.0;
    f.title = "Ergodic rate vs transmit SNR, m = " + format_number(m);
    f.metric = Metric::rate;
    f.values = grid(0, 5, 60);
    f.panels = {{"interference=off", with(m, IM::off), {}}, {"P_I=30dBm", with(m, IM::fixed), {}}};
  } else if (name == "fig5b") {
    f.title = "Near-user ergodic rate, LoS and NLoS";
    f.metric = Metric::rate;
    f.values = grid(0, 5, 60);
    f.panels = {{"m=1", with(1, IM::off), {"near"}}, {"m=2", with(2, IM::off), {"near"}}};
  } else if (name == "fig6") {
    f.title = "High-SNR slope vs transmit SNR";
    f.metric = Metric::rate;
    f.values = grid(0, 5, 60);
    f.slopes = true;
    f.panels = {{"m=1", with(1, IM::off), {}}, {"m=2", with(2, IM::off), {}}};
  } else {
    throw ConfigError("unknown figure '" + name + "' (fig2, fig3a, fig3b, fig4a, fig4b, fig5a, fig5b, fig6)");
  }
  return f;
}

// Slope of each rate series between consecutive grid points, reported at
// the upper point of each pair.
inline std::vector<Row> slope_rows(const std::vector<Row>& rows) {
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& r : rows)
    if (std::find(keys.begin(), keys.end(), std::pair{r.user, r.method}) == keys.end())
      keys.emplace_back(r.user, r.method);
  std::vector<Row> out;
  for (const auto& [user, method] : keys) {
    const Row* prev = nullptr;
    for (const auto& r : rows) {
      if (r.user != user || r.method != method) continue;
      if (prev) {
        const std::pair<double, double> pts[] = {{prev->axis_value, prev->value}, {r.axis_value, r.value}};
        const double v = std::isfinite(prev->value) && std::isfinite(r.value)
                             ? mc::fit_snr_slope(pts).slope
                             : std::numeric_limits<double>::quiet_NaN();
        out.push_back({r.axis_value, user, "slope_" + method, v, 0.0, 0, r.seed, r.feasible && prev->feasible});
      }
      prev = &r;
    }
  }
  return out;
}

inline Evaluation evaluate_figure(const FigureSpec& f, const Settings& s) {
  Evaluation all;
  for (const auto& p : f.panels) {
    Settings ps = s;
    ps.scenario = p.cfg;
    for (double x : f.values) {
      auto ev = evaluate_point(ps, apply_axis(p.cfg, f.axis, x), x, f.metric, "@" + p.label);
      for (auto& r : ev.rows)
        if (p.users.empty() || std::find(p.users.begin(), p.users.end(), r.user) != p.users.end())
          all.rows.push_back(std::move(r));
      for (auto& w : ev.warnings)
        if (std::find(all.warnings.begin(), all.warnings.end(), w) == all.warnings.end()) all.warnings.push_back(w);
    }
  }
  if (f.slopes) {
    auto extra = slope_rows(all.rows);
    all.rows.insert(all.rows.end(), extra.begin(), extra.end());
  }
  return all;
}

}  // namespace uavnoma::cli
