#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "uavnoma/analytic.hpp"
#include "uavnoma/config.hpp"
#include "uavnoma/montecarlo.hpp"
#include "uavnoma/quadrature.hpp"
#include "uavnoma/rng.hpp"
#include "uavnoma/sigalign.hpp"
#include "uavnoma/specfun.hpp"

namespace uavnoma::validation {

enum class Level { quick, full };

inline const char* to_string(Level l) { return l == Level::quick ? "quick" : "full"; }

struct Check {
  std::string name;
  double measured = 0.0;
  std::string relation;  // "<=" or ">="
  double tolerance = 0.0;
  bool pass = false;
  bool timing = false;  // wall-clock checks stay out of the CSV
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  std::string error;  // exception text, if the criterion could not run
  double seconds = 0.0;

  bool pass() const {
    return error.empty() && !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

struct Report {
  Level level = Level::quick;
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;
  double seconds = 0.0;

  bool pass() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass(); });
  }
};

inline constexpr int criterion_count = 10;

inline std::uint64_t trials_for(Level l) { return l == Level::quick ? 10000 : 1000000; }

namespace detail {

using clock = std::chrono::steady_clock;

inline double since(clock::time_point t0) {
  return std::chrono::duration<double>(clock::now() - t0).count();
}

inline Check at_most(std::string name, double measured, double tol) {
  return {std::move(name), measured, "<=", tol, measured <= tol, false};
}

inline Check at_least(std::string name, double measured, double tol) {
  return {std::move(name), measured, ">=", tol, measured >= tol, false};
}

inline Check timing(std::string name, double seconds, double budget) {
  return {std::move(name), seconds, "<=", budget, seconds <= budget, true};
}

// |a - b| in units of sigma; zero difference with zero sigma counts as 0.
inline double z_score(double a, double b, double sigma) {
  const double d = std::abs(a - b);
  if (d == 0.0) return 0.0;
  return sigma > 0.0 ? d / sigma : std::numeric_limits<double>::infinity();
}

inline std::string rho_tag(double db) { return "rho=" + cli::format_number(db); }

inline mc::ScenarioConfig base_scenario(Level level, std::uint64_t seed) {
  mc::ScenarioConfig c;
  c.trials = trials_for(level);
  c.seed = seed;
  c.mode = mc::Mode::fast;
  return c;
}

inline double binomial_sigma(double p, std::uint64_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

inline void closed_form_agreement(CriterionResult& r, Level level, std::uint64_t seed) {
  for (double db : {30.0, 40.0, 50.0, 60.0}) {
    auto cfg = base_scenario(level, seed);
    cfg.power.rho_db = db;
    const auto in = analytic::make_inputs(cfg);
    const auto t0 = clock::now();
    const auto sum = mc::simulate(cfg);
    const double secs = since(t0);
    const double pf = analytic::outage_far_exact_no_interference(in);
    const double pn = analytic::outage_near_exact_no_interference(in);
    r.checks.push_back(at_most("far " + rho_tag(db) + " |mc-closed|/sigma",
                               z_score(sum.far_outage.value, pf, binomial_sigma(pf, cfg.trials)), 3.0));
    r.checks.push_back(at_most("near " + rho_tag(db) + " |mc-closed|/sigma",
                               z_score(sum.near_outage.value, pn, binomial_sigma(pn, cfg.trials)), 3.0));
    r.checks.push_back(timing("runtime both users " + rho_tag(db) + " s", secs, 60.0));
  }
}

inline void diversity_order(CriterionResult& r, Level level, std::uint64_t seed) {
  std::vector<std::pair<double, double>> far, near;
  for (double db : {50.0, 55.0, 60.0}) {
    auto cfg = base_scenario(level, seed);
    cfg.power.rho_db = db;
    const auto in = analytic::make_inputs(cfg);
    far.emplace_back(db, analytic::outage_far_exact_no_interference(in));
    near.emplace_back(db, analytic::outage_near_exact_no_interference(in));
  }
  r.checks.push_back(at_most("far |slope-1|", std::abs(mc::fit_diversity_order(far).slope - 1.0), 0.05));
  r.checks.push_back(at_most("near |slope-1|", std::abs(mc::fit_diversity_order(near).slope - 1.0), 0.05));
}

inline void error_floor(CriterionResult& r, Level level, std::uint64_t seed) {
  std::vector<mc::SimulationSummary> runs;
  const double grid[] = {40.0, 50.0, 60.0};
  for (double db : grid) {
    auto cfg = base_scenario(level, seed);
    cfg.power.rho_db = db;
    cfg.power.interference = sigalign::InterferenceMode::proportional;
    cfg.power.kappa = 0.01;
    runs.push_back(mc::simulate(cfg));
  }
  for (auto user : {mc::User::far, mc::User::near}) {
    auto pick = [&](const mc::SimulationSummary& s) { return user == mc::User::far ? s.far_outage : s.near_outage; };
    const auto a = pick(runs.front()), b = pick(runs.back());
    const double sigma = std::hypot(a.std_error, b.std_error);
    const std::string u = mc::to_string(user);
    r.checks.push_back(at_most(u + " |p40-p60|/sigma", z_score(a.value, b.value, sigma), 5.0));
    std::vector<std::pair<double, double>> curve;
    for (std::size_t i = 0; i < runs.size(); ++i) curve.emplace_back(grid[i], pick(runs[i]).value);
    r.checks.push_back(at_most(u + " |slope|", std::abs(mc::fit_diversity_order(curve).slope), 0.1));
  }
}

inline void far_rate_ceiling(CriterionResult& r, Level level, std::uint64_t seed) {
  auto cfg = base_scenario(level, seed);
  cfg.power.rho_db = 60.0;
  const double th3 = analytic::ergodic_far(analytic::make_inputs(cfg));
  r.checks.push_back(at_most("|theorem3-2|/2", std::abs(th3 - 2.0) / 2.0, 0.01));
  const auto sum = mc::simulate(cfg);
  r.checks.push_back(at_most("|mc-theorem3|/stderr", z_score(sum.far_rate.value, th3, sum.far_rate.std_error), 2.0));
}

inline void near_exact_rate(CriterionResult& r, Level level, std::uint64_t seed) {
  for (double m : {1.0, 2.0})
    for (double db : {40.0, 60.0}) {
      auto cfg = base_scenario(level, seed);
      cfg.fading.m = m;
      cfg.power.rho_db = db;
      const double cor4 = analytic::ergodic_near_exact_alpha3(analytic::make_inputs(cfg));
      const auto sum = mc::simulate(cfg);
      r.checks.push_back(at_most("m=" + cli::format_number(m) + " " + rho_tag(db) + " |mc-corollary4|/stderr",
                                 z_score(sum.near_rate.value, cor4, sum.near_rate.std_error), 2.0));
    }
  for (double m : {1.0, 2.0})
    for (double db : {50.0, 60.0}) {
      auto cfg = base_scenario(level, seed);
      cfg.fading.m = m;
      cfg.power.rho_db = db;
      const auto in = analytic::make_inputs(cfg);
      const double cor4 = analytic::ergodic_near_exact_alpha3(in);
      const double series = analytic::ergodic_near_highsnr_series(in);
      r.checks.push_back(at_most("m=" + cli::format_number(m) + " " + rho_tag(db) + " |series-corollary4|/corollary4",
                                 std::abs(series - cor4) / cor4, 1e-3));
    }
}

inline void high_snr_slopes(CriterionResult& r, Level level, std::uint64_t seed) {
  std::vector<std::pair<double, double>> far, near;
  for (double db : {50.0, 60.0}) {
    auto cfg = base_scenario(level, seed);
    cfg.power.rho_db = db;
    const auto in = analytic::make_inputs(cfg);
    far.emplace_back(db, analytic::ergodic_far(in));
    near.emplace_back(db, analytic::ergodic_near_exact_alpha3(in));
  }
  r.checks.push_back(at_most("far |slope|", std::abs(mc::fit_snr_slope(far).slope), 0.02));
  r.checks.push_back(at_most("near |slope-1|", std::abs(mc::fit_snr_slope(near).slope - 1.0), 0.05));
}

inline mc::ScenarioConfig interference_scenario(Level level, std::uint64_t seed) {
  auto cfg = base_scenario(level, seed);
  cfg.power.interference = sigalign::InterferenceMode::fixed;
  cfg.power.P_I_dbm = 30.0;
  cfg.power.delta = cfg.N;
  return cfg;
}

inline void upper_bound_integrity(CriterionResult& r, Level level, std::uint64_t seed) {
  auto cfg = interference_scenario(level, seed);
  cfg.power.rho_db = 60.0;
  cfg.mode = mc::Mode::upper_bound;
  const auto in = analytic::make_inputs(cfg);
  const double t1 = analytic::outage_far_upper(in), t2 = analytic::outage_near_upper(in);
  const auto sum = mc::simulate(cfg);
  r.checks.push_back(at_most("far |mc_upper-theorem1|/theorem1", std::abs(sum.far_outage.value - t1) / t1, 0.05));
  r.checks.push_back(at_most("near |mc_upper-theorem2|/theorem2", std::abs(sum.near_outage.value - t2) / t2, 0.05));
  std::uint64_t violations = 0;
  for (double db = 15.0; db <= 60.0; db += 5.0) {
    auto c = interference_scenario(level, seed);
    c.power.rho_db = db;
    c.trials = std::max<std::uint64_t>(1000, c.trials / 10);
    violations += mc::compare_modes(c).violations;
  }
  r.checks.push_back(at_most("paired trials with upper < exact", static_cast<double>(violations), 0.0));
}

// Kolmogorov-Smirnov distance of the sample to Exp(mean).
inline double ks_exponential(std::vector<double> xs, double mean) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = -std::expm1(-xs[i] / mean);
    d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
  }
  return d;
}

inline void lemma_distribution(CriterionResult& r, Level, std::uint64_t seed) {
  const std::size_t n = 100000;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterStream rng(seed, i, StreamRole::lemma);
    g[i] = sigalign::real_scalar_alignment_gain(rng);
  }
  r.checks.push_back(at_most("KS distance to Exp(mean 0.5)", ks_exponential(std::move(g), 0.5), 0.015));
}

inline void special_functions(CriterionResult& r, Level, std::uint64_t) {
  double worst = 0.0;
  for (double x : {0.0, 1e-8, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0})
    worst = std::max(worst, std::abs(specfun::lower_incomplete_gamma(1.0, x) + std::expm1(-x)));
  r.checks.push_back(at_most("max |gamma(1,x)-(1-e^-x)|", worst, 1e-12));

  // Gamma(s) - gamma(s,x) is the upper tail, bounded by
  // x^{s-1} e^{-x} x / (x - max(0, s-1)) up to rounding of Gamma(s).
  worst = 0.0;
  double drop = 0.0;
  for (double s : {1.0 / 3, 2.0 / 3, 5.0 / 3}) {
    const double x = 50 * s;
    const double tail = std::tgamma(s) - specfun::lower_incomplete_gamma(s, x);
    const double bound = std::pow(x, s - 1) * std::exp(-x) * x / (x - std::max(0.0, s - 1));
    const double ulps = 4 * std::numeric_limits<double>::epsilon() * std::tgamma(s);
    worst = std::max(worst, std::abs(tail) / (bound + ulps));
    double prev = 0.0;
    for (int k = 1; k <= 500; ++k) {
      const double g = specfun::lower_incomplete_gamma(s, x * k / 500.0);
      drop = std::max(drop, (prev - g) / std::tgamma(s));
      prev = g;
    }
  }
  r.checks.push_back(at_most("max (Gamma(s)-gamma(s,50s))/tail bound", worst, 1.0));
  r.checks.push_back(at_most("max relative decrease of gamma(s,x) on [0,50s]", drop, 1e-15));

  // Quadrature path: t = v^{1/s} turns the integrand into the smooth
  // e^{-v^{1/s}} / s on [0, x^s].
  QuadratureControl q;
  q.abs_tol = 1e-15;
  q.rel_tol = 1e-13;
  worst = 0.0;
  for (double s : {1.0 / 3, 2.0 / 3, 5.0 / 3})
    for (int k = 1; k <= 10; ++k) {
      const double x = 0.5 * k;
      const double quad = integrate([s](double v) { return std::exp(-std::pow(v, 1.0 / s)) / s; }, 0.0,
                                    std::pow(x, s), q);
      const double series = specfun::lower_incomplete_gamma_small_x(s, x);
      worst = std::max(worst, std::abs(series - quad) / quad);
    }
  r.checks.push_back(at_most("max rel |series-quadrature| gamma", worst, 1e-10));

  worst = 0.0;
  for (double x : {-5.0, -1.0, -0.1}) {
    const double h = 1e-5 * std::abs(x);
    const double fd = (specfun::exp_integral_ei(x + h) - specfun::exp_integral_ei(x - h)) / (2 * h);
    const double exact = std::exp(x) / x;
    worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
  }
  r.checks.push_back(at_most("max rel |dEi/dx-e^x/x|", worst, 1e-6));

  worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double z = std::pow(10.0, -3.0 + 6.0 * i / 9.0);
    const double g = specfun::meijer_g_2232(z);
    const double ref = std::cbrt(1.0 / z) * specfun::j_integral(1.0 / z);
    worst = std::max(worst, std::abs(g - ref) / std::abs(ref));
  }
  r.checks.push_back(at_most("max rel |meijer-j_integral identity|", worst, 1e-6));
}

}  // namespace detail

inline const char* criterion_title(int id) {
  static const char* titles[] = {"",
                                 "closed-form outage agreement without interference",
                                 "diversity order of the exact outage curves",
                                 "error floor under proportional interference",
                                 "far-user rate ceiling",
                                 "near-user exact rate",
                                 "high-SNR slopes",
                                 "upper-bound integrity with interference",
                                 "effective gain distribution of the alignment construction",
                                 "special function identities",
                                 "quick validation reproducibility"};
  return id >= 1 && id <= criterion_count ? titles[id] : "unknown";
}

inline std::string checks_csv(const Report& report);

inline Report run(Level level, std::uint64_t seed, const std::vector<int>& ids);

inline CriterionResult run_criterion(int id, Level level, std::uint64_t seed) {
  CriterionResult r;
  r.id = id;
  r.title = criterion_title(id);
  const auto t0 = detail::clock::now();
  try {
    switch (id) {
      case 1: detail::closed_form_agreement(r, level, seed); break;
      case 2: detail::diversity_order(r, level, seed); break;
      case 3: detail::error_floor(r, level, seed); break;
      case 4: detail::far_rate_ceiling(r, level, seed); break;
      case 5: detail::near_exact_rate(r, level, seed); break;
      case 6: detail::high_snr_slopes(r, level, seed); break;
      case 7: detail::upper_bound_integrity(r, level, seed); break;
      case 8: detail::lemma_distribution(r, level, seed); break;
      case 9: detail::special_functions(r, level, seed); break;
      case 10: {
        // Two quick runs of the other criteria: each within budget and
        // with byte-identical CSV output.
        std::vector<int> rest;
        for (int i = 1; i < criterion_count; ++i) rest.push_back(i);
        const auto a = run(Level::quick, seed, rest);
        const auto b = run(Level::quick, seed, rest);
        r.checks.push_back(detail::timing("quick run 1 s", a.seconds, 60.0));
        r.checks.push_back(detail::timing("quick run 2 s", b.seconds, 60.0));
        r.checks.push_back(detail::at_least("csv byte-identical", checks_csv(a) == checks_csv(b) ? 1.0 : 0.0, 1.0));
        break;
      }
      default: throw std::invalid_argument("no criterion " + std::to_string(id));
    }
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = detail::since(t0);
  return r;
}

inline Report run(Level level, std::uint64_t seed, const std::vector<int>& ids) {
  Report rep;
  rep.level = level;
  rep.seed = seed;
  const auto t0 = detail::clock::now();
  for (int id : ids) rep.criteria.push_back(run_criterion(id, level, seed));
  rep.seconds = detail::since(t0);
  return rep;
}

inline std::vector<int> all_criteria() {
  std::vector<int> ids;
  for (int i = 1; i <= criterion_count; ++i) ids.push_back(i);
  return ids;
}

// criterion,check,measured,relation,tolerance,pass. Timings are left out
// so that two runs with the same seed produce the same bytes.
inline std::string checks_csv(const Report& report) {
  std::ostringstream os;
  os << "criterion,check,measured,relation,tolerance,pass\n";
  for (const auto& c : report.criteria) {
    if (!c.error.empty()) os << c.id << ",error," << "nan,,," << 0 << '\n';
    for (const auto& k : c.checks) {
      if (k.timing) continue;
      os << c.id << ",\"" << k.name << "\"," << cli::format_number(k.measured) << ',' << k.relation << ','
         << cli::format_number(k.tolerance) << ',' << (k.pass ? 1 : 0) << '\n';
    }
  }
  return os.str();
}

inline std::string summary_line(const CriterionResult& c) {
  std::ostringstream os;
  os << (c.pass() ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title;
  if (!c.error.empty()) {
    os << " [error: " << c.error << "]";
    return os.str();
  }
  for (const auto& k : c.checks)
    if (!k.pass) {
      os << " [" << k.name << " = " << cli::format_number(k.measured) << ", need " << k.relation << ' '
         << cli::format_number(k.tolerance) << "]";
      break;
    }
  return os.str();
}

}  // namespace uavnoma::validation
