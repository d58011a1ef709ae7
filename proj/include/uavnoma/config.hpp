#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "uavnoma/analytic.hpp"
#include "uavnoma/errors.hpp"
#include "uavnoma/montecarlo.hpp"

namespace uavnoma::cli {

inline constexpr const char* tool_version = "0.1.0";

// Shortest round-trip decimal form, independent of locale and stream state.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string format_number(std::uint64_t v) { return std::to_string(v); }

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size() || !std::isfinite(v))
    throw ConfigError(std::string(key) + ": expected a finite number, got '" + std::string(text) + "'");
  return v;
}

inline std::uint64_t parse_u64(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size())
    throw ConfigError(std::string(key) + ": expected a nonnegative integer, got '" + std::string(text) + "'");
  return v;
}

inline bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(text) + "'");
}

inline std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

enum class SweepAxis { rho_db, height, radius, rate, interference };

inline const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::rho_db: return "rho_db";
    case SweepAxis::height: return "height";
    case SweepAxis::radius: return "radius";
    case SweepAxis::rate: return "rate";
    case SweepAxis::interference: return "interference";
  }
  return "?";
}

inline SweepAxis parse_axis(std::string_view key, std::string_view text) {
  text = trim(text);
  for (auto a : {SweepAxis::rho_db, SweepAxis::height, SweepAxis::radius, SweepAxis::rate,
                 SweepAxis::interference})
    if (text == to_string(a)) return a;
  throw ConfigError(std::string(key) + ": unknown axis '" + std::string(text) +
                    "' (rho_db, height, radius, rate, interference)");
}

// Items are numbers or inclusive ranges first:step:last.
inline std::vector<double> parse_values(std::string_view key, std::string_view text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_double(key, item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ConfigError(std::string(key) + ": range must be first:step:last");
    const double first = parse_double(key, std::string_view(item).substr(0, c1));
    const double step = parse_double(key, std::string_view(item).substr(c1 + 1, c2 - c1 - 1));
    const double last = parse_double(key, std::string_view(item).substr(c2 + 1));
    if (!(step > 0.0) || last < first) throw ConfigError(std::string(key) + ": range needs step > 0 and last >= first");
    const auto n = static_cast<long>(std::floor((last - first) / step + 1e-9));
    if (n > 100000) throw ConfigError(std::string(key) + ": range has too many points");
    for (long i = 0; i <= n; ++i) out.push_back(first + static_cast<double>(i) * step);
  }
  if (out.empty()) throw ConfigError(std::string(key) + ": at least one point is required");
  return out;
}

struct SweepSpec {
  SweepAxis axis = SweepAxis::rho_db;
  std::vector<double> values;

  void validate() const {
    if (values.empty()) throw ConfigError("sweep.values: at least one point is required");
    const bool up = values.size() < 2 || values[1] > values[0];
    for (std::size_t i = 1; i < values.size(); ++i)
      if (up ? !(values[i] > values[i - 1]) : !(values[i] < values[i - 1]))
        throw ConfigError("sweep.values: must be strictly monotone");
  }
};

enum class Metric { outage, rate };

struct Settings {
  mc::ScenarioConfig scenario;
  analytic::AnalyticOptions analytic;
  SweepSpec sweep;
  std::vector<std::string> methods;  // empty: every applicable method
  bool svg = true;
};

inline const char* to_string(sigalign::InterferenceMode m) {
  switch (m) {
    case sigalign::InterferenceMode::off: return "off";
    case sigalign::InterferenceMode::fixed: return "fixed";
    case sigalign::InterferenceMode::proportional: return "proportional";
  }
  return "?";
}

inline const char* to_string(analytic::NearSeriesForm f) {
  switch (f) {
    case analytic::NearSeriesForm::printed: return "printed";
    case analytic::NearSeriesForm::rederived: return "rederived";
    case analytic::NearSeriesForm::rederived_with_boundary: return "rederived_with_boundary";
  }
  return "?";
}

inline mc::Mode parse_mode(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "exact") return mc::Mode::exact;
  if (text == "upper" || text == "upper_bound") return mc::Mode::upper_bound;
  if (text == "fast") return mc::Mode::fast;
  throw ConfigError(std::string(key) + ": expected exact, upper or fast, got '" + std::string(text) + "'");
}

namespace detail {

struct Key {
  const char* name;
  std::function<void(Settings&, std::string_view)> set;
  std::function<std::string(const Settings&)> get;
};

inline std::string join_numbers(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
  return s;
}

#define UAVNOMA_NUM_KEY(NAME, FIELD)                                                          \
  Key {                                                                                       \
    NAME, [](Settings& s, std::string_view v) { s.FIELD = parse_double(NAME, v); },          \
        [](const Settings& s) { return format_number(static_cast<double>(s.FIELD)); }         \
  }

inline const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      UAVNOMA_NUM_KEY("geometry.h", scenario.geometry.h),
      UAVNOMA_NUM_KEY("geometry.R_d", scenario.geometry.R_d),
      UAVNOMA_NUM_KEY("geometry.R_m", scenario.geometry.R_m),
      UAVNOMA_NUM_KEY("geometry.r_0", scenario.geometry.r_0),
      UAVNOMA_NUM_KEY("geometry.R_I", scenario.geometry.R_I),
      UAVNOMA_NUM_KEY("geometry.lambda_I", scenario.geometry.lambda_I),
      UAVNOMA_NUM_KEY("geometry.lambda_u", scenario.geometry.lambda_u),
      UAVNOMA_NUM_KEY("fading.m", scenario.fading.m),
      UAVNOMA_NUM_KEY("fading.alpha", scenario.fading.alpha),
      UAVNOMA_NUM_KEY("power.rho_db", scenario.power.rho_db),
      UAVNOMA_NUM_KEY("power.a_near_sq", scenario.power.a_near_sq),
      UAVNOMA_NUM_KEY("power.a_far_sq", scenario.power.a_far_sq),
      Key{"power.interference",
          [](Settings& s, std::string_view v) {
            v = trim(v);
            if (v == "off") s.scenario.power.interference = sigalign::InterferenceMode::off;
            else if (v == "fixed") s.scenario.power.interference = sigalign::InterferenceMode::fixed;
            else if (v == "proportional") s.scenario.power.interference = sigalign::InterferenceMode::proportional;
            else throw ConfigError("power.interference: expected off, fixed or proportional");
          },
          [](const Settings& s) { return std::string(to_string(s.scenario.power.interference)); }},
      UAVNOMA_NUM_KEY("power.P_I_dbm", scenario.power.P_I_dbm),
      UAVNOMA_NUM_KEY("power.kappa", scenario.power.kappa),
      UAVNOMA_NUM_KEY("power.delta", scenario.power.delta),
      UAVNOMA_NUM_KEY("rates.R_near", scenario.rates.R_near),
      UAVNOMA_NUM_KEY("rates.R_far", scenario.rates.R_far),
      Key{"antennas.K",
          [](Settings& s, std::string_view v) {
            s.scenario.K = static_cast<int>(std::min<std::uint64_t>(parse_u64("antennas.K", v), 1024));
          },
          [](const Settings& s) { return std::to_string(s.scenario.K); }},
      Key{"antennas.N",
          [](Settings& s, std::string_view v) {
            s.scenario.N = static_cast<int>(std::min<std::uint64_t>(parse_u64("antennas.N", v), 1024));
          },
          [](const Settings& s) { return std::to_string(s.scenario.N); }},
      Key{"run.mode", [](Settings& s, std::string_view v) { s.scenario.mode = parse_mode("run.mode", v); },
          [](const Settings& s) { return std::string(mc::to_string(s.scenario.mode)); }},
      Key{"run.trials", [](Settings& s, std::string_view v) { s.scenario.trials = parse_u64("run.trials", v); },
          [](const Settings& s) { return std::to_string(s.scenario.trials); }},
      Key{"run.seed", [](Settings& s, std::string_view v) { s.scenario.seed = parse_u64("run.seed", v); },
          [](const Settings& s) { return std::to_string(s.scenario.seed); }},
      Key{"run.methods", [](Settings& s, std::string_view v) { s.methods = split_list(v); },
          [](const Settings& s) {
            std::string out;
            for (std::size_t i = 0; i < s.methods.size(); ++i) out += (i ? "," : "") + s.methods[i];
            return out;
          }},
      Key{"run.svg", [](Settings& s, std::string_view v) { s.svg = parse_bool("run.svg", v); },
          [](const Settings& s) { return std::string(s.svg ? "true" : "false"); }},
      Key{"analytic.strict",
          [](Settings& s, std::string_view v) { s.analytic.strict = parse_bool("analytic.strict", v); },
          [](const Settings& s) { return std::string(s.analytic.strict ? "true" : "false"); }},
      Key{"analytic.series_form",
          [](Settings& s, std::string_view v) {
            v = trim(v);
            using F = analytic::NearSeriesForm;
            for (auto f : {F::printed, F::rederived, F::rederived_with_boundary})
              if (v == to_string(f)) {
                s.analytic.series_form = f;
                return;
              }
            throw ConfigError("analytic.series_form: expected printed, rederived or rederived_with_boundary");
          },
          [](const Settings& s) { return std::string(to_string(s.analytic.series_form)); }},
      Key{"analytic.rel_tol",
          [](Settings& s, std::string_view v) { s.analytic.quad.rel_tol = parse_double("analytic.rel_tol", v); },
          [](const Settings& s) { return format_number(s.analytic.quad.rel_tol); }},
      Key{"analytic.abs_tol",
          [](Settings& s, std::string_view v) { s.analytic.quad.abs_tol = parse_double("analytic.abs_tol", v); },
          [](const Settings& s) { return format_number(s.analytic.quad.abs_tol); }},
      Key{"analytic.max_subdivisions",
          [](Settings& s, std::string_view v) {
            s.analytic.quad.max_subdivisions =
                static_cast<int>(std::min<std::uint64_t>(parse_u64("analytic.max_subdivisions", v), 1u << 20));
          },
          [](const Settings& s) { return std::to_string(s.analytic.quad.max_subdivisions); }},
      Key{"analytic.max_terms",
          [](Settings& s, std::string_view v) {
            s.analytic.series.max_terms =
                static_cast<int>(std::min<std::uint64_t>(parse_u64("analytic.max_terms", v), 1u << 24));
          },
          [](const Settings& s) { return std::to_string(s.analytic.series.max_terms); }},
      Key{"sweep.axis", [](Settings& s, std::string_view v) { s.sweep.axis = parse_axis("sweep.axis", v); },
          [](const Settings& s) { return std::string(to_string(s.sweep.axis)); }},
      Key{"sweep.values", [](Settings& s, std::string_view v) { s.sweep.values = parse_values("sweep.values", v); },
          [](const Settings& s) { return join_numbers(s.sweep.values); }},
  };
  return table;
}

#undef UAVNOMA_NUM_KEY

}  // namespace detail

inline std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& k : detail::keys()) out.emplace_back(k.name);
  return out;
}

inline void set_value(Settings& s, std::string_view key, std::string_view value) {
  for (const auto& k : detail::keys())
    if (key == k.name) return k.set(s, value);
  throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

inline std::string get_value(const Settings& s, std::string_view key) {
  for (const auto& k : detail::keys())
    if (key == k.name) return k.get(s);
  throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

// Every key with a nonempty value, in table order.
inline std::vector<std::pair<std::string, std::string>> describe(const Settings& s) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : detail::keys())
    if (auto v = k.get(s); !v.empty()) out.emplace_back(k.name, std::move(v));
  return out;
}

// "key = value" lines; '#' starts a comment. Keys under manifest. are
// bookkeeping written by the tool and are skipped, so a manifest can be
// fed back as a config.
inline void apply_config_text(Settings& s, std::string_view text, std::string_view origin = "config") {
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    const auto key = trim(line.substr(0, eq));
    if (key.starts_with("manifest.")) continue;
    try {
      set_value(s, key, trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
}

inline void apply_config_file(Settings& s, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(s, buf.str(), path);
}

// Scenario for one point of a sweep. The radius axis moves R_d and keeps
// the ratio R_m / R_d of the base scenario; the interference axis sets
// a fixed interferer power in dBm.
inline mc::ScenarioConfig apply_axis(mc::ScenarioConfig cfg, SweepAxis axis, double v) {
  switch (axis) {
    case SweepAxis::rho_db: cfg.power.rho_db = v; break;
    case SweepAxis::height: cfg.geometry.h = v; break;
    case SweepAxis::radius: {
      const double ratio = cfg.geometry.R_m / cfg.geometry.R_d;
      cfg.geometry.R_d = v;
      cfg.geometry.R_m = ratio * v;
      break;
    }
    case SweepAxis::rate: cfg.rates.R_near = cfg.rates.R_far = v; break;
    case SweepAxis::interference:
      cfg.power.interference = sigalign::InterferenceMode::fixed;
      cfg.power.P_I_dbm = v;
      break;
  }
  return cfg;
}

inline double axis_value(const mc::ScenarioConfig& cfg, SweepAxis axis) {
  switch (axis) {
    case SweepAxis::rho_db: return cfg.power.rho_db;
    case SweepAxis::height: return cfg.geometry.h;
    case SweepAxis::radius: return cfg.geometry.R_d;
    case SweepAxis::rate: return cfg.rates.R_far;
    case SweepAxis::interference: return cfg.power.P_I_dbm;
  }
  return 0.0;
}

}  // namespace uavnoma::cli
