#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uavnoma/config.hpp"
#include "uavnoma/errors.hpp"
#include "uavnoma/experiments.hpp"
#include "uavnoma/report.hpp"
#include "uavnoma/validation.hpp"

namespace fs = std::filesystem;
using namespace uavnoma;

namespace {

enum Exit { ok = 0, failed = 1, usage = 2, runtime = 3 };

// Options shared by every subcommand. Dotted flags mirror the config keys
// and override the config file.
struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::string> mode;
  std::string out = "uavnoma_out";
  std::vector<std::string> methods;
  std::map<std::string, std::string> keyed;
  std::vector<std::string> sets;

  void attach(CLI::App* app, bool scenario_keys = true) {
    app->add_option("--config", config, "Config file of dotted key = value lines")->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "Random seed");
    app->add_option("--trials", trials, "Monte Carlo trials per point");
    app->add_option("--mode", mode, "Monte Carlo mode")->check(CLI::IsMember({"exact", "upper", "fast"}));
    app->add_option("--out", out, "Output directory")->capture_default_str();
    if (!scenario_keys) return;
    app->add_option("--methods", methods, "Methods to evaluate (default: all applicable)")->delimiter(',');
    app->add_option("--set", sets, "Override key=value (repeatable)");
    for (const auto& key : cli::config_keys()) {
      if (key == "run.seed" || key == "run.trials" || key == "run.mode" || key == "run.methods") continue;
      if (key == "sweep.axis" || key == "sweep.values") continue;
      app->add_option("--" + key, keyed[key], "Overrides " + key);
    }
  }

  cli::Settings settings(CLI::App* app) const {
    cli::Settings s;
    if (!config.empty()) cli::apply_config_file(s, config);
    for (const auto& [key, value] : keyed)
      if (app->count("--" + key) > 0) cli::set_value(s, key, value);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      cli::set_value(s, cli::trim(std::string_view(kv).substr(0, eq)), std::string_view(kv).substr(eq + 1));
    }
    if (seed) s.scenario.seed = *seed;
    if (trials) s.scenario.trials = *trials;
    if (mode) s.scenario.mode = cli::parse_mode("--mode", *mode);
    if (!methods.empty()) s.methods = methods;
    return s;
  }
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

const char* x_label(cli::SweepAxis a) {
  switch (a) {
    case cli::SweepAxis::rho_db: return "transmit SNR (dB)";
    case cli::SweepAxis::height: return "UAV height (m)";
    case cli::SweepAxis::radius: return "disc radius R_d (m)";
    case cli::SweepAxis::rate: return "target rate (BPCU)";
    case cli::SweepAxis::interference: return "interferer power (dBm)";
  }
  return "";
}

// Manifest first, data after, manifest finalized last.
void write_outputs(const std::string& name, const std::string& command, const cli::Settings& s,
                   const std::string& out_dir, const std::function<cli::Evaluation()>& compute,
                   const std::string& title, const std::string& xl, bool log_y) {
  fs::create_directories(out_dir);
  cli::RunManifest manifest(fs::path(out_dir) / (name + ".manifest.txt"), command, s);
  try {
    const auto ev = compute();
    print_warnings(ev.warnings);
    const auto csv = fs::path(out_dir) / (name + ".csv");
    cli::write_text_file(csv, cli::to_csv(ev.rows));
    manifest.add_output(csv);
    std::cout << csv.string() << '\n';
    if (s.svg) {
      const auto svg = fs::path(out_dir) / (name + ".svg");
      cli::write_text_file(svg, cli::render_svg(ev.rows, title, xl, log_y));
      manifest.add_output(svg);
      std::cout << svg.string() << '\n';
    }
    manifest.finish();
    std::cout << manifest.path().string() << '\n';
  } catch (const std::exception& e) {
    manifest.fail(e.what());
    throw;
  }
}

nlohmann::json to_json(const validation::Report& rep) {
  nlohmann::json j;
  j["level"] = validation::to_string(rep.level);
  j["seed"] = rep.seed;
  j["pass"] = rep.pass();
  j["seconds"] = rep.seconds;
  j["criteria"] = nlohmann::json::array();
  for (const auto& c : rep.criteria) {
    nlohmann::json jc;
    jc["id"] = c.id;
    jc["title"] = c.title;
    jc["pass"] = c.pass();
    jc["seconds"] = c.seconds;
    if (!c.error.empty()) jc["error"] = c.error;
    jc["checks"] = nlohmann::json::array();
    for (const auto& k : c.checks) {
      nlohmann::json jk;
      jk["name"] = k.name;
      jk["measured"] = std::isfinite(k.measured) ? nlohmann::json(k.measured) : nlohmann::json(cli::format_number(k.measured));
      jk["relation"] = k.relation;
      jk["tolerance"] = k.tolerance;
      jk["pass"] = k.pass;
      jk["timing"] = k.timing;
      jc["checks"].push_back(jk);
    }
    j["criteria"].push_back(jc);
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outage and ergodic-rate simulator and analytic evaluator for MIMO-NOMA UAV downlinks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cli::tool_version);

  Common outage_opts, rate_opts, sweep_opts, figure_opts, validate_opts;
  std::string outage_axis, rate_axis, sweep_axis, sweep_metric = "outage", figure_name, level = "quick";
  std::vector<std::string> outage_values, rate_values, sweep_values;
  std::vector<int> criteria;

  auto* outage = app.add_subcommand("outage", "Outage probability of both users: Monte Carlo and closed forms");
  outage_opts.attach(outage);
  outage->add_option("--axis", outage_axis, "Sweep axis")
      ->check(CLI::IsMember({"rho_db", "height", "radius", "rate", "interference"}));
  outage->add_option("--values", outage_values, "Sweep values (list or first:step:last)")->delimiter(',');

  auto* rate = app.add_subcommand("rate", "Ergodic rate of both users: Monte Carlo and closed forms");
  rate_opts.attach(rate);
  rate->add_option("--axis", rate_axis, "Sweep axis")
      ->check(CLI::IsMember({"rho_db", "height", "radius", "rate", "interference"}));
  rate->add_option("--values", rate_values, "Sweep values (list or first:step:last)")->delimiter(',');

  auto* sweep = app.add_subcommand("sweep", "Outage or rate over one axis");
  sweep_opts.attach(sweep);
  sweep->add_option("--axis", sweep_axis, "Sweep axis")
      ->required()
      ->check(CLI::IsMember({"rho_db", "height", "radius", "rate", "interference"}));
  sweep->add_option("--values", sweep_values, "Sweep values (list or first:step:last)")->required()->delimiter(',');
  sweep->add_option("--metric", sweep_metric, "outage or rate")
      ->check(CLI::IsMember({"outage", "rate"}))
      ->capture_default_str();

  auto* figure = app.add_subcommand("figure", "Reproduce a figure grid as CSV and SVG");
  figure_opts.attach(figure);
  figure->add_option("name", figure_name, "Figure name")->required()->check(CLI::IsMember(cli::figure_names()));

  auto* validate = app.add_subcommand("validate", "Run the acceptance criteria and write a report");
  validate_opts.attach(validate, false);
  validate->add_option("--level", level, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();
  validate->add_option("--criteria", criteria, "Subset of criteria (default: all)")
      ->delimiter(',')
      ->check(CLI::Range(1, validation::criterion_count));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? Exit::ok : Exit::usage;
  }

  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
    return s;
  };

  try {
    auto run_metric = [&](CLI::App* sub, const Common& opts, const std::string& name, cli::Metric metric,
                          const std::string& axis, const std::vector<std::string>& values) {
      auto s = opts.settings(sub);
      if (!axis.empty()) s.sweep.axis = cli::parse_axis("--axis", axis);
      if (sub->count("--values") > 0) s.sweep.values = cli::parse_values("--values", join(values));
      cli::check_methods(s.methods, metric);
      const bool outage_metric = metric == cli::Metric::outage;
      write_outputs(
          name, sub->get_name(), s, opts.out, [&] { return cli::evaluate_sweep(s, metric); },
          outage_metric ? "Outage probability" : "Ergodic rate (BPCU)", x_label(s.sweep.axis), outage_metric);
      return static_cast<int>(Exit::ok);
    };

    if (*outage) return run_metric(outage, outage_opts, "outage", cli::Metric::outage, outage_axis, outage_values);
    if (*rate) return run_metric(rate, rate_opts, "rate", cli::Metric::rate, rate_axis, rate_values);
    if (*sweep) {
      const auto metric = sweep_metric == "rate" ? cli::Metric::rate : cli::Metric::outage;
      return run_metric(sweep, sweep_opts, "sweep_" + sweep_axis + "_" + sweep_metric, metric, sweep_axis,
                        sweep_values);
    }
    if (*figure) {
      const auto s = figure_opts.settings(figure);
      const auto spec = cli::figure_spec(figure_name, s.scenario);
      cli::check_methods(s.methods, spec.metric);
      write_outputs(
          figure_name, "figure " + figure_name, s, figure_opts.out, [&] { return cli::evaluate_figure(spec, s); },
          spec.title, x_label(spec.axis), spec.metric == cli::Metric::outage && !spec.slopes);
      return Exit::ok;
    }
    if (*validate) {
      const auto s = validate_opts.settings(validate);
      const auto lvl = level == "full" ? validation::Level::full : validation::Level::quick;
      const auto ids = criteria.empty() ? validation::all_criteria() : criteria;
      const std::string name = std::string("validation_") + validation::to_string(lvl);
      fs::create_directories(validate_opts.out);
      cli::RunManifest manifest(fs::path(validate_opts.out) / (name + ".manifest.txt"), "validate " + level, s);
      const auto rep = validation::run(lvl, s.scenario.seed, ids);
      for (const auto& c : rep.criteria) std::cout << validation::summary_line(c) << '\n';
      const auto csv = fs::path(validate_opts.out) / (name + ".csv");
      cli::write_text_file(csv, validation::checks_csv(rep));
      manifest.add_output(csv);
      const auto json = fs::path(validate_opts.out) / (name + ".json");
      cli::write_text_file(json, to_json(rep).dump(2) + "\n");
      manifest.add_output(json);
      manifest.finish();
      std::cout << (rep.pass() ? "PASS" : "FAIL") << " overall (" << rep.seconds << " s)\n";
      return rep.pass() ? Exit::ok : Exit::failed;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return Exit::usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::runtime;
  }
  return Exit::usage;
}
