// Runs acceptance criteria and prints one PASS/FAIL line per criterion.
// Exit status is nonzero when any selected criterion fails.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavnoma/validation.hpp"

using namespace uavnoma;

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string level = "full";
  std::vector<int> ids;
  std::uint64_t seed = mc::ScenarioConfig{}.seed;
  bool verbose = false;
  app.add_option("--level", level)->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
  app.add_option("--criterion", ids, "Criterion ids (default: all)")
      ->delimiter(',')
      ->check(CLI::Range(1, validation::criterion_count));
  app.add_option("--seed", seed)->capture_default_str();
  app.add_flag("--verbose", verbose, "Print every check");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (ids.empty()) ids = validation::all_criteria();

  const auto lvl = level == "quick" ? validation::Level::quick : validation::Level::full;
  bool all = true;
  for (int id : ids) {
    const auto c = validation::run_criterion(id, lvl, seed);
    std::cout << validation::summary_line(c) << " (" << c.seconds << " s)" << std::endl;
    if (verbose || !c.pass())
      for (const auto& k : c.checks)
        std::cout << "    " << (k.pass ? "ok  " : "FAIL") << ' ' << k.name << " = " << k.measured << ' ' << k.relation
                  << ' ' << k.tolerance << '\n';
    if (!c.error.empty()) std::cout << "    error: " << c.error << '\n';
    all = all && c.pass();
  }
  return all ? 0 : 1;
}
