// Closed forms and a short Monte Carlo run for the default scenario at a
// few SNR points, printed as a table.
//
//   ./uavnoma_reference_points [trials]

#include <cstdio>
#include <cstdlib>

#include "uavnoma/analytic.hpp"
#include "uavnoma/montecarlo.hpp"

using namespace uavnoma;

int main(int argc, char** argv) {
  mc::ScenarioConfig cfg;
  cfg.trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 100000;
  cfg.mode = mc::Mode::fast;

  std::printf("%6s %11s %11s %11s %11s %9s %9s %9s\n", "rho", "far_mc", "far_exact", "near_mc", "near_exact",
              "far_rate", "near_mc", "near_cor4");
  for (double db : {30.0, 40.0, 50.0, 60.0}) {
    cfg.power.rho_db = db;
    const auto in = analytic::make_inputs(cfg);
    const auto s = mc::simulate(cfg);
    std::printf("%6.0f %11.6f %11.6f %11.6f %11.6f %9.5f %9.5f %9.5f\n", db, s.far_outage.value,
                analytic::outage_far_exact_no_interference(in), s.near_outage.value,
                analytic::outage_near_exact_no_interference(in), analytic::ergodic_far(in), s.near_rate.value,
                analytic::ergodic_near_exact_alpha3(in));
  }

  cfg.power.rho_db = 60;
  cfg.power.interference = sigalign::InterferenceMode::fixed;
  cfg.power.P_I_dbm = 30;
  const auto in = analytic::make_inputs(cfg);
  std::printf("\nP_I = 30 dBm, rho = 60 dB: far upper %.6f, near upper %.6f\n", analytic::outage_far_upper(in),
              analytic::outage_near_upper(in));
  return 0;
}
