#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "uavnoma/channel.hpp"
#include "uavnoma/errors.hpp"
#include "uavnoma/geometry.hpp"
#include "uavnoma/rng.hpp"
#include "uavnoma/sigalign.hpp"

namespace uavnoma::mc {

enum class Mode { exact, upper_bound, fast };
enum class User { near, far };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::exact: return "exact";
    case Mode::upper_bound: return "upper";
    case Mode::fast: return "fast";
  }
  return "?";
}

inline const char* to_string(User u) { return u == User::near ? "near" : "far"; }

struct ScenarioConfig {
  geometry::GeometryConfig geometry;
  channel::FadingConfig fading;
  sigalign::PowerConfig power;
  sigalign::TargetRates rates;
  int K = 4;
  int N = 3;
  Mode mode = Mode::fast;
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 20190417;

  // Throws ConfigError on violations; returns non-fatal warnings.
  std::vector<std::string> validate() const {
    geometry.validate();
    fading.validate();
    if (K < 1) throw ConfigError("antennas.K must be >= 1");
    if (N < 1) throw ConfigError("antennas.N must be >= 1");
    if (!(2 * N > K)) throw ConfigError("antennas: signal alignment needs 2*antennas.N > antennas.K");
    power.validate(N);
    rates.validate();
    if (trials < 1) throw ConfigError("run.trials must be >= 1");
    std::vector<std::string> warnings;
    if (!feasible())
      warnings.push_back("rates.R_far violates the decodability constraint; outage is 1 for both users");
    return warnings;
  }

  bool feasible() const { return rates.feasible(power); }
};

struct Diagnostics {
  std::uint64_t resampled = 0;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  Diagnostics diagnostics;
};

struct SimulationSummary {
  Estimate far_outage;
  Estimate near_outage;
  Estimate far_rate;
  Estimate near_rate;
  bool feasible = true;
};

struct TrialResult {
  bool far_out = false;
  bool near_out = false;
  double far_rate = 0.0;
  double near_rate = 0.0;
  std::uint32_t resamples = 0;
};

// Per-trial sampler. Every trial draws from streams keyed by
// (seed, trial, role), so results do not depend on scheduling.
class TrialModel {
 public:
  static constexpr std::uint32_t max_attempts = 64;

  explicit TrialModel(const ScenarioConfig& cfg)
      : cfg_(cfg),
        eps_far_(cfg.rates.eps_far()),
        eps_near_(cfg.rates.eps_near()),
        P_I_(cfg.power.interference_power()),
        feasible_(cfg.feasible()) {}

  TrialResult operator()(std::uint64_t trial) const { return run(trial, cfg_.mode); }

  TrialResult run(std::uint64_t trial, Mode mode) const {
    const auto& g = cfg_.geometry;
    const double alpha = cfg_.fading.alpha;
    CounterStream place(cfg_.seed, trial, StreamRole::placement);
    const auto pos = geometry::sample_placement(g, place);
    const double pl_near = geometry::path_loss(geometry::slant_distance(pos.r_near, g.h), alpha);
    const double pl_far = geometry::path_loss(geometry::slant_distance(pos.r_far, g.h), alpha);

    double i_near = 0.0, i_far = 0.0;
    if (P_I_ > 0.0 && g.lambda_I > 0.0) {
      CounterStream sn(cfg_.seed, trial, StreamRole::interference_near);
      CounterStream sf(cfg_.seed, trial, StreamRole::interference_far);
      i_near = P_I_ * geometry::sample_interference_sum(g, alpha, sn);
      i_far = P_I_ * geometry::sample_interference_sum(g, alpha, sf);
    }

    TrialResult r;
    double u_near = 0.0, u_far = 0.0;
    sigalign::DetectionPower dp_near, dp_far;
    if (mode == Mode::fast) {
      CounterStream sz(cfg_.seed, trial, StreamRole::fading_fast);
      const double z = channel::effective_gain_fast(cfg_.fading.m, sz);
      u_near = pl_near * z;
      u_far = pl_far * z;
      dp_near = dp_far = sigalign::unit_power(cfg_.power.delta);
    } else {
      std::vector<Eigen::VectorXcd> b(cfg_.K);
      sigalign::DetectionPair tagged;
      for (std::uint32_t attempt = 0;; ++attempt) {
        if (attempt == max_attempts)
          throw SingularChannelError("trial " + std::to_string(trial) +
                                     ": effective channel stayed singular after resampling");
        CounterStream sa(cfg_.seed, trial, StreamRole::alignment, attempt);
        try {
          for (int j = 0; j < cfg_.K; ++j) {
            auto c = sigalign::sample_cluster(cfg_.N, cfg_.K, cfg_.fading.m, sa);
            if (j == 0) tagged = std::move(c.detection);
            b[j] = std::move(c.b);
          }
          const auto eff = sigalign::effective_channel(b, 0, std::sqrt(pl_near), std::sqrt(pl_far));
          u_near = eff.u_sq_near;
          u_far = eff.u_sq_far;
          break;
        } catch (const SingularChannelError&) {
          ++r.resamples;
        } catch (const RankDeficiencyError&) {
          ++r.resamples;
        }
      }
      if (mode == Mode::exact) {
        dp_near = sigalign::exact_power(tagged.t_near);
        dp_far = sigalign::exact_power(tagged.t_far);
      } else {
        dp_near = dp_far = sigalign::upper_bound_power(cfg_.power.delta);
      }
    }

    const double s_far = sigalign::sinr_far(u_far, dp_far, i_far, cfg_.power);
    const auto s_near = sigalign::sinr_near(u_near, dp_near, i_near, cfg_.power);
    r.far_out = !feasible_ || s_far < eps_far_;
    r.near_out = !feasible_ || s_near.sic < eps_far_ || s_near.own < eps_near_;
    r.far_rate = std::log2(1.0 + s_far);
    r.near_rate = std::log2(1.0 + s_near.own);
    return r;
  }

 private:
  ScenarioConfig cfg_;
  double eps_far_;
  double eps_near_;
  double P_I_;
  bool feasible_;
};

// Running mean and centered second moment; merged with the pairwise
// update so that a fixed merge tree gives fixed results.
struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }

  static Moments merge(const Moments& a, const Moments& b) {
    if (a.n == 0.0) return b;
    if (b.n == 0.0) return a;
    Moments r;
    r.n = a.n + b.n;
    const double d = b.mean - a.mean;
    r.mean = a.mean + d * (b.n / r.n);
    r.m2 = a.m2 + b.m2 + d * d * (a.n * b.n / r.n);
    return r;
  }
};

struct BlockStats {
  std::uint64_t trials = 0;
  std::uint64_t far_out = 0;
  std::uint64_t near_out = 0;
  std::uint64_t resamples = 0;
  Moments far_rate;
  Moments near_rate;

  static BlockStats merge(const BlockStats& a, const BlockStats& b) {
    BlockStats r;
    r.trials = a.trials + b.trials;
    r.far_out = a.far_out + b.far_out;
    r.near_out = a.near_out + b.near_out;
    r.resamples = a.resamples + b.resamples;
    r.far_rate = Moments::merge(a.far_rate, b.far_rate);
    r.near_rate = Moments::merge(a.near_rate, b.near_rate);
    return r;
  }
};

inline constexpr std::uint64_t block_size = 4096;

// Worker count from UAVNOMA_WORKERS, else the hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("UAVNOMA_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Evaluates fn(first, last) for every block of trials and returns the
// per-block results in block order. Scheduling only decides who computes
// a block, never what it contains.
template <class Result, class Fn>
std::vector<Result> run_blocks(std::uint64_t trials, unsigned workers, Fn fn) {
  const std::uint64_t n_blocks = (trials + block_size - 1) / block_size;
  std::vector<Result> out(n_blocks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= n_blocks) return;
      try {
        const std::uint64_t lo = i * block_size;
        out[i] = fn(lo, std::min(trials, lo + block_size));
      } catch (...) {
        std::lock_guard lk(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(n_blocks);
      }
    }
  };
  workers = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, workers), n_blocks));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

template <class T, class Merge>
T pairwise_reduce(std::span<const T> xs, Merge merge) {
  if (xs.empty()) return T{};
  if (xs.size() == 1) return xs[0];
  const std::size_t mid = xs.size() / 2;
  return merge(pairwise_reduce(xs.first(mid), merge), pairwise_reduce(xs.subspan(mid), merge));
}

inline Estimate proportion(std::uint64_t hits, std::uint64_t n) {
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n, {}};
}

inline Estimate sample_mean(const Moments& m) {
  const double var = m.n > 1.0 ? m.m2 / (m.n - 1.0) : 0.0;
  return {m.mean, std::sqrt(var / m.n), static_cast<std::uint64_t>(m.n), {}};
}

inline BlockStats run_statistics(const ScenarioConfig& cfg, unsigned workers) {
  const TrialModel model(cfg);
  auto blocks = run_blocks<BlockStats>(cfg.trials, workers, [&](std::uint64_t lo, std::uint64_t hi) {
    BlockStats s;
    for (std::uint64_t t = lo; t < hi; ++t) {
      const TrialResult r = model(t);
      ++s.trials;
      s.far_out += r.far_out;
      s.near_out += r.near_out;
      s.resamples += r.resamples;
      s.far_rate.add(r.far_rate);
      s.near_rate.add(r.near_rate);
    }
    return s;
  });
  return pairwise_reduce<BlockStats>(blocks, BlockStats::merge);
}

inline SimulationSummary simulate(const ScenarioConfig& cfg, unsigned workers = worker_count()) {
  cfg.validate();
  const BlockStats s = run_statistics(cfg, workers);
  if (static_cast<double>(s.resamples) > 1e-3 * static_cast<double>(s.trials))
    throw SingularChannelError("singular effective channels in " + std::to_string(s.resamples) +
                               " of " + std::to_string(s.trials) + " trials (limit 0.1%)");
  SimulationSummary out;
  out.feasible = cfg.feasible();
  if (out.feasible) {
    out.far_outage = proportion(s.far_out, s.trials);
    out.near_outage = proportion(s.near_out, s.trials);
  } else {
    out.far_outage = out.near_outage = {1.0, 0.0, s.trials, {}};
  }
  out.far_rate = sample_mean(s.far_rate);
  out.near_rate = sample_mean(s.near_rate);
  for (Estimate* e : {&out.far_outage, &out.near_outage, &out.far_rate, &out.near_rate})
    e->diagnostics.resampled = s.resamples;
  return out;
}

inline Estimate estimate_outage_far(const ScenarioConfig& cfg) {
  if (!cfg.feasible()) return {1.0, 0.0, cfg.trials, {}};
  return simulate(cfg).far_outage;
}

inline Estimate estimate_outage_near(const ScenarioConfig& cfg) {
  if (!cfg.feasible()) return {1.0, 0.0, cfg.trials, {}};
  return simulate(cfg).near_outage;
}

inline Estimate estimate_ergodic_rate(const ScenarioConfig& cfg, User user) {
  const auto s = simulate(cfg);
  return user == User::near ? s.near_rate : s.far_rate;
}

// Paired exact vs upper-bound run on identical draws. Counts trials in
// which the upper-bound indicator is below the exact one.
struct PairedModes {
  std::uint64_t trials = 0;
  std::uint64_t far_exact = 0, far_upper = 0, near_exact = 0, near_upper = 0;
  std::uint64_t violations = 0;

  static PairedModes merge(const PairedModes& a, const PairedModes& b) {
    return {a.trials + b.trials,         a.far_exact + b.far_exact,   a.far_upper + b.far_upper,
            a.near_exact + b.near_exact, a.near_upper + b.near_upper, a.violations + b.violations};
  }
};

inline PairedModes compare_modes(const ScenarioConfig& cfg, unsigned workers = worker_count()) {
  cfg.validate();
  const TrialModel model(cfg);
  auto blocks = run_blocks<PairedModes>(cfg.trials, workers, [&](std::uint64_t lo, std::uint64_t hi) {
    PairedModes p;
    for (std::uint64_t t = lo; t < hi; ++t) {
      const auto e = model.run(t, Mode::exact);
      const auto u = model.run(t, Mode::upper_bound);
      ++p.trials;
      p.far_exact += e.far_out;
      p.far_upper += u.far_out;
      p.near_exact += e.near_out;
      p.near_upper += u.near_out;
      p.violations += (u.far_out < e.far_out) + (u.near_out < e.near_out);
    }
    return p;
  });
  return pairwise_reduce<PairedModes>(blocks, PairedModes::merge);
}

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t used = 0;
  std::size_t dropped = 0;
};

inline SlopeFit least_squares(std::span<const std::pair<double, double>> xy) {
  if (xy.size() < 2) throw std::invalid_argument("slope fit needs at least 2 points");
  double mx = 0.0, my = 0.0;
  for (auto [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(xy.size());
  my /= static_cast<double>(xy.size());
  double sxx = 0.0, sxy = 0.0;
  for (auto [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope fit needs distinct abscissae");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.used = xy.size();
  return f;
}

// Slope of -log10(outage) against rho_dB/10. Zero outages are dropped.
inline SlopeFit fit_diversity_order(std::span<const std::pair<double, double>> curve) {
  std::vector<std::pair<double, double>> xy;
  std::size_t dropped = 0;
  for (auto [rho_db, p] : curve) {
    if (p > 0.0)
      xy.emplace_back(rho_db / 10.0, -std::log10(p));
    else
      ++dropped;
  }
  SlopeFit f = least_squares(xy);
  f.dropped = dropped;
  return f;
}

// Slope of rate against log2(rho).
inline SlopeFit fit_snr_slope(std::span<const std::pair<double, double>> rates) {
  std::vector<std::pair<double, double>> xy;
  for (auto [rho_db, r] : rates) xy.emplace_back(rho_db / 10.0 * std::numbers::log2e * std::numbers::ln10, r);
  return least_squares(xy);
}

}  // namespace uavnoma::mc
