#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "contassort/instances.hpp"
#include "contassort/policies.hpp"
#include "contassort/rng.hpp"

namespace contassort {

/// Cap from CONTIN_ASSORT_THREADS, otherwise the hardware concurrency.
inline unsigned max_threads() {
  if (const char* env = std::getenv("CONTIN_ASSORT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Index-parallel loop with deterministic result placement (each task writes
/// only to its own slot).
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const unsigned threads =
      std::min<std::size_t>(max_threads(), count == 0 ? 1 : count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

/// Aggregated regret statistics per horizon.
struct RegretTrace {
  std::vector<long long> horizons;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::vector<int> reps;
  double mrse = 0.0;
  bool single_rep = false;  // stderr reported as 0 from one replication
};

struct InstanceSpec {
  std::string name = "bimodal";  // bimodal | uniform | baseline | lowerbound | grid
  double capacity = -1.0;        // unset: 1 for most instances, c for the hard family
  double uniform_level = 1.0;
  double lb_c = 0.25;
  int lb_K = 2;
  std::vector<int> lb_bumps;
  std::vector<double> v_grid;        // for name == "grid"
  std::string w_name = "identity";   // identity | lowerbound
};

inline Instance build_instance(const InstanceSpec& spec) {
  const bool lb_family = spec.name == "baseline" || spec.name == "lowerbound";
  const double capacity = spec.capacity >= 0.0 ? spec.capacity
                                               : (lb_family ? spec.lb_c : 1.0);
  if (spec.name == "bimodal") return make_bimodal_instance(capacity);
  if (spec.name == "uniform") return make_uniform_instance(capacity, spec.uniform_level);
  if (spec.name == "baseline") {
    Instance inst = make_baseline_instance(spec.lb_c);
    return Instance(inst.v, inst.w, capacity);
  }
  if (spec.name == "lowerbound") {
    Instance inst = make_lower_bound_instance(spec.lb_c, spec.lb_K, spec.lb_bumps);
    return Instance(inst.v, inst.w, capacity);
  }
  if (spec.name == "grid") {
    PreferenceFunction v = PreferenceFunction::from_grid(spec.v_grid);
    ProfitCurve w = spec.w_name == "lowerbound" ? lower_bound_profit(spec.lb_c)
                                                : ProfitCurve::identity();
    return Instance(std::move(v), std::move(w), capacity);
  }
  throw std::invalid_argument("unknown instance name: " + spec.name);
}

struct PolicySpec {
  std::string name = "sap";  // sap | kdep | ucb | ts
  SapConfig sap;
  long long kdep_explore_len = 0;  // 0: default schedule
  int kdep_grid_knots = 2048;
  int bandit_bins = 10;
  int bandit_products = 0;  // 0: round(capacity * bins)
  double bandit_c1 = 1.0, bandit_c2 = 1.0;
  double bandit_optimism = 1.0;
};

enum class HorizonMode {
  independent,  // fresh run per horizon, seed = hash(base, horizon, rep)
  prefix        // one run at max horizon per rep, horizons are checkpoints
};

struct ExperimentConfig {
  InstanceSpec instance;
  PolicySpec policy;
  std::vector<long long> horizons;
  int replications = 100;
  std::uint64_t base_seed = 0;
  HorizonMode mode = HorizonMode::independent;
};

namespace detail {

inline double run_policy_once(const Instance& inst, const PolicySpec& policy,
                              long long horizon, Rng& rng, double rho_star,
                              const std::vector<long long>& checkpoints,
                              std::vector<double>* checkpoint_cum) {
  RunOptions opt;
  opt.record_log = false;
  opt.record_series = false;
  opt.checkpoints = checkpoints;
  opt.rho_star_hint = rho_star;
  if (policy.name == "sap") {
    auto res = run_sap(inst, policy.sap, horizon, rng, opt);
    if (checkpoint_cum) *checkpoint_cum = std::move(res.checkpoint_cum);
    return res.regret.total;
  }
  if (policy.name == "kdep") {
    KdepConfig cfg;
    cfg.horizon = horizon;
    cfg.explore_len = policy.kdep_explore_len;
    cfg.grid_knots = policy.kdep_grid_knots;
    auto res = run_kdep(inst, cfg, rng, opt);
    if (checkpoint_cum) *checkpoint_cum = std::move(res.checkpoint_cum);
    return res.regret.total;
  }
  if (policy.name == "ucb" || policy.name == "ts") {
    BanditConfig cfg;
    cfg.variant = policy.name == "ucb" ? BanditVariant::ucb : BanditVariant::ts;
    cfg.max_products = policy.bandit_products > 0
                           ? policy.bandit_products
                           : std::max(1, static_cast<int>(std::lround(
                                             inst.capacity * policy.bandit_bins)));
    cfg.c1 = policy.bandit_c1;
    cfg.c2 = policy.bandit_c2;
    cfg.initial_optimism = policy.bandit_optimism;
    const DiscreteBins bins = discretize(inst, policy.bandit_bins);
    auto res = run_discrete_bandit(inst, bins, cfg, horizon, rng, opt);
    if (checkpoint_cum) *checkpoint_cum = std::move(res.checkpoint_cum);
    return res.regret.total;
  }
  throw std::invalid_argument("unknown policy name: " + policy.name);
}

}  // namespace detail

/// Seeded multi-replication experiment. In `independent` mode every
/// (horizon, replication) pair is a fresh policy run; in `prefix` mode each
/// replication is one run at the largest horizon with cumulative regret read
/// off at the intermediate horizons (only valid for horizon-free policies,
/// i.e. SAP).
inline RegretTrace run_experiment(const ExperimentConfig& cfg,
                                  std::vector<std::string>* failures = nullptr) {
  if (cfg.replications < 1) throw std::invalid_argument("need at least one replication");
  if (cfg.horizons.empty()) throw std::invalid_argument("need at least one horizon");
  std::vector<long long> horizons = cfg.horizons;
  if (!std::is_sorted(horizons.begin(), horizons.end()))
    throw std::invalid_argument("horizons must be strictly increasing");
  if (cfg.mode == HorizonMode::prefix && cfg.policy.name != "sap")
    throw std::invalid_argument("prefix horizon mode is only valid for SAP");

  const Instance inst = build_instance(cfg.instance);
  const double rho_star = cfg.policy.name == "sap"
                              ? solve_uncapacitated(inst).rho_star
                              : solve_capacitated(inst).rho_star;

  const std::size_t n_h = horizons.size();
  const std::size_t n_r = static_cast<std::size_t>(cfg.replications);
  std::vector<double> cum(n_h * n_r, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> errors(cfg.mode == HorizonMode::prefix ? n_r : n_h * n_r);

  if (cfg.mode == HorizonMode::prefix) {
    const long long t_max = horizons.back();
    parallel_for(n_r, [&](std::size_t r) {
      Rng rng(derive_seed(cfg.base_seed, static_cast<std::uint64_t>(t_max), r));
      try {
        std::vector<double> at_checkpoints;
        detail::run_policy_once(inst, cfg.policy, t_max, rng, rho_star, horizons,
                                &at_checkpoints);
        for (std::size_t h = 0; h < n_h; ++h) cum[h * n_r + r] = at_checkpoints.at(h);
      } catch (const std::exception& e) {
        errors[r] = e.what();
      }
    });
  } else {
    parallel_for(n_h * n_r, [&](std::size_t task) {
      const std::size_t h = task / n_r;
      const std::size_t r = task % n_r;
      Rng rng(derive_seed(cfg.base_seed, static_cast<std::uint64_t>(horizons[h]), r));
      try {
        cum[h * n_r + r] =
            detail::run_policy_once(inst, cfg.policy, horizons[h], rng, rho_star, {}, nullptr);
      } catch (const std::exception& e) {
        errors[task] = e.what();
      }
    });
  }

  RegretTrace trace;
  trace.horizons = horizons;
  trace.single_rep = cfg.replications == 1;
  for (std::size_t h = 0; h < n_h; ++h) {
    double sum = 0.0;
    int good = 0;
    for (std::size_t r = 0; r < n_r; ++r) {
      const double value = cum[h * n_r + r];
      if (std::isnan(value)) continue;
      sum += value;
      ++good;
    }
    const double mean = good > 0 ? sum / good : 0.0;
    double var = 0.0;
    if (good > 1) {
      for (std::size_t r = 0; r < n_r; ++r) {
        const double value = cum[h * n_r + r];
        if (std::isnan(value)) continue;
        var += (value - mean) * (value - mean);
      }
      var /= (good - 1);
    }
    trace.mean.push_back(mean);
    trace.stderr_.push_back(good > 1 ? std::sqrt(var / good) : 0.0);
    trace.reps.push_back(good);
  }
  trace.mrse = 0.0;
  for (std::size_t h = 0; h < n_h; ++h)
    if (trace.mean[h] > 0.0)
      trace.mrse = std::max(trace.mrse, trace.stderr_[h] / trace.mean[h]);
  if (failures) {
    failures->clear();
    for (const auto& e : errors)
      if (!e.empty()) failures->push_back(e);
  }
  return trace;
}

enum class RateModel { log_t, two_thirds };

struct FitResult {
  double gamma = 0.0;
  std::vector<double> residuals;
};

/// Least squares through the origin of mean regret on log T or T^{2/3}.
inline FitResult fit_rate(const RegretTrace& trace, RateModel model) {
  if (trace.horizons.size() < 2)
    throw std::invalid_argument("rate fit needs at least two horizons");
  bool all_equal = true;
  for (std::size_t i = 1; i < trace.horizons.size(); ++i)
    if (trace.horizons[i] != trace.horizons[0]) all_equal = false;
  if (all_equal) throw DegenerateFitError("all horizons equal");

  FitResult out;
  double sxy = 0.0, sxx = 0.0;
  std::vector<double> xs(trace.horizons.size());
  for (std::size_t i = 0; i < trace.horizons.size(); ++i) {
    const double t = static_cast<double>(trace.horizons[i]);
    xs[i] = model == RateModel::log_t ? std::log(t) : std::pow(t, 2.0 / 3.0);
    sxy += xs[i] * trace.mean[i];
    sxx += xs[i] * xs[i];
  }
  out.gamma = sxy / sxx;
  out.residuals.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    out.residuals[i] = trace.mean[i] - out.gamma * xs[i];
  return out;
}

/// Pointwise maximum of mean regret across instances with common horizons.
inline RegretTrace worst_case_regret(const std::vector<RegretTrace>& traces) {
  if (traces.empty()) throw std::invalid_argument("need at least one trace");
  const auto& horizons = traces.front().horizons;
  for (const auto& t : traces)
    if (t.horizons != horizons)
      throw MismatchedHorizonsError("regret traces have different horizons");
  RegretTrace out = traces.front();
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    for (const auto& t : traces) {
      if (t.mean[h] > out.mean[h]) {
        out.mean[h] = t.mean[h];
        out.stderr_[h] = t.stderr_[h];
        out.reps[h] = t.reps[h];
      }
    }
  }
  out.mrse = 0.0;
  for (std::size_t h = 0; h < horizons.size(); ++h)
    if (out.mean[h] > 0.0) out.mrse = std::max(out.mrse, out.stderr_[h] / out.mean[h]);
  return out;
}

}  // namespace contassort
