#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "contassort/choice.hpp"
#include "contassort/errors.hpp"
#include "contassort/kde.hpp"
#include "contassort/rng.hpp"
#include "contassort/solver.hpp"

namespace contassort {

struct SaleRecord {
  long long t = 0;
  Assortment offered;
  PurchaseOutcome outcome;
  double inst_regret = 0.0;
};
using SalesLog = std::vector<SaleRecord>;

/// Per-period expected regret of a single run.
struct RegretSeries {
  std::vector<double> instantaneous;
  std::vector<double> cumulative;
  double total = 0.0;
};

struct RunOptions {
  bool record_log = true;
  bool record_series = true;
  std::vector<long long> checkpoints;  // sorted; cumulative regret snapshots
  double rho_star_hint = std::numeric_limits<double>::quiet_NaN();
};

// ---------------------------------------------------------------------------
// SAP
// ---------------------------------------------------------------------------

struct SapConfig {
  double alpha = 1.0;  // regret guarantee needs alpha >= v_hi + 1; warn only
  double beta = 0.0;
  double rho1 = 0.0;
};

/// One Robbins-Monro update; the iterate is clamped to [0,1] so that
/// w^{-1}(rho) stays defined.
inline double sap_step(double rho_t, long long t, const SapConfig& cfg,
                       const PurchaseOutcome& outcome, const Assortment& offered,
                       const ProfitCurve& w) {
  const double reward =
      (outcome.purchased && offered.contains(outcome.product)) ? w(outcome.product) : 0.0;
  const double a_t = cfg.alpha / (static_cast<double>(t) + cfg.beta);
  const double next = rho_t + a_t * (reward - rho_t);
  return std::min(1.0, std::max(0.0, next));
}

struct SapRunResult {
  SalesLog log;
  RegretSeries regret;
  double final_rho = 0.0;
  double rho_star = 0.0;
  bool alpha_warning = false;
  std::vector<double> checkpoint_cum;
};

inline SapRunResult run_sap(const Instance& inst, const SapConfig& cfg, long long horizon,
                            Rng& rng, const RunOptions& opt = {}) {
  if (inst.capacity != 1.0) throw std::invalid_argument("SAP requires capacity = 1");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  SapRunResult out;
  out.alpha_warning = cfg.alpha < inst.v.upper_bound() + 1.0;
  out.rho_star = std::isnan(opt.rho_star_hint) ? solve_uncapacitated(inst).rho_star
                                               : opt.rho_star_hint;
  const CachedModel model(inst);
  double rho = cfg.rho1;
  double cum = 0.0;
  std::size_t next_ck = 0;
  if (opt.record_series) {
    out.regret.instantaneous.reserve(horizon);
    out.regret.cumulative.reserve(horizon);
  }
  for (long long t = 1; t <= horizon; ++t) {
    const Assortment offered = upper_level_set(inst, rho);
    const double revenue = model.expected_revenue(offered);
    const double inst_regret = std::max(0.0, out.rho_star - revenue);
    cum += inst_regret;
    const PurchaseOutcome outcome = model.sample(offered, rng);
    if (opt.record_series) {
      out.regret.instantaneous.push_back(inst_regret);
      out.regret.cumulative.push_back(cum);
    }
    if (opt.record_log) out.log.push_back({t, offered, outcome, inst_regret});
    rho = sap_step(rho, t, cfg, outcome, offered, inst.w);
    while (next_ck < opt.checkpoints.size() && opt.checkpoints[next_ck] == t) {
      out.checkpoint_cum.push_back(cum);
      ++next_ck;
    }
  }
  out.regret.total = cum;
  out.final_rho = rho;
  return out;
}

// ---------------------------------------------------------------------------
// KDEP
// ---------------------------------------------------------------------------

struct KdepConfig {
  long long horizon = 0;
  long long explore_len = 0;  // 0: default floor(T^{2/3} / N)
  int grid_knots = 2048;
};

struct KdepRunResult {
  SalesLog log;
  RegretSeries regret;
  EstimatedPreference estimate;
  Assortment exploitation_assortment;
  long long explore_len = 0;
  bool explore_truncated = false;  // default M was shrunk to fit the horizon
  double rho_star = 0.0;
  std::vector<double> checkpoint_cum;
};

inline KdepRunResult run_kdep(const Instance& inst, const KdepConfig& cfg, Rng& rng,
                              const RunOptions& opt = {}) {
  if (!(inst.capacity > 0.0 && inst.capacity < 1.0))
    throw std::invalid_argument("KDEP requires capacity in (0,1)");
  const TestPlan plan = TestPlan::make(inst.capacity);
  const long long n_test = plan.count;
  const long long horizon = cfg.horizon;
  if (horizon < n_test)
    throw HorizonTooShortError("horizon shorter than the number of test assortments");

  KdepRunResult out;
  long long explore = cfg.explore_len;
  if (explore <= 0) {
    explore = static_cast<long long>(
        std::floor(std::pow(static_cast<double>(horizon), 2.0 / 3.0) / n_test));
    if (explore < 1) explore = 1;
  }
  if (explore * n_test > horizon) {
    explore = horizon / n_test;
    out.explore_truncated = true;
  }
  out.explore_len = explore;
  out.rho_star = std::isnan(opt.rho_star_hint) ? solve_capacitated(inst).rho_star
                                               : opt.rho_star_hint;

  const CachedModel model(inst);
  ExplorationLog xlog;
  xlog.pieces.resize(plan.count);
  xlog.offers_per_piece = explore;

  std::vector<Assortment> test_sets;
  std::vector<double> test_regret;
  for (const auto& iv : plan.assortments) {
    Assortment s{{iv.lo, iv.hi}};
    test_regret.push_back(std::max(0.0, out.rho_star - model.expected_revenue(s)));
    test_sets.push_back(std::move(s));
  }

  double cum = 0.0;
  std::size_t next_ck = 0;
  auto note_period = [&](long long t, const Assortment& offered,
                         const PurchaseOutcome& outcome, double inst_regret) {
    cum += inst_regret;
    if (opt.record_series) {
      out.regret.instantaneous.push_back(inst_regret);
      out.regret.cumulative.push_back(cum);
    }
    if (opt.record_log) out.log.push_back({t, offered, outcome, inst_regret});
    while (next_ck < opt.checkpoints.size() && opt.checkpoints[next_ck] == t) {
      out.checkpoint_cum.push_back(cum);
      ++next_ck;
    }
  };

  // Phase 1: each test assortment for `explore` consecutive periods.
  for (long long t = 1; t <= explore * n_test; ++t) {
    const int piece = static_cast<int>((t - 1) / explore);
    const PurchaseOutcome outcome = model.sample(test_sets[piece], rng);
    if (outcome.purchased)
      xlog.pieces[piece].purchases.push_back(outcome.product);
    else
      ++xlog.pieces[piece].no_purchases;
    note_period(t, test_sets[piece], outcome, test_regret[piece]);
  }

  // Phase 2: estimate, then exploit the estimated optimal assortment.
  const double h = std::min(0.5 * inst.capacity, std::exp(-1.0));
  std::vector<PieceEstimate> pieces;
  std::vector<double> grid = uniform_grid(cfg.grid_knots);
  for (int i = 0; i < plan.count; ++i) {
    const long long n_buy =
        std::max<long long>(1, static_cast<long long>(xlog.pieces[i].purchases.size()));
    const KernelSpec spec{h, bandwidth_and_order(inst.capacity, n_buy).order,
                          plan.assortments[i].lo, plan.assortments[i].hi};
    pieces.push_back(estimate_piece(xlog, i, spec, grid));
  }
  out.estimate = combine_vhat(std::move(pieces), plan, std::move(grid));

  const Instance est_inst(out.estimate.as_preference(), inst.w, inst.capacity);
  out.exploitation_assortment = solve_capacitated(est_inst).assortment;
  const double exploit_regret =
      std::max(0.0, out.rho_star - model.expected_revenue(out.exploitation_assortment));

  for (long long t = explore * n_test + 1; t <= horizon; ++t) {
    PurchaseOutcome outcome;
    if (opt.record_log) outcome = model.sample(out.exploitation_assortment, rng);
    note_period(t, out.exploitation_assortment, outcome, exploit_regret);
  }
  out.regret.total = cum;
  return out;
}

// ---------------------------------------------------------------------------
// Discretization baselines
// ---------------------------------------------------------------------------

/// Uniform bins with their preference masses, averaged profits, and the true
/// per-bin revenue masses (the latter only for regret accounting).
struct DiscreteBins {
  int count = 0;
  std::vector<double> pref;          // v_i = integral of v over the bin
  std::vector<double> profit;        // w_i = N * integral of w over the bin
  std::vector<double> revenue_mass;  // integral of v*w over the bin
  double bin_lo(int i) const { return static_cast<double>(i) / count; }
  double bin_hi(int i) const { return static_cast<double>(i + 1) / count; }
};

inline DiscreteBins discretize(const Instance& inst, int bins) {
  if (bins < 1) throw std::invalid_argument("need at least one bin");
  DiscreteBins out;
  out.count = bins;
  const auto vw = [&](double x) { return inst.v(x) * inst.w(x); };
  for (int i = 0; i < bins; ++i) {
    const double lo = static_cast<double>(i) / bins;
    const double hi = static_cast<double>(i + 1) / bins;
    out.pref.push_back(quad::integrate_adaptive(inst.v, lo, hi, 1e-11));
    out.profit.push_back(bins * quad::integrate_adaptive(inst.w, lo, hi, 1e-11));
    out.revenue_mass.push_back(quad::integrate_adaptive(vw, lo, hi, 1e-11));
  }
  return out;
}

struct DiscreteOptResult {
  std::vector<int> products;  // 0-based bin indices, ascending
  double revenue = 0.0;
  double rho = 0.0;
};

/// Static optimum of the discrete MNL with at most K products: bisection on
/// rho, selecting the top-K positive scores v_i (w_i - rho).
inline DiscreteOptResult discrete_static_opt(const std::vector<double>& pref,
                                             const std::vector<double>& profit,
                                             int max_products) {
  const int n = static_cast<int>(pref.size());
  if (n == 0 || pref.size() != profit.size())
    throw std::invalid_argument("preference and profit vectors must match");
  if (max_products < 1 || max_products > n)
    throw std::invalid_argument("capacity K must be in 1..N");

  std::vector<int> order(n);
  auto top_k = [&](double rho, std::vector<int>* selected) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return pref[a] * (profit[a] - rho) > pref[b] * (profit[b] - rho);
    });
    double sum = 0.0;
    if (selected) selected->clear();
    for (int k = 0; k < max_products; ++k) {
      const int i = order[k];
      const double score = pref[i] * (profit[i] - rho);
      if (score <= 0.0) break;
      sum += score;
      if (selected) selected->push_back(i);
    }
    return sum;
  };

  double a = 0.0, b = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double piv = a + (b - a) / 2.0;
    if (top_k(piv, nullptr) > piv)
      a = piv;
    else
      b = piv;
  }
  DiscreteOptResult out;
  out.rho = a + (b - a) / 2.0;
  top_k(out.rho, &out.products);
  std::sort(out.products.begin(), out.products.end());
  double num = 0.0, den = 1.0;
  for (int i : out.products) {
    num += pref[i] * profit[i];
    den += pref[i];
  }
  out.revenue = num / den;
  return out;
}

enum class BanditVariant { ucb, ts };

struct BanditConfig {
  BanditVariant variant = BanditVariant::ucb;
  int max_products = 1;      // K
  double c1 = 1.0;           // sqrt-term confidence constant
  double c2 = 1.0;           // linear-term confidence constant
  double initial_optimism = 1.0;
};

struct BanditRunResult {
  SalesLog log;
  RegretSeries regret;
  std::vector<double> mean_estimates;   // v_bar per product at the end
  std::vector<long long> epoch_counts;  // epochs each product was offered
  long long completed_epochs = 0;
  double rho_star = 0.0;
  std::vector<double> checkpoint_cum;
};

/// Epoch-based MNL bandit on the discretized product space. Customers are
/// simulated at bin level with the true bin preferences, which matches the
/// continuous model restricted to bin assortments. Regret is measured against
/// the continuous optimum.
inline BanditRunResult run_discrete_bandit(const Instance& inst, const DiscreteBins& bins,
                                           const BanditConfig& cfg, long long horizon,
                                           Rng& rng, const RunOptions& opt = {}) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  const int n = bins.count;
  if (cfg.max_products < 1 || cfg.max_products > n)
    throw std::invalid_argument("capacity K must be in 1..N");

  BanditRunResult out;
  out.rho_star = std::isnan(opt.rho_star_hint) ? solve_capacitated(inst).rho_star
                                               : opt.rho_star_hint;
  const double log_t = std::log(static_cast<double>(std::max<long long>(horizon, 2)));

  std::vector<long long> epochs(n, 0);
  std::vector<double> total_buys(n, 0.0);
  std::vector<double> epoch_buys(n, 0.0);
  std::vector<double> optimistic(n, 0.0);
  std::vector<int> current;
  double current_pref_sum = 0.0;
  double current_regret = 0.0;
  Assortment current_set;
  bool need_assortment = true;
  double cum = 0.0;
  std::size_t next_ck = 0;

  auto pick_assortment = [&]() {
    for (int i = 0; i < n; ++i) {
      if (epochs[i] == 0) {
        optimistic[i] = cfg.initial_optimism;
        continue;
      }
      const double mean = total_buys[i] / static_cast<double>(epochs[i]);
      if (cfg.variant == BanditVariant::ucb) {
        optimistic[i] = mean + cfg.c1 * std::sqrt(mean * log_t / epochs[i]) +
                        cfg.c2 * log_t / epochs[i];
      } else {
        if (mean > 0.0) {
          // Gamma moment-matched to mean v_bar and variance v_bar(v_bar+1)/T_i.
          const double shape = mean * epochs[i] / (mean + 1.0);
          const double scale = (mean + 1.0) / epochs[i];
          optimistic[i] = rng.gamma(shape, scale);
        } else {
          optimistic[i] = rng.gamma(1.0, 1.0 / epochs[i]);
        }
      }
    }
    current = discrete_static_opt(optimistic, bins.profit, cfg.max_products).products;
    if (current.empty()) {
      int best = 0;
      for (int i = 1; i < n; ++i)
        if (bins.profit[i] > bins.profit[best]) best = i;
      current = {best};
    }
    current_pref_sum = 0.0;
    double revenue_sum = 0.0;
    std::vector<Interval> ivs;
    for (int i : current) {
      current_pref_sum += bins.pref[i];
      revenue_sum += bins.revenue_mass[i];
      ivs.push_back({bins.bin_lo(i), bins.bin_hi(i)});
    }
    current_set = Assortment(std::move(ivs));
    current_regret =
        std::max(0.0, out.rho_star - revenue_sum / (1.0 + current_pref_sum));
    std::fill(epoch_buys.begin(), epoch_buys.end(), 0.0);
  };

  for (long long t = 1; t <= horizon; ++t) {
    if (need_assortment) {
      pick_assortment();
      need_assortment = false;
    }
    cum += current_regret;
    // bin-level MNL draw: outside weight 1, bin i weight pref[i]
    const double tau = rng.uniform() * (1.0 + current_pref_sum);
    PurchaseOutcome outcome;
    if (tau <= 1.0) {
      outcome = PurchaseOutcome::no_purchase();
      for (int i : current) {
        epochs[i] += 1;
        total_buys[i] += epoch_buys[i];
      }
      out.completed_epochs += 1;
      need_assortment = true;
    } else {
      double m = tau - 1.0;
      int chosen = current.back();
      for (int i : current) {
        if (m <= bins.pref[i]) {
          chosen = i;
          break;
        }
        m -= bins.pref[i];
      }
      epoch_buys[chosen] += 1.0;
      outcome = PurchaseOutcome::buy(0.5 * (bins.bin_lo(chosen) + bins.bin_hi(chosen)));
    }
    if (opt.record_series) {
      out.regret.instantaneous.push_back(current_regret);
      out.regret.cumulative.push_back(cum);
    }
    if (opt.record_log) out.log.push_back({t, current_set, outcome, current_regret});
    while (next_ck < opt.checkpoints.size() && opt.checkpoints[next_ck] == t) {
      out.checkpoint_cum.push_back(cum);
      ++next_ck;
    }
  }
  out.regret.total = cum;
  out.epoch_counts = epochs;
  out.mean_estimates.resize(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (epochs[i] > 0) out.mean_estimates[i] = total_buys[i] / epochs[i];
  return out;
}

}  // namespace contassort
