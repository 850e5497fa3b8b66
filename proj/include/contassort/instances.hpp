#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "contassort/errors.hpp"
#include "contassort/model.hpp"

namespace contassort {

inline double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * 2.506628274631000502415765284811);
}

namespace detail {

template <typename F>
std::pair<double, double> scan_bounds(const F& f, int points = 10000) {
  double lo = f(0.0), hi = lo;
  for (int k = 1; k <= points; ++k) {
    const double v = f(static_cast<double>(k) / points);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // small margin so the declared bounds also hold between scan points
  return {lo * (1.0 - 1e-6), hi * (1.0 + 1e-6)};
}

}  // namespace detail

/// Bimodal benchmark preference (two Gaussian bumps over a concave base)
/// with the identity profit curve.
inline Instance make_bimodal_instance(double capacity) {
  auto v = [](double x) {
    return 0.1 + 0.2 * (2.0 + x) * (1.0 - x) + (2.0 / 7.0) * normal_pdf(x, 0.33, 0.1) +
           0.2 * normal_pdf(x, 0.8, 0.1);
  };
  const auto [lo, hi] = detail::scan_bounds(v);
  return Instance(PreferenceFunction(v, lo, hi), ProfitCurve::identity(), capacity);
}

inline Instance make_uniform_instance(double capacity, double level = 1.0) {
  return Instance(PreferenceFunction::constant(level), ProfitCurve::identity(), capacity);
}

/// Parameters of the capacitated worst-case instance family.
struct LowerBoundParams {
  double c = 0.25;
  double s = 0.2;       // 0.8 c
  double delta = 0.5;
  double sigma = 0.3;
  int bumps_count = 0;  // K
  int bin_count = 0;    // N_K = floor(K / c)
  double beta = 0.0;    // mass of the tails folded back into the bins
  std::vector<int> bumps;  // 1-based bin indices carrying a bump
};

inline LowerBoundParams lower_bound_params(double c, int K, const std::vector<int>& bumps) {
  if (!(c > 0.0 && c <= 0.25))
    throw std::invalid_argument("lower-bound family requires c in (0, 0.25]");
  if (K < 2) throw std::invalid_argument("lower-bound family requires K >= 2");
  LowerBoundParams p;
  p.c = c;
  p.s = 0.8 * c;
  p.bumps_count = K;
  p.bin_count = static_cast<int>(std::floor(static_cast<double>(K) / c + 1e-9));
  if (!bumps.empty()) {
    if (static_cast<int>(bumps.size()) != K)
      throw BadIndexSetError("bump index set must have exactly K elements");
    std::set<int> seen;
    for (int i : bumps) {
      if (i < 1 || i > p.bin_count)
        throw BadIndexSetError("bump index outside 1..N_K");
      if (!seen.insert(i).second) throw BadIndexSetError("duplicate bump index");
    }
  }
  p.bumps = bumps;
  // beta = (c/K) (sigma sqrt(2 pi))^{-1} sum_n exp(-(2n-1)^2 / (2 sigma^2)),
  // truncated at |n| <= 10; with sigma = 0.3 the first dropped term is
  // exp(-441/0.18) < 1e-1000, far below double precision.
  double tail_sum = 0.0;
  for (int n = -10; n <= 10; ++n) {
    const double t = 2.0 * n - 1.0;
    tail_sum += std::exp(-t * t / (2.0 * p.sigma * p.sigma));
  }
  p.beta = (c / K) * tail_sum / (p.sigma * 2.506628274631000502415765284811);
  return p;
}

/// Strictly increasing profit curve of the lower-bound family, with its
/// analytic inverse.
inline ProfitCurve lower_bound_profit(double c) {
  const double s = 0.8 * c;
  const double delta = 0.5;
  const double scale = (1.0 - s) * (1.0 - delta);
  auto w = [scale, delta, s](double x) { return scale / (1.0 - delta * x) + s; };
  auto inv = [scale, delta, s](double rho) {
    return (1.0 - scale / (rho - s)) / delta;
  };
  const double k_w = scale * delta;  // w' is increasing; minimum at x = 0
  return ProfitCurve(w, k_w, inv);
}

/// Baseline preference v_0 = s / (c (w - s)); any volume-c assortment is
/// optimal for it and the optimal expected revenue equals s.
inline Instance make_baseline_instance(double c) {
  if (!(c > 0.0 && c <= 0.25))
    throw std::invalid_argument("baseline instance requires c in (0, 0.25]");
  const double s = 0.8 * c;
  const double delta = 0.5;
  const double denom = c * (1.0 - s) * (1.0 - delta);
  auto v0 = [s, delta, denom](double x) { return s * (1.0 - delta * x) / denom; };
  const double hi = v0(0.0);
  const double lo = v0(1.0);
  return Instance(PreferenceFunction(v0, lo, hi), lower_bound_profit(c), c);
}

inline double lb_bump(const LowerBoundParams& p, int bin_index, double x) {
  const double phi = 2.0 * p.bumps_count * x / p.c - 2.0 * bin_index + 1.0;
  return (p.c / p.bumps_count) * normal_pdf(phi, 0.0, p.sigma);
}

inline double lb_epsilon(const LowerBoundParams& p, double x) {
  double sum = 0.0;
  for (int i : p.bumps) sum += lb_bump(p, i, x);
  return sum - p.beta;
}

/// Perturbed preference v_I = v_0 (1 + sum of bumps - beta) on the same
/// profit curve; used as the hard-instance generator.
inline Instance make_lower_bound_instance(double c, int K, const std::vector<int>& bumps) {
  const LowerBoundParams p = lower_bound_params(c, K, bumps);
  if (static_cast<int>(bumps.size()) != K)
    throw BadIndexSetError("bump index set must have exactly K elements");
  const double s = p.s;
  const double delta = p.delta;
  const double denom = c * (1.0 - s) * (1.0 - delta);
  auto v = [p, s, delta, denom](double x) {
    const double base = s * (1.0 - delta * x) / denom;
    return base * (1.0 + lb_epsilon(p, x));
  };
  const auto [lo, hi] = detail::scan_bounds(v, 20000);
  return Instance(PreferenceFunction(v, lo, hi), lower_bound_profit(c), c);
}

}  // namespace contassort
