#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "contassort/assortment.hpp"
#include "contassort/errors.hpp"
#include "contassort/legendre.hpp"
#include "contassort/model.hpp"

namespace contassort {

/// N = ceil(1/c) overlapping test assortments of length exactly c that cover
/// [0,1]: S^i = [(i-1)(1-c)/(N-1), (i-1)(1-c)/(N-1) + c].
struct TestPlan {
  double c = 0.0;
  int count = 0;
  std::vector<Interval> assortments;

  static TestPlan make(double c) {
    if (!(c > 0.0 && c < 1.0))
      throw std::invalid_argument("test plan requires capacity in (0,1)");
    TestPlan plan;
    plan.c = c;
    plan.count = std::max(2, static_cast<int>(std::ceil(1.0 / c - 1e-9)));
    plan.assortments.reserve(plan.count);
    for (int i = 0; i < plan.count; ++i) {
      const double lo = (1.0 - c) * static_cast<double>(i) / (plan.count - 1);
      plan.assortments.push_back({lo, lo + c});
    }
    plan.assortments.back() = {1.0 - c, 1.0};  // pin against rounding
    return plan;
  }

  /// Number of test assortments containing x.
  int overlap_count(double x) const {
    int k = 0;
    for (const auto& iv : assortments)
      if (x >= iv.lo && x <= iv.hi) ++k;
    return k;
  }
};

struct ShiftCoefficients {
  double gamma = 1.0;
  double zeta = 0.0;
  double u_lo = -1.0;  // shifted support I_x = [u_lo, u_hi]
  double u_hi = 1.0;
};

/// Boundary shift for the Legendre kernel on [a,b] at point x.
inline ShiftCoefficients shift_coefficients(double x, double a, double b, double h) {
  if (!(h > 0.0 && h <= 0.5 * (b - a)))
    throw std::invalid_argument("bandwidth must satisfy 0 < h <= (b-a)/2");
  if (x < a || x > b) throw std::invalid_argument("x outside the kernel support");
  ShiftCoefficients sc;
  if (x < a + h) {
    sc.gamma = 2.0 * h / (h + x - a);
    sc.zeta = -(h - (x - a)) / (h + x - a);
  } else if (x <= b - h) {
    sc.gamma = 1.0;
    sc.zeta = 0.0;
  } else {
    sc.gamma = 2.0 * h / (h + b - x);
    sc.zeta = (h - (b - x)) / (h + b - x);
  }
  sc.u_lo = -std::min(1.0, (x - a) / h);
  sc.u_hi = std::min(1.0, (b - x) / h);
  return sc;
}

struct KernelSpec {
  double h = 0.0;
  int order = 0;
  double a = 0.0;
  double b = 1.0;
};

/// Legendre boundary kernel K_x(u) of the given order; zero outside I_x.
inline double kernel_eval(const KernelSpec& spec, double x, double u) {
  const ShiftCoefficients sc = shift_coefficients(x, spec.a, spec.b, spec.h);
  if (u < sc.u_lo || u > sc.u_hi) return 0.0;
  double t = sc.gamma * u + sc.zeta;
  t = std::min(1.0, std::max(-1.0, t));
  double sum = 0.0;
  for (int j = 0; j <= spec.order; ++j)
    sum += legendre_phi(j, sc.zeta) * legendre_phi(j, t);
  return sc.gamma * sum;
}

struct BandwidthOrder {
  double h = 0.0;
  int order = 0;
  double beta = 0.0;
};

/// h* = min{c/2, 1/e}; beta* = log(-2 n log h*)/2 - 1/2; order = max{0, floor(beta*)}.
inline BandwidthOrder bandwidth_and_order(double c, long long n) {
  if (n < 1) throw std::invalid_argument("sample count must be >= 1");
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("capacity must be in (0,1]");
  BandwidthOrder out;
  out.h = std::min(0.5 * c, std::exp(-1.0));
  out.beta = 0.5 * std::log(-2.0 * static_cast<double>(n) * std::log(out.h)) - 0.5;
  out.order = std::max(0, static_cast<int>(std::floor(out.beta)));
  return out;
}

/// Purchases and no-purchase tallies gathered while each test assortment was
/// offered `offers_per_piece` times.
struct ExplorationLog {
  struct Piece {
    std::vector<double> purchases;
    long long no_purchases = 0;
  };
  std::vector<Piece> pieces;
  long long offers_per_piece = 0;
};

struct PieceEstimate {
  double alpha_hat = 0.0;            // |A_i| / (|E_i|+1)
  std::vector<double> f_hat;         // density estimate on the grid
  std::vector<double> v_hat;         // alpha_hat * f_hat, zero off the piece
};

inline std::vector<double> uniform_grid(int knots) {
  if (knots < 2) throw std::invalid_argument("grid needs at least two knots");
  std::vector<double> g(knots);
  for (int i = 0; i < knots; ++i)
    g[i] = static_cast<double>(i) / (knots - 1);
  return g;
}

/// Kernel estimates for one test assortment on the given grid. Knots outside
/// [a_i, b_i] stay zero. The per-knot shift data is precomputed so the sum
/// over purchases only runs the recurrence for phi_j(gamma u + zeta).
inline PieceEstimate estimate_piece(const ExplorationLog& log, int piece_index,
                                    const KernelSpec& spec,
                                    const std::vector<double>& grid) {
  if (log.offers_per_piece == 0)
    throw EmptyExplorationError("no offers recorded for the exploration phase");
  const auto& piece = log.pieces.at(piece_index);
  const std::size_t n_knots = grid.size();
  PieceEstimate out;
  out.f_hat.assign(n_knots, 0.0);
  out.v_hat.assign(n_knots, 0.0);
  const double n_buy = static_cast<double>(piece.purchases.size());
  out.alpha_hat = n_buy / static_cast<double>(piece.no_purchases + 1);
  if (piece.purchases.empty()) return out;

  struct KnotData {
    double gamma, zeta, u_lo, u_hi;
    std::vector<double> phi_zeta;
  };
  std::vector<std::size_t> active;
  std::vector<KnotData> data;
  for (std::size_t k = 0; k < n_knots; ++k) {
    const double x = grid[k];
    if (x < spec.a || x > spec.b) continue;
    const ShiftCoefficients sc = shift_coefficients(x, spec.a, spec.b, spec.h);
    KnotData kd{sc.gamma, sc.zeta, sc.u_lo, sc.u_hi, {}};
    kd.phi_zeta.resize(spec.order + 1);
    for (int j = 0; j <= spec.order; ++j) kd.phi_zeta[j] = legendre_phi(j, sc.zeta);
    active.push_back(k);
    data.push_back(std::move(kd));
  }

  std::vector<double> sums(active.size(), 0.0);
  for (double purchase : piece.purchases) {
    for (std::size_t idx = 0; idx < active.size(); ++idx) {
      const double x = grid[active[idx]];
      const double u = (purchase - x) / spec.h;
      const KnotData& kd = data[idx];
      if (u < kd.u_lo || u > kd.u_hi) continue;
      double t = kd.gamma * u + kd.zeta;
      t = std::min(1.0, std::max(-1.0, t));
      // orthonormal Legendre recurrence at t
      double sum = kd.phi_zeta[0] * 0.7071067811865476;  // phi_0(t)
      if (spec.order >= 1) {
        double pm1 = 1.0, p = t;
        sum += kd.phi_zeta[1] * std::sqrt(1.5) * p;
        for (int j = 2; j <= spec.order; ++j) {
          const double next = ((2.0 * j - 1.0) * t * p - (j - 1.0) * pm1) / j;
          pm1 = p;
          p = next;
          sum += kd.phi_zeta[j] * std::sqrt((2.0 * j + 1.0) / 2.0) * p;
        }
      }
      sums[idx] += kd.gamma * sum;
    }
  }
  const double f_scale = 1.0 / (n_buy * spec.h);
  const double v_scale = out.alpha_hat * f_scale;
  for (std::size_t idx = 0; idx < active.size(); ++idx) {
    out.f_hat[active[idx]] = sums[idx] * f_scale;
    out.v_hat[active[idx]] = sums[idx] * v_scale;
  }
  return out;
}

/// Combined estimate: overlap-averaged piece estimates, clipped at zero.
struct EstimatedPreference {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<PieceEstimate> pieces;
  TestPlan plan;

  PreferenceFunction as_preference() const {
    return PreferenceFunction::from_grid(values);
  }

  double value_at(double x) const {
    const std::size_t n = values.size() - 1;
    double t = x * static_cast<double>(n);
    if (t <= 0.0) return values.front();
    if (t >= static_cast<double>(n)) return values.back();
    const std::size_t k = static_cast<std::size_t>(t);
    const double frac = t - static_cast<double>(k);
    return values[k] * (1.0 - frac) + values[k + 1] * frac;
  }
};

inline EstimatedPreference combine_vhat(std::vector<PieceEstimate> pieces,
                                        const TestPlan& plan,
                                        std::vector<double> grid) {
  if (pieces.size() != static_cast<std::size_t>(plan.count))
    throw std::invalid_argument("one piece estimate per test assortment required");
  EstimatedPreference out;
  out.values.assign(grid.size(), 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const int overlap = plan.overlap_count(grid[k]);
    double sum = 0.0;
    for (const auto& piece : pieces) sum += piece.v_hat[k];
    out.values[k] = std::max(0.0, sum / std::max(overlap, 1));
  }
  out.grid = std::move(grid);
  out.pieces = std::move(pieces);
  out.plan = plan;
  return out;
}

}  // namespace contassort
