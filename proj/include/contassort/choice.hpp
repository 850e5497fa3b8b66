#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "contassort/assortment.hpp"
#include "contassort/model.hpp"
#include "contassort/quadrature.hpp"
#include "contassort/rng.hpp"

namespace contassort {

struct PurchaseOutcome {
  bool purchased = false;
  double product = 0.0;  // meaningful only when purchased

  static PurchaseOutcome no_purchase() { return {}; }
  static PurchaseOutcome buy(double x) { return {true, x}; }
};

/// Integral of `f` over an interval union, adaptive per interval.
template <typename F>
double integrate_over(const F& f, const Assortment& s, double tol = 1e-10) {
  if (s.is_empty()) return 0.0;
  const double per_piece = tol / static_cast<double>(s.piece_count());
  double total = 0.0;
  for (const auto& iv : s.intervals())
    total += quad::integrate_adaptive(f, iv.lo, iv.hi, per_piece);
  return total;
}

inline double no_purchase_prob(const Instance& inst, const Assortment& s,
                               double tol = 1e-10) {
  const double mass = integrate_over(inst.v, s, tol);
  return 1.0 / (1.0 + mass);
}

/// P(X^S in A); A is intersected with S before evaluating.
inline double purchase_prob_in(const Instance& inst, const Assortment& s,
                               const Assortment& a, double tol = 1e-10) {
  const Assortment inside = a.intersect(s);
  if (inside.is_empty()) return 0.0;
  const double num = integrate_over(inst.v, inside, tol);
  const double den = 1.0 + integrate_over(inst.v, s, tol);
  return num / den;
}

inline double expected_revenue(const Instance& inst, const Assortment& s,
                               double tol = 1e-10) {
  if (s.is_empty()) return 0.0;
  const auto vw = [&](double x) { return inst.v(x) * inst.w(x); };
  const double num = integrate_over(vw, s, tol);
  const double den = 1.0 + integrate_over(inst.v, s, tol);
  return num / den;
}

inline double l1_distance(const PreferenceFunction& v1, const PreferenceFunction& v2,
                          double tol = 1e-10) {
  const auto diff = [&](double x) { return std::fabs(v1(x) - v2(x)); };
  return quad::integrate_adaptive(diff, 0.0, 1.0, tol);
}

namespace detail {

/// Cumulative integral table of a nonnegative function on [a,b]: per-segment
/// Gauss-Legendre panels with prefix sums at the knots. Supports point
/// evaluation of the antiderivative and its inverse (bisection to 1e-10 in x).
class MassTable {
public:
  MassTable() = default;

  template <typename F>
  MassTable(const F& f, double a, double b, int segments) : a_(a), b_(b) {
    const int n = std::max(segments, 1);
    knots_.resize(n + 1);
    cum_.resize(n + 1);
    partial_ = [f](double lo, double hi) { return quad::gauss_legendre_3(f, lo, hi); };
    const double width = (b - a) / n;
    cum_[0] = 0.0;
    knots_[0] = a;
    for (int k = 1; k <= n; ++k) {
      knots_[k] = (k == n) ? b : a + width * k;
      cum_[k] = cum_[k - 1] + quad::gauss_legendre_7(f, knots_[k - 1], knots_[k]);
    }
  }

  double total() const { return cum_.back(); }

  /// Antiderivative F(x) - F(a).
  double value(double x) const {
    if (x <= a_) return 0.0;
    if (x >= b_) return cum_.back();
    const std::size_t k = locate(x);
    return cum_[k] + partial_(knots_[k], x);
  }

  double integral(double lo, double hi) const {
    if (hi <= lo) return 0.0;
    return value(hi) - value(lo);
  }

  /// Smallest x in [lo,hi] with F(x) - F(lo) = target, to 1e-10 in x.
  double invert(double lo, double hi, double target) const {
    lo = std::max(lo, a_);
    hi = std::min(hi, b_);
    const double base = value(lo);
    const double goal = base + std::max(0.0, target);
    std::size_t k = locate_mass(goal);
    double xlo = std::max(knots_[k], lo);
    double xhi = std::min(knots_[k + 1], hi);
    if (xhi <= xlo) return std::min(std::max(lo, knots_[k]), hi);
    for (int it = 0; it < 60 && xhi - xlo > 1e-10; ++it) {
      const double mid = 0.5 * (xlo + xhi);
      const double fm = cum_[k] + partial_(knots_[k], mid);
      if (fm < goal)
        xlo = mid;
      else
        xhi = mid;
    }
    return 0.5 * (xlo + xhi);
  }

private:
  std::size_t locate(double x) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    std::size_t k = static_cast<std::size_t>(it - knots_.begin());
    if (k == 0) return 0;
    if (k >= knots_.size()) return knots_.size() - 2;
    return k - 1;
  }

  std::size_t locate_mass(double m) const {
    auto it = std::upper_bound(cum_.begin(), cum_.end(), m);
    std::size_t k = static_cast<std::size_t>(it - cum_.begin());
    if (k == 0) return 0;
    if (k >= cum_.size()) return cum_.size() - 2;
    return k - 1;
  }

  double a_ = 0.0, b_ = 1.0;
  std::vector<double> knots_;
  std::vector<double> cum_;
  std::function<double(double, double)> partial_;
};

}  // namespace detail

/// Inverse-CDF purchase sampler for a fixed assortment: one cumulative table
/// per interval (4096 knots each), one uniform draw per customer.
class PurchaseSampler {
public:
  PurchaseSampler(const Instance& inst, const Assortment& s, int knots_per_interval = 4096)
      : intervals_(s.intervals()) {
    tables_.reserve(intervals_.size());
    masses_.reserve(intervals_.size());
    for (const auto& iv : intervals_) {
      tables_.emplace_back(inst.v, iv.lo, iv.hi, knots_per_interval);
      masses_.push_back(tables_.back().total());
    }
    total_mass_ = 0.0;
    for (double m : masses_) total_mass_ += m;
  }

  double mass() const { return total_mass_; }

  PurchaseOutcome draw(Rng& rng) const {
    const double tau = rng.uniform() * (1.0 + total_mass_);
    if (tau <= 1.0 || total_mass_ <= 0.0) return PurchaseOutcome::no_purchase();
    double m = tau - 1.0;
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
      if (m <= masses_[i] || i + 1 == intervals_.size()) {
        m = std::min(m, masses_[i]);
        return PurchaseOutcome::buy(
            tables_[i].invert(intervals_[i].lo, intervals_[i].hi, m));
      }
      m -= masses_[i];
    }
    return PurchaseOutcome::no_purchase();  // unreachable
  }

private:
  std::vector<Interval> intervals_;
  std::vector<detail::MassTable> tables_;
  std::vector<double> masses_;
  double total_mass_ = 0.0;
};

inline PurchaseOutcome sample_purchase(const Instance& inst, const Assortment& s,
                                       Rng& rng) {
  return PurchaseSampler(inst, s).draw(rng);
}

/// Per-instance cache of the cumulative integrals of v and v*w on [0,1].
/// Policy loops use it for O(1) revenue evaluation and purchase sampling
/// against arbitrary assortments.
class CachedModel {
public:
  explicit CachedModel(const Instance& inst, int segments = 16384)
      : v_table_(inst.v, 0.0, 1.0, segments),
        vw_table_([&inst](double x) { return inst.v(x) * inst.w(x); }, 0.0, 1.0,
                  segments) {}

  double mass(const Assortment& s) const {
    double m = 0.0;
    for (const auto& iv : s.intervals()) m += v_table_.integral(iv.lo, iv.hi);
    return m;
  }

  double revenue_mass(const Assortment& s) const {
    double m = 0.0;
    for (const auto& iv : s.intervals()) m += vw_table_.integral(iv.lo, iv.hi);
    return m;
  }

  double no_purchase_prob(const Assortment& s) const { return 1.0 / (1.0 + mass(s)); }

  double expected_revenue(const Assortment& s) const {
    if (s.is_empty()) return 0.0;
    return revenue_mass(s) / (1.0 + mass(s));
  }

  PurchaseOutcome sample(const Assortment& s, Rng& rng) const {
    const auto& ivs = s.intervals();
    if (ivs.empty()) return PurchaseOutcome::no_purchase();
    double total = mass(s);
    const double tau = rng.uniform() * (1.0 + total);
    if (tau <= 1.0 || total <= 0.0) return PurchaseOutcome::no_purchase();
    double m = tau - 1.0;
    for (std::size_t i = 0; i < ivs.size(); ++i) {
      const double piece = v_table_.integral(ivs[i].lo, ivs[i].hi);
      if (m <= piece || i + 1 == ivs.size()) {
        m = std::min(m, piece);
        return PurchaseOutcome::buy(v_table_.invert(ivs[i].lo, ivs[i].hi, m));
      }
      m -= piece;
    }
    return PurchaseOutcome::no_purchase();  // unreachable
  }

private:
  detail::MassTable v_table_;
  detail::MassTable vw_table_;
};

}  // namespace contassort
