#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "contassort/assortment.hpp"
#include "contassort/choice.hpp"
#include "contassort/errors.hpp"
#include "contassort/model.hpp"

namespace contassort {

struct SolverConfig {
  int outer_iters = 60;
  int inner_iters = 60;
  int grid_points = 4096;
  double root_tol = 1e-12;
  double quad_tol = 1e-10;
};

struct LevelSetResult {
  double level = 0.0;
  Assortment plus_set;   // {x : h(x,rho) > level}
  Assortment equal_set;  // flat cells with |h - level| <= root_tol
  double fill_x = 0.0;   // right end of the leftmost slice taken from equal_set
};

struct SolveResult {
  double rho_star = 0.0;
  Assortment assortment;
  std::vector<std::pair<double, double>> trace;  // (rho pivot, I(S_piv, piv))
};

/// S |-> integral over S of v(x)(w(x) - rho).
inline double inner_value(const Instance& inst, const Assortment& s, double rho,
                          double tol = 1e-10) {
  const auto f = [&](double x) { return inst.v(x) * (inst.w(x) - rho); };
  return integrate_over(f, s, tol);
}

/// {x : w(x) >= rho}. Since w is strictly increasing this is [w^{-1}(rho), 1],
/// the whole interval for rho <= w(0), and empty for rho > w(1).
inline Assortment upper_level_set(const Instance& inst, double rho) {
  if (rho <= inst.w(0.0)) return Assortment::unit();
  if (rho > inst.w(1.0)) return Assortment{};
  const double y = inst.w.inverse(rho);
  return Assortment{{y, 1.0}};
}

namespace detail {

/// Grid evaluation of h(x,rho) = v(x)(w(x)-rho) with sign-change bracketing.
/// v and w are sampled once; h values are refreshed per rho.
class LevelScan {
public:
  LevelScan(const Instance& inst, int grid_points)
      : inst_(inst), n_(std::max(grid_points, 64)) {
    x_.resize(n_ + 1);
    v_.resize(n_ + 1);
    w_.resize(n_ + 1);
    h_.resize(n_ + 1);
    for (int k = 0; k <= n_; ++k) {
      x_[k] = static_cast<double>(k) / n_;
      v_[k] = inst.v(x_[k]);
      w_[k] = inst.w(x_[k]);
    }
  }

  void prepare(double rho) {
    rho_ = rho;
    for (int k = 0; k <= n_; ++k) h_[k] = v_[k] * (w_[k] - rho);
  }

  double h(double x) const { return inst_.v(x) * (inst_.w(x) - rho_); }

  /// Volume of {h >= ell}; brackets refined by bisection to root_tol.
  double volume_at(double ell, double root_tol) const {
    double vol = 0.0;
    for (int k = 0; k < n_; ++k) {
      const bool in0 = h_[k] >= ell;
      const bool in1 = h_[k + 1] >= ell;
      if (in0 && in1) {
        vol += x_[k + 1] - x_[k];
      } else if (in0 != in1) {
        const double cross = refine(x_[k], x_[k + 1], ell, root_tol);
        vol += in0 ? (cross - x_[k]) : (x_[k + 1] - cross);
      }
    }
    return vol;
  }

  /// Extracts {h > ell} and the flat part {|h - ell| <= root_tol}. Flat cells
  /// (both endpoints within root_tol) go to `equal`; the rest of {h >= ell}
  /// goes to `plus`, with crossings refined to root_tol.
  void sets_at(double ell, double root_tol, Assortment* plus, Assortment* equal) const {
    std::vector<Interval> ge, eq;
    for (int k = 0; k < n_; ++k) {
      const bool flat0 = std::fabs(h_[k] - ell) <= root_tol;
      const bool flat1 = std::fabs(h_[k + 1] - ell) <= root_tol;
      if (flat0 && flat1) {
        eq.push_back({x_[k], x_[k + 1]});
        continue;
      }
      const bool in0 = h_[k] >= ell;
      const bool in1 = h_[k + 1] >= ell;
      if (in0 && in1) {
        ge.push_back({x_[k], x_[k + 1]});
      } else if (in0 != in1) {
        const double cross = refine(x_[k], x_[k + 1], ell, root_tol);
        if (in0)
          ge.push_back({x_[k], cross});
        else
          ge.push_back({cross, x_[k + 1]});
      }
    }
    *plus = Assortment(std::move(ge));
    *equal = Assortment(std::move(eq));
  }

  int grid_points() const { return n_; }

private:
  double refine(double lo, double hi, double ell, double root_tol) const {
    // h - ell changes sign between lo and hi.
    double flo = h(lo) - ell;
    for (int it = 0; it < 64 && hi - lo > root_tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = h(mid) - ell;
      if ((flo >= 0.0) == (fm >= 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  const Instance& inst_;
  int n_;
  double rho_ = 0.0;
  std::vector<double> x_, v_, w_, h_;
};

/// IB(n, rho): bisection for ell_rho = max{ell >= 0 : vol(h >= ell) >= c}.
/// The scan must already be prepared at rho.
inline LevelSetResult inner_bisection_impl(const Instance& inst, const LevelScan& scan,
                                           double rho, const SolverConfig& cfg) {
  const double c = inst.capacity;
  double a = 0.0;
  double b = inst.v.upper_bound() * (inst.w(1.0) - rho) + 1.0;
  for (int i = 0; i < cfg.inner_iters; ++i) {
    const double piv = a + (b - a) / 2.0;
    if (scan.volume_at(piv, cfg.root_tol) > c)
      a = piv;
    else
      b = piv;
  }
  LevelSetResult out;
  out.level = a + (b - a) / 2.0;
  scan.sets_at(out.level, cfg.root_tol, &out.plus_set, &out.equal_set);

  const double deficit = c - out.plus_set.volume();
  out.fill_x = 0.0;
  if (deficit > 0.0 && !out.equal_set.is_empty()) {
    double need = deficit;
    for (const auto& iv : out.equal_set.intervals()) {
      const double take = std::min(need, iv.length());
      need -= take;
      if (need <= 0.0) {
        out.fill_x = iv.lo + take;
        break;
      }
      out.fill_x = iv.hi;
    }
  }
  return out;
}

inline Assortment assemble_capacitated(const LevelSetResult& lsr, double c) {
  const double deficit = c - lsr.plus_set.volume();
  if (deficit < 0.0) return lsr.plus_set.leftmost_slice(c);
  if (deficit == 0.0 || lsr.equal_set.is_empty()) return lsr.plus_set;
  return lsr.plus_set.unite(lsr.equal_set.leftmost_slice(deficit));
}

inline Assortment inner_max_impl(const Instance& inst, LevelScan& scan, double rho,
                                 const SolverConfig& cfg) {
  const Assortment w_set = upper_level_set(inst, rho);
  if (w_set.volume() <= inst.capacity) return w_set;
  scan.prepare(rho);
  const LevelSetResult lsr = inner_bisection_impl(inst, scan, rho, cfg);
  return assemble_capacitated(lsr, inst.capacity);
}

}  // namespace detail

/// Level search for the capacitated inner maximization. Requires the
/// capacity to bind at rho.
inline LevelSetResult inner_bisection_level(const Instance& inst, double rho,
                                            const SolverConfig& cfg = {}) {
  if (upper_level_set(inst, rho).volume() <= inst.capacity)
    throw CapacityNotBindingError("vol{w >= rho} <= c; no level to search");
  detail::LevelScan scan(inst, cfg.grid_points);
  scan.prepare(rho);
  return detail::inner_bisection_impl(inst, scan, rho, cfg);
}

/// argmax over assortments of volume <= c of the inner value at rho: the
/// upper level set of w when it fits, otherwise the highest level sets of
/// h(.,rho) filled from the left.
inline Assortment capacitated_inner_max(const Instance& inst, double rho,
                                        const SolverConfig& cfg = {}) {
  detail::LevelScan scan(inst, cfg.grid_points);
  return detail::inner_max_impl(inst, scan, rho, cfg);
}

/// Outer bisection for the fixed point I(S_rho, rho) = rho with the
/// capacitated inner maximization.
inline SolveResult solve_capacitated(const Instance& inst, const SolverConfig& cfg = {}) {
  SolveResult out;
  if (inst.capacity <= 0.0) return out;  // degenerate capacity: empty optimum
  detail::LevelScan scan(inst, cfg.grid_points);
  double a = 0.0, b = 1.0;
  for (int i = 0; i < cfg.outer_iters; ++i) {
    const double piv = a + (b - a) / 2.0;
    const Assortment s = detail::inner_max_impl(inst, scan, piv, cfg);
    const double value = inner_value(inst, s, piv, cfg.quad_tol);
    out.trace.emplace_back(piv, value);
    if (value > piv)
      a = piv;
    else
      b = piv;
  }
  out.rho_star = a + (b - a) / 2.0;
  out.assortment = detail::inner_max_impl(inst, scan, out.rho_star, cfg);
  return out;
}

/// Uncapacitated (c = 1) fixed point over assortments [w^{-1}(rho), 1].
inline SolveResult solve_uncapacitated(const Instance& inst, const SolverConfig& cfg = {}) {
  if (inst.capacity != 1.0)
    throw std::invalid_argument("solve_uncapacitated requires capacity = 1");
  SolveResult out;
  double a = 0.0, b = 1.0;
  for (int i = 0; i < cfg.outer_iters; ++i) {
    const double piv = a + (b - a) / 2.0;
    const double value = inner_value(inst, upper_level_set(inst, piv), piv, cfg.quad_tol);
    out.trace.emplace_back(piv, value);
    if (value > piv)
      a = piv;
    else
      b = piv;
  }
  out.rho_star = a + (b - a) / 2.0;
  out.assortment = upper_level_set(inst, out.rho_star);
  return out;
}

/// Exhaustive search over grid-aligned single intervals of volume <= c.
inline std::pair<Assortment, double> best_single_interval(const Instance& inst, int grid) {
  if (grid < 2) throw std::invalid_argument("best_single_interval needs grid >= 2");
  const double c = inst.capacity;
  if (c <= 0.0) return {Assortment{}, 0.0};
  const int n = grid;
  std::vector<double> cum_v(n + 1, 0.0), cum_vw(n + 1, 0.0);
  const auto vw = [&](double x) { return inst.v(x) * inst.w(x); };
  for (int k = 1; k <= n; ++k) {
    const double lo = static_cast<double>(k - 1) / n;
    const double hi = static_cast<double>(k) / n;
    cum_v[k] = cum_v[k - 1] + quad::gauss_legendre_7(inst.v, lo, hi);
    cum_vw[k] = cum_vw[k - 1] + quad::gauss_legendre_7(vw, lo, hi);
  }
  const int max_span = static_cast<int>(std::floor(c * n + 1e-9));
  double best_val = 0.0;
  int best_i = 0, best_j = 0;
  for (int i = 0; i < n; ++i) {
    const int j_hi = std::min(n, i + max_span);
    for (int j = i + 1; j <= j_hi; ++j) {
      const double r = (cum_vw[j] - cum_vw[i]) / (1.0 + cum_v[j] - cum_v[i]);
      if (r > best_val) {
        best_val = r;
        best_i = i;
        best_j = j;
      }
    }
  }
  if (best_j == 0) return {Assortment{}, 0.0};
  return {Assortment{{static_cast<double>(best_i) / n, static_cast<double>(best_j) / n}},
          best_val};
}

}  // namespace contassort
