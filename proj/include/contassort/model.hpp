#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace contassort {

/// Positive weight density over products. Supplied as an evaluation callable
/// plus declared bounds; no antiderivative is assumed.
class PreferenceFunction {
public:
  PreferenceFunction(std::function<double(double)> eval, double v_lo, double v_hi)
      : eval_(std::move(eval)), lo_(v_lo), hi_(v_hi) {
    if (!(lo_ >= 0.0) || !(hi_ >= lo_))
      throw std::invalid_argument("preference bounds must satisfy 0 <= v_lo <= v_hi");
  }

  static PreferenceFunction constant(double v) {
    return PreferenceFunction([v](double) { return v; }, v, v);
  }

  /// Piecewise-linear function through `values` at uniform knots on [0,1].
  static PreferenceFunction from_grid(std::vector<double> values) {
    if (values.size() < 2)
      throw std::invalid_argument("grid preference needs at least two knots");
    double lo = values[0], hi = values[0];
    for (double v : values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    auto data = std::make_shared<std::vector<double>>(std::move(values));
    auto eval = [data](double x) {
      const std::size_t n = data->size() - 1;
      double t = x * static_cast<double>(n);
      if (t <= 0.0) return data->front();
      if (t >= static_cast<double>(n)) return data->back();
      const std::size_t k = static_cast<std::size_t>(t);
      const double frac = t - static_cast<double>(k);
      return (*data)[k] * (1.0 - frac) + (*data)[k + 1] * frac;
    };
    return PreferenceFunction(std::move(eval), lo, hi);
  }

  double operator()(double x) const { return eval_(x); }
  double lower_bound() const { return lo_; }
  double upper_bound() const { return hi_; }

private:
  std::function<double(double)> eval_;
  double lo_, hi_;
};

/// Strictly increasing marginal profit on [0,1] with values in [0,1].
/// `inverse` is the generalized inverse min{x : w(x) >= rho}; an analytic
/// inverse can be supplied, otherwise bisection is used.
class ProfitCurve {
public:
  ProfitCurve(std::function<double(double)> eval, double derivative_lower_bound)
      : eval_(std::move(eval)), k_w_(derivative_lower_bound) {
    if (!(k_w_ > 0.0)) throw std::invalid_argument("k_w must be positive");
  }

  ProfitCurve(std::function<double(double)> eval, double derivative_lower_bound,
              std::function<double(double)> inverse)
      : ProfitCurve(std::move(eval), derivative_lower_bound) {
    inverse_ = std::move(inverse);
  }

  static ProfitCurve identity() {
    return ProfitCurve([](double x) { return x; }, 1.0, [](double rho) {
      return std::min(1.0, std::max(0.0, rho));
    });
  }

  double operator()(double x) const { return eval_(x); }
  double derivative_lower_bound() const { return k_w_; }

  double inverse(double rho) const {
    if (rho <= eval_(0.0)) return 0.0;
    if (rho > eval_(1.0))
      throw std::domain_error("profit inverse queried above w(1)");
    if (inverse_) return std::min(1.0, std::max(0.0, inverse_(rho)));
    double lo = 0.0, hi = 1.0;  // invariant: w(hi) >= rho > w(lo)
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (eval_(mid) >= rho)
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  }

private:
  std::function<double(double)> eval_;
  double k_w_;
  std::function<double(double)> inverse_;
};

/// Bundle of model primitives: preference function, profit curve, capacity.
struct Instance {
  PreferenceFunction v;
  ProfitCurve w;
  double capacity;

  Instance(PreferenceFunction v_, ProfitCurve w_, double c)
      : v(std::move(v_)), w(std::move(w_)), capacity(c) {
    if (!(c >= 0.0 && c <= 1.0))
      throw std::invalid_argument("capacity must lie in [0,1]");
  }
};

}  // namespace contassort
