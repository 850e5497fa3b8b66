#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "contassort/errors.hpp"

namespace contassort {
namespace quad {

// Gauss-Kronrod 15(7) nodes and weights on [-1,1] (positive half).
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
// Weights of the embedded 7-point Gauss rule (nodes 1, 3, 5, 7 above).
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F>
std::pair<double, double> gauss_kronrod_15(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kronrod = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kGk15Nodes[i];
    double fv;
    if (i == 7) {
      fv = f(mid);
    } else {
      fv = f(mid - dx) + f(mid + dx);
    }
    if (!std::isfinite(fv)) throw NonFiniteError("integrand is not finite");
    kronrod += kGk15Weights[i] * fv;
    if (i % 2 == 1) gauss += kG7Weights[i / 2] * fv;
  }
  kronrod *= half;
  gauss *= half;
  return {kronrod, std::fabs(kronrod - gauss)};
}

/// Adaptive Gauss-Kronrod integration with absolute tolerance.
template <typename F>
double integrate_adaptive(const F& f, double a, double b, double abs_tol,
                          int max_depth = 48) {
  if (!(b > a)) return 0.0;
  struct Frame {
    double a, b, tol;
    int depth;
  };
  double total = 0.0;
  Frame stack[64];
  int top = 0;
  stack[top++] = {a, b, abs_tol, 0};
  while (top > 0) {
    const Frame fr = stack[--top];
    auto [value, err] = gauss_kronrod_15(f, fr.a, fr.b);
    if (err <= fr.tol || fr.depth >= max_depth) {
      total += value;
      continue;
    }
    const double mid = 0.5 * (fr.a + fr.b);
    stack[top++] = {fr.a, mid, 0.5 * fr.tol, fr.depth + 1};
    stack[top++] = {mid, fr.b, 0.5 * fr.tol, fr.depth + 1};
  }
  return total;
}

/// Fixed 3-point Gauss-Legendre rule; used for short partial panels.
template <typename F>
double gauss_legendre_3(const F& f, double a, double b) {
  static constexpr double node = 0.774596669241483377035853079956480;  // sqrt(3/5)
  static constexpr double w0 = 0.888888888888888888888888888888889;
  static constexpr double w1 = 0.555555555555555555555555555555556;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  return half * (w0 * f(mid) + w1 * (f(mid - half * node) + f(mid + half * node)));
}

/// Fixed 7-point Gauss-Legendre rule; used to build cumulative tables.
template <typename F>
double gauss_legendre_7(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = kG7Weights[3] * f(mid);
  for (int i = 0; i < 3; ++i) {
    const double dx = half * kGk15Nodes[2 * i + 1];
    sum += kG7Weights[i] * (f(mid - dx) + f(mid + dx));
  }
  return half * sum;
}

}  // namespace quad
}  // namespace contassort
