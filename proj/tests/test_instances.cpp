#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "contassort/choice.hpp"
#include "contassort/instances.hpp"
#include "contassort/quadrature.hpp"
#include "contassort/solver.hpp"

using namespace contassort;

TEST_CASE("bimodal instance shape") {
  Instance bim = make_bimodal_instance(0.5);
  CHECK(bim.w(0.5) == 0.5);
  CHECK(bim.capacity == 0.5);

  // the dominant mode sits on the first bump
  double best_x = 0.0, best_v = -1.0;
  for (int k = 0; k <= 10000; ++k) {
    const double x = k / 10000.0;
    if (bim.v(x) > best_v) {
      best_v = bim.v(x);
      best_x = x;
    }
  }
  CHECK(best_x > 0.3);
  CHECK(best_x < 0.4);

  // declared bounds hold on a fine grid
  for (int k = 0; k <= 10000; ++k) {
    const double v = bim.v(k / 10000.0);
    REQUIRE(v >= bim.v.lower_bound());
    REQUIRE(v <= bim.v.upper_bound());
  }
}

TEST_CASE("profit curve invariants") {
  Instance bim = make_bimodal_instance(1.0);
  Instance lb = make_baseline_instance(0.25);
  for (const Instance* inst : {&bim, &lb}) {
    double prev = -1.0;
    for (int k = 0; k <= 10000; ++k) {
      const double w = inst->w(k / 10000.0);
      REQUIRE(w > prev);
      REQUIRE(w >= 0.0);
      REQUIRE(w <= 1.0);
      prev = w;
    }
    // inverse consistency on [w(0), w(1)]
    for (int k = 0; k <= 50; ++k) {
      const double rho = inst->w(0.0) + (inst->w(1.0) - inst->w(0.0)) * k / 50.0;
      CHECK(inst->w(inst->w.inverse(rho)) == Catch::Approx(rho).margin(1e-9));
    }
  }
}

TEST_CASE("lower-bound family endpoints") {
  Instance base = make_baseline_instance(0.25);
  CHECK(base.w(0.0) == Catch::Approx(0.6).margin(1e-12));
  CHECK(base.w(1.0) == Catch::Approx(1.0).margin(1e-12));
  CHECK(base.v(0.0) == Catch::Approx(2.0).margin(1e-12));
  CHECK(base.v(1.0) == Catch::Approx(1.0).margin(1e-12));

  // v0 (w - s) is constant s/c across the interval
  const double s = 0.2, c = 0.25;
  for (int k = 0; k <= 1000; ++k) {
    const double x = k / 1000.0;
    CHECK(base.v(x) * (base.w(x) - s) == Catch::Approx(s / c).margin(1e-10));
  }
}

TEST_CASE("lower-bound perturbed instance") {
  const double c = 0.25;
  const int K = 2;
  Instance lb = make_lower_bound_instance(c, K, {1, 3});
  LowerBoundParams p = lower_bound_params(c, K, {1, 3});
  CHECK(p.bin_count == 8);
  CHECK(p.s == Catch::Approx(0.2));

  // value range on a grid; the lower end matches the worst-case analysis,
  // the upper end is the baseline peak times (1 + max bump - beta)
  double lo = 1e18, hi = -1e18;
  for (int k = 0; k <= 20000; ++k) {
    const double v = lb.v(k / 20000.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo >= 0.79);
  CHECK(hi <= 2.26);
  CHECK(hi > 2.0);  // the bumps lift the baseline by about 16%

  // bump volume identity: union of the K bumped bins has volume c
  double bump_vol = 0.0;
  for (int i : p.bumps) bump_vol += c / K;
  CHECK(bump_vol == Catch::Approx(c).margin(1e-12));

  CHECK_THROWS_AS(make_lower_bound_instance(c, 2, {1}), BadIndexSetError);
  CHECK_THROWS_AS(make_lower_bound_instance(c, 2, {1, 99}), BadIndexSetError);
  CHECK_THROWS_AS(make_lower_bound_instance(c, 2, {3, 3}), BadIndexSetError);
  CHECK_THROWS_AS(make_lower_bound_instance(0.4, 2, {1, 2}), std::invalid_argument);
}

TEST_CASE("bump mass identity") {
  const double c = 0.25;
  const int K = 2;
  LowerBoundParams p = lower_bound_params(c, K, {1, 3});
  const double upper = c * c / (2.0 * K * K);
  const double coverage = std::erf(1.0 / (p.sigma * std::sqrt(2.0)));
  for (int i : {1, 4, 8}) {
    const double lo = c * (i - 1) / K;
    const double hi = c * static_cast<double>(i) / K;
    const double in_bin = quad::integrate_adaptive(
        [&](double x) { return lb_bump(p, i, x); }, lo, hi, 1e-13);
    const double total = quad::integrate_adaptive(
        [&](double x) { return lb_bump(p, i, x); }, 0.0, 1.0, 1e-13);
    CHECK(in_bin >= coverage * upper - 1e-10);
    CHECK(in_bin <= upper + 1e-10);
    CHECK(in_bin == Catch::Approx(coverage * upper).margin(1e-9));
    CHECK(total <= upper + 1e-10);
  }
}

TEST_CASE("perturbation is nonpositive away from the bumps") {
  const double c = 0.2;
  const int K = 3;
  LowerBoundParams p = lower_bound_params(c, K, {2, 5, 9});
  for (int k = 0; k <= 40000; ++k) {
    const double x = k / 40000.0;
    const int bin = static_cast<int>(std::floor(x * K / c)) + 1;
    bool bumped = false;
    for (int i : p.bumps)
      if (bin == i) bumped = true;
    if (!bumped) REQUIRE(lb_epsilon(p, x) <= 1e-12);
  }
}

TEST_CASE("flat baseline makes every volume-c assortment optimal") {
  Instance base = make_baseline_instance(0.2);
  SolveResult res = solve_capacitated(base);
  CHECK(res.rho_star == Catch::Approx(0.16).margin(1e-6));
  for (const Assortment& s :
       {Assortment{{0.0, 0.2}}, Assortment{{0.8, 1.0}}, Assortment{{0.3, 0.4}, {0.6, 0.7}}}) {
    CHECK(expected_revenue(base, s) == Catch::Approx(res.rho_star).margin(1e-6));
  }
}
