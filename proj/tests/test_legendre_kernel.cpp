#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "contassort/kde.hpp"
#include "contassort/legendre.hpp"
#include "contassort/quadrature.hpp"

using namespace contassort;

TEST_CASE("orthonormal Legendre values") {
  CHECK(legendre_phi(0, 0.37) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
  CHECK(legendre_phi(1, 1.0) == Catch::Approx(std::sqrt(1.5)).margin(1e-15));
  CHECK(legendre_phi(2, 1.0) == Catch::Approx(std::sqrt(2.5)).margin(1e-12));
  CHECK(legendre_p(3, 0.5) == Catch::Approx(0.5 * (5.0 * 0.125 - 3.0 * 0.5)).margin(1e-15));
}

TEST_CASE("orthonormality up to order 12") {
  for (unsigned j = 0; j <= 12; ++j) {
    for (unsigned k = 0; k <= j; ++k) {
      const double ip = quad::integrate_adaptive(
          [&](double x) { return legendre_phi(j, x) * legendre_phi(k, x); }, -1.0, 1.0,
          1e-11);
      CHECK(ip == Catch::Approx(j == k ? 1.0 : 0.0).margin(1e-8));
    }
  }
}

TEST_CASE("shift coefficients") {
  const double a = 0.2, b = 0.7, h = 0.1;

  ShiftCoefficients mid = shift_coefficients(0.45, a, b, h);
  CHECK(mid.gamma == 1.0);
  CHECK(mid.zeta == 0.0);
  CHECK(mid.u_lo == -1.0);
  CHECK(mid.u_hi == 1.0);

  ShiftCoefficients left = shift_coefficients(a, a, b, h);
  CHECK(left.gamma == Catch::Approx(2.0));
  CHECK(left.zeta == Catch::Approx(-1.0));
  CHECK(left.u_lo == 0.0);
  CHECK(left.u_hi == 1.0);

  ShiftCoefficients right = shift_coefficients(b, a, b, h);
  CHECK(right.gamma == Catch::Approx(2.0));
  CHECK(right.zeta == Catch::Approx(1.0));
  CHECK(right.u_lo == -1.0);
  CHECK(right.u_hi == Catch::Approx(0.0));

  // the shifted argument spans exactly [-1, 1] on the shifted support
  const double x = a + 0.3 * h;
  ShiftCoefficients sc = shift_coefficients(x, a, b, h);
  CHECK(sc.gamma * sc.u_lo + sc.zeta == Catch::Approx(-1.0).margin(1e-12));
  CHECK(sc.gamma * sc.u_hi + sc.zeta == Catch::Approx(1.0).margin(1e-12));

  CHECK_THROWS_AS(shift_coefficients(0.45, a, b, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(shift_coefficients(0.1, a, b, h), std::invalid_argument);
}

TEST_CASE("order-zero kernel is uniform in the interior") {
  KernelSpec spec{0.1, 0, 0.0, 1.0};
  CHECK(kernel_eval(spec, 0.5, 0.3) == Catch::Approx(0.5).margin(1e-13));
  CHECK(kernel_eval(spec, 0.5, -0.9) == Catch::Approx(0.5).margin(1e-13));
  CHECK(kernel_eval(spec, 0.5, 1.2) == 0.0);
}

TEST_CASE("kernel moment identities", "[moments]") {
  // 9 positions spanning both boundary regions and the interior
  const double a = 0.1, b = 0.6, h = 0.2;
  const double xs[9] = {a,           a + 0.2 * h, a + 0.6 * h,  a + 0.95 * h, 0.5 * (a + b),
                        b - 0.95 * h, b - 0.6 * h, b - 0.2 * h, b};
  for (int order = 0; order <= 4; ++order) {
    KernelSpec spec{h, order, a, b};
    for (double x : xs) {
      const ShiftCoefficients sc = shift_coefficients(x, a, b, h);
      for (int j = 0; j <= order; ++j) {
        const double moment = quad::integrate_adaptive(
            [&](double u) { return std::pow(u, j) * kernel_eval(spec, x, u); }, sc.u_lo,
            sc.u_hi, 1e-11);
        CHECK(moment == Catch::Approx(j == 0 ? 1.0 : 0.0).margin(1e-7));
      }
    }
  }
}

TEST_CASE("bandwidth and order schedule") {
  BandwidthOrder bo = bandwidth_and_order(0.5, 4);
  CHECK(bo.h == Catch::Approx(0.25));
  CHECK(bo.beta > 0.5);
  CHECK(bo.order == static_cast<int>(std::floor(bo.beta)));

  BandwidthOrder wide = bandwidth_and_order(0.9, 1000);
  CHECK(wide.h == Catch::Approx(std::exp(-1.0)).margin(1e-15));

  // doubling n raises beta by exactly log(2)/2
  BandwidthOrder b1 = bandwidth_and_order(0.4, 500);
  BandwidthOrder b2 = bandwidth_and_order(0.4, 1000);
  CHECK(b2.beta - b1.beta == Catch::Approx(0.5 * std::log(2.0)).margin(1e-12));

  CHECK_THROWS_AS(bandwidth_and_order(0.5, 0), std::invalid_argument);
}
