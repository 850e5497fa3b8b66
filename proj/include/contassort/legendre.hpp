#pragma once

#include <cmath>

namespace contassort {

/// Legendre polynomial P_j via the three-term recurrence.
inline double legendre_p(unsigned j, double x) {
  if (j == 0) return 1.0;
  double pm1 = 1.0;
  double p = x;
  for (unsigned k = 1; k < j; ++k) {
    const double next = ((2.0 * k + 1.0) * x * p - k * pm1) / (k + 1.0);
    pm1 = p;
    p = next;
  }
  return p;
}

/// Orthonormal Legendre basis on L^2([-1,1]): phi_j = sqrt((2j+1)/2) P_j.
inline double legendre_phi(unsigned j, double x) {
  return std::sqrt((2.0 * j + 1.0) / 2.0) * legendre_p(j, x);
}

}  // namespace contassort
