#pragma once

#include <cmath>
#include <limits>

namespace voronec::fd {

/// Central-difference step for second-order differences:
/// cbrt(machine epsilon) * max(1, |x|).
inline double step(double x) {
  static const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
  return h0 * std::max(1.0, std::abs(x));
}

/// d/dx f(x) by central differences.
template <class F>
double derivative(F&& f, double x) {
  const double h = step(x);
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace voronec::fd
