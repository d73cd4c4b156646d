#pragma once

#include <Eigen/Dense>
#include <functional>
#include <type_traits>

#include "voronec/errors.hpp"
#include "voronec/fd.hpp"

namespace voronec {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Evaluators over configuration space and time.
using ScalarField = std::function<double(const Vec& q, double t)>;
using VectorField = std::function<Vec(const Vec& q, double t)>;
using MatrixField = std::function<Mat(const Vec& q, double t)>;

/// Coordinate counts of a constrained system: n total coordinates,
/// m base (independent) velocities, r = n - m constrained velocities.
struct Dimensions {
  int n = 0;
  int m = 0;
  int r = 0;

  Dimensions() = default;
  Dimensions(int total, int base) : n(total), m(base), r(total - base) {
    if (n < 1 || m < 1 || r < 0)
      throw ValidationError("Dimensions: need n >= 1, m >= 1, r = n - m >= 0 (got n=" +
                            std::to_string(n) + ", m=" + std::to_string(m) + ")");
  }

  friend bool operator==(const Dimensions&, const Dimensions&) = default;
};

namespace detail {

// Central difference of an arbitrary (scalar, vector or matrix valued)
// field in the coordinate q[s].
template <class F>
auto partial_q(F&& f, const Vec& q, double t, int s) {
  const double h = fd::step(q[s]);
  Vec qp = q, qm = q;
  qp[s] += h;
  qm[s] -= h;
  if constexpr (std::is_arithmetic_v<std::decay_t<decltype(f(q, t))>>) {
    return (f(qp, t) - f(qm, t)) / (2.0 * h);
  } else {
    return ((f(qp, t) - f(qm, t)) / (2.0 * h)).eval();
  }
}

template <class F>
auto partial_t(F&& f, const Vec& q, double t) {
  const double h = fd::step(t);
  if constexpr (std::is_arithmetic_v<std::decay_t<decltype(f(q, t))>>) {
    return (f(q, t + h) - f(q, t - h)) / (2.0 * h);
  } else {
    return ((f(q, t + h) - f(q, t - h)) / (2.0 * h)).eval();
  }
}

}  // namespace detail
}  // namespace voronec
