#pragma once

#include <functional>
#include <vector>

namespace voronec {

/// Adaptive Gauss-Kronrod 7/15 quadrature of f over [a, b] (a <= b or a > b).
/// `tol` is an absolute tolerance for the whole interval.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12);

/// Cumulative integral F(t) = int_{t0}^{t} f(s) ds over a fixed interval,
/// realized as a table of checkpoints every (hi-lo)/checkpoints plus local
/// re-quadrature from the nearest checkpoint at evaluation time.
class CumulativeIntegral {
 public:
  CumulativeIntegral(std::function<double(double)> f, double t0, double lo, double hi,
                     int checkpoints = 256, double tol = 1e-12);

  double operator()(double t) const;  ///< throws DomainError outside [lo, hi]

  double lo() const { return grid_.front(); }
  double hi() const { return grid_.back(); }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::function<double(double)> f_;
  std::vector<double> grid_;
  std::vector<double> values_;
  double tol_;
};

/// Solves g(t) = target for a strictly increasing g on the bracket [lo, hi]
/// by Newton iteration started from the midpoint, with the bracket updated
/// each step and bisection after 8 consecutive non-contracting steps.
double solve_increasing(const std::function<double(double)>& g,
                        const std::function<double(double)>& dg, double lo, double hi,
                        double target, double tol = 1e-12);

}  // namespace voronec
