#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "voronec/types.hpp"

namespace voronec {

struct StepStats {
  std::size_t steps = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

struct OdeOptions {
  enum class Method { dopri5, rk4 };

  Method method = Method::dopri5;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 0.0;  ///< 0 selects the step automatically
  double fixed_step = 1e-3;   ///< rk4 only
  std::size_t max_steps = 10'000'000;
};

using OdeRhs = std::function<Vec(double t, const Vec& y)>;
using OdeObserver = std::function<void(double t, const Vec& y)>;

/// Integrates y' = f(t, y) from t0 to t1 (t1 >= t0) and invokes `observe`
/// at each time in `sample_times` (nondecreasing, inside [t0, t1]).
///
/// dopri5 is the adaptive Dormand-Prince 5(4) pair with the classical
/// fourth-order continuous extension; samples are produced from the dense
/// output, so they do not perturb the step sequence. rk4 subdivides each
/// sampling interval into equal steps no longer than `fixed_step`, which
/// makes the rk4 step sequence a pure function of the sample grid.
StepStats integrate_ode(const OdeRhs& f, const Vec& y0, double t0, double t1,
                        std::span<const double> sample_times, const OdeObserver& observe,
                        const OdeOptions& opts = {});

/// t0, t0 + dt, ..., t1 with `intervals` equal intervals (endpoint included).
std::vector<double> uniform_grid(double t0, double t1, std::size_t intervals);

const char* method_name(OdeOptions::Method m);

}  // namespace voronec
