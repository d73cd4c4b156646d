#include "voronec/ode.hpp"

#include <algorithm>
#include <cmath>

#include "voronec/errors.hpp"

namespace voronec {
namespace {

// Dormand-Prince 5(4) tableau (Hairer, Norsett & Wanner, DOPRI5).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;

// b - bhat, for the embedded fourth-order error estimate.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// Coefficients of the fourth-order continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct DenseSegment {
  double t = 0, h = 0;
  Vec r1, r2, r3, r4, r5;

  Vec eval(double ts) const {
    const double theta = (ts - t) / h;
    const double th1 = 1.0 - theta;
    return r1 + theta * (r2 + th1 * (r3 + theta * (r4 + th1 * r5)));
  }
};

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double atol, double rtol) {
  double sum = 0.0;
  for (int i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double e = err[i] / sc;
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

// Hairer's automatic initial step selection (order 5).
double initial_step(const OdeRhs& f, double t0, const Vec& y0, const Vec& f0, double t1,
                    double atol, double rtol, StepStats& stats) {
  auto weighted = [&](const Vec& v, const Vec& ref) {
    double sum = 0.0;
    for (int i = 0; i < v.size(); ++i) {
      const double sc = atol + rtol * std::abs(ref[i]);
      const double e = v[i] / sc;
      sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(v.size()));
  };
  const double d0 = weighted(y0, y0);
  const double d1n = weighted(f0, y0);
  double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
  h0 = std::min(h0, t1 - t0);
  const Vec y1 = y0 + h0 * f0;
  const Vec f1 = f(t0 + h0, y1);
  ++stats.rhs_evals;
  const double d2 = weighted(f1 - f0, y0) / h0;
  const double dm = std::max(d1n, d2);
  double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  return std::min({100.0 * h0, h1, t1 - t0});
}

StepStats run_dopri5(const OdeRhs& f, const Vec& y0, double t0, double t1,
                     std::span<const double> samples, const OdeObserver& observe,
                     const OdeOptions& opts) {
  StepStats stats;
  const int n = static_cast<int>(y0.size());
  std::size_t isample = 0;
  // Emit samples that coincide with the start point.
  while (isample < samples.size() && samples[isample] <= t0) {
    observe(samples[isample], y0);
    ++isample;
  }
  if (t1 <= t0) return stats;

  Vec y = y0;
  double t = t0;
  Vec k1 = f(t, y);
  ++stats.rhs_evals;
  double h = opts.initial_step > 0
                 ? std::min(opts.initial_step, t1 - t0)
                 : initial_step(f, t0, y, k1, t1, opts.abs_tol, opts.rel_tol, stats);

  Vec k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ynew(n), err(n);
  double facold = 1e-4;
  bool rejected_last = false;

  while (t < t1) {
    if (stats.steps >= opts.max_steps)
      throw Error("integrate_ode: step budget exhausted at t=" + std::to_string(t));
    if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      throw StepSizeUnderflowError("integrate_ode: step size underflow at t=" +
                                   std::to_string(t));
    if (t + h > t1) h = t1 - t;

    k2 = f(t + c2 * h, y + h * (a21 * k1));
    k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    k7 = f(t + h, ynew);
    stats.rhs_evals += 6;
    ++stats.steps;

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double enorm = error_norm(err, y, ynew, opts.abs_tol, opts.rel_tol);

    // PI step controller (beta = 0.04).
    const double expo = 0.2 - 0.04 * 0.75;
    double fac = std::pow(enorm, expo) / std::pow(facold, 0.04);
    fac = std::max(1.0 / 10.0, std::min(1.0 / 0.2, fac / 0.9));
    double hnew = h / fac;

    if (enorm <= 1.0) {
      facold = std::max(enorm, 1e-4);
      ++stats.accepted;
      // Dense output over [t, t+h], then emit the samples it covers.
      if (isample < samples.size() && samples[isample] <= t + h) {
        DenseSegment seg;
        seg.t = t;
        seg.h = h;
        seg.r1 = y;
        seg.r2 = ynew - y;
        seg.r3 = h * k1 - seg.r2;
        seg.r4 = seg.r2 - h * k7 - seg.r3;
        seg.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        while (isample < samples.size() && samples[isample] <= t + h) {
          observe(samples[isample], seg.eval(samples[isample]));
          ++isample;
        }
      }
      t += h;
      k1.swap(k7);
      y.swap(ynew);
      if (rejected_last) hnew = std::min(hnew, h);
      rejected_last = false;
      h = hnew;
    } else {
      ++stats.rejected;
      rejected_last = true;
      h = hnew;
    }
  }
  // Samples at exactly t1 that float comparison left behind.
  while (isample < samples.size() && samples[isample] <= t1 + 1e-14 * std::max(1.0, std::abs(t1))) {
    observe(samples[isample], y);
    ++isample;
  }
  if (isample != samples.size())
    throw ValidationError("integrate_ode: sample times extend past t_end");
  return stats;
}

StepStats run_rk4(const OdeRhs& f, const Vec& y0, double t0, double t1,
                  std::span<const double> samples, const OdeObserver& observe,
                  const OdeOptions& opts) {
  if (opts.fixed_step <= 0) throw ValidationError("integrate_ode: rk4 needs fixed_step > 0");
  StepStats stats;
  Vec y = y0;
  double t = t0;
  std::size_t isample = 0;
  while (isample < samples.size() && samples[isample] <= t0) {
    observe(samples[isample], y0);
    ++isample;
  }
  Vec k1, k2, k3, k4;
  auto advance_to = [&](double target) {
    const double len = target - t;
    if (len <= 0) return;
    const auto nsub = static_cast<std::size_t>(std::ceil(len / opts.fixed_step - 1e-12));
    const double h = len / static_cast<double>(std::max<std::size_t>(nsub, 1));
    for (std::size_t k = 0; k < std::max<std::size_t>(nsub, 1); ++k) {
      if (stats.steps >= opts.max_steps)
        throw Error("integrate_ode: step budget exhausted at t=" + std::to_string(t));
      k1 = f(t, y);
      k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
      k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
      k4 = f(t + h, y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += h;
      stats.rhs_evals += 4;
      ++stats.steps;
      ++stats.accepted;
    }
    t = target;  // kill accumulated rounding
  };
  while (isample < samples.size()) {
    advance_to(samples[isample]);
    observe(samples[isample], y);
    ++isample;
  }
  advance_to(t1);
  return stats;
}

}  // namespace

StepStats integrate_ode(const OdeRhs& f, const Vec& y0, double t0, double t1,
                        std::span<const double> sample_times, const OdeObserver& observe,
                        const OdeOptions& opts) {
  if (t1 < t0) throw ValidationError("integrate_ode: t_end must be >= t0");
  if (!std::is_sorted(sample_times.begin(), sample_times.end()))
    throw ValidationError("integrate_ode: sample times must be nondecreasing");
  if (!sample_times.empty() &&
      (sample_times.front() < t0 - 1e-12 || sample_times.back() > t1 + 1e-12))
    throw ValidationError("integrate_ode: sample times must lie inside [t0, t_end]");
  if (opts.method == OdeOptions::Method::rk4)
    return run_rk4(f, y0, t0, t1, sample_times, observe, opts);
  return run_dopri5(f, y0, t0, t1, sample_times, observe, opts);
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t intervals) {
  std::vector<double> g(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k)
    g[k] = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(intervals);
  g.back() = t1;
  return g;
}

const char* method_name(OdeOptions::Method m) {
  return m == OdeOptions::Method::rk4 ? "rk4" : "dopri5";
}

}  // namespace voronec
