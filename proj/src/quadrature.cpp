#include "voronec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "voronec/errors.hpp"

namespace voronec {
namespace {

// Kronrod 15 abscissae on [0, 1] side (symmetric) and weights; the Gauss 7
// rule lives on the odd-indexed abscissae. Values from the QUADPACK dqk15 rule.
constexpr double xk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double wg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                          0.417959183673469};

struct PanelResult {
  double kronrod = 0;
  double err = 0;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double resk = 0.0, resg = 0.0;
  for (int j = 0; j < 7; ++j) {
    const double fa = f(c - h * xk[j]);
    const double fb = f(c + h * xk[j]);
    resk += wk[j] * (fa + fb);
    if (j % 2 == 1) resg += wg[j / 2] * (fa + fb);
  }
  const double fc = f(c);
  resk += wk[7] * fc;
  resg += wg[3] * fc;
  PanelResult out;
  out.kronrod = resk * h;
  out.err = std::abs((resk - resg) * h);
  return out;
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol,
             int depth) {
  const PanelResult p = gk15(f, a, b);
  if (p.err <= tol || depth >= 48) {
    if (!std::isfinite(p.kronrod))
      throw Error("integrate_adaptive: non-finite integrand on [" + std::to_string(a) +
                  ", " + std::to_string(b) + "]");
    return p.kronrod;
  }
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * tol, depth + 1) + adapt(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol) {
  if (a == b) return 0.0;
  if (a > b) return -integrate_adaptive(f, b, a, tol);
  return adapt(f, a, b, std::max(tol, 1e-15), 0);
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f, double t0,
                                       double lo, double hi, int checkpoints, double tol)
    : f_(std::move(f)), tol_(tol) {
  if (!(lo < hi) || checkpoints < 1)
    throw ValidationError("CumulativeIntegral: need lo < hi and checkpoints >= 1");
  if (t0 < lo || t0 > hi)
    throw ValidationError("CumulativeIntegral: t0 must lie in [lo, hi]");
  grid_.resize(checkpoints + 1);
  values_.resize(checkpoints + 1);
  const double dt = (hi - lo) / checkpoints;
  for (int k = 0; k <= checkpoints; ++k) grid_[k] = lo + k * dt;
  grid_.back() = hi;

  // Accumulate from lo, then shift so that F(t0) = 0.
  values_[0] = 0.0;
  const double panel_tol = tol_ / checkpoints;
  for (int k = 1; k <= checkpoints; ++k)
    values_[k] = values_[k - 1] + integrate_adaptive(f_, grid_[k - 1], grid_[k], panel_tol);
  const double at_t0 = [&] {
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), t0);
    const int k = std::max<int>(0, int(it - grid_.begin()) - 1);
    return values_[k] + integrate_adaptive(f_, grid_[k], t0, panel_tol);
  }();
  for (double& v : values_) v -= at_t0;
}

double CumulativeIntegral::operator()(double t) const {
  const double pad = 1e-12 * std::max(1.0, std::abs(grid_.back()) + std::abs(grid_.front()));
  if (t < grid_.front() - pad || t > grid_.back() + pad)
    throw DomainError("CumulativeIntegral: t=" + std::to_string(t) + " outside [" +
                      std::to_string(grid_.front()) + ", " + std::to_string(grid_.back()) + "]");
  t = std::clamp(t, grid_.front(), grid_.back());
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  const int k = std::max<int>(0, int(it - grid_.begin()) - 1);
  return values_[k] + integrate_adaptive(f_, grid_[k], t, tol_ / grid_.size());
}

double solve_increasing(const std::function<double(double)>& g,
                        const std::function<double(double)>& dg, double lo, double hi,
                        double target, double tol) {
  double glo = g(lo) - target, ghi = g(hi) - target;
  if (glo > 0 || ghi < 0)
    throw DomainError("solve_increasing: target not bracketed by [lo, hi]");
  if (glo == 0) return lo;
  if (ghi == 0) return hi;
  double t = 0.5 * (lo + hi);
  int non_contracting = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const double width = hi - lo;
    const double gt = g(t) - target;
    if (std::abs(gt) == 0.0) return t;
    if (gt > 0)
      hi = t;
    else
      lo = t;
    if (hi - lo <= tol * std::max(1.0, std::abs(lo) + std::abs(hi))) return 0.5 * (lo + hi);

    const double d = dg(t);
    double tn = (d > 0) ? t - gt / d : lo - 1.0;  // force fallback on flat slope
    if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
    if (hi - lo > 0.5 * width) {
      if (++non_contracting >= 8) {
        tn = 0.5 * (lo + hi);
        non_contracting = 0;
      }
    } else {
      non_contracting = 0;
    }
    t = tn;
  }
  return 0.5 * (lo + hi);
}

}  // namespace voronec
