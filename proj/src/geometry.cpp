#include "voronec/geometry.hpp"

#include <cmath>

namespace voronec {

ConstraintSpec::ConstraintSpec(Dimensions dims, MatrixField coeff, VectorField affine,
                               std::optional<ConstraintPartials> partials)
    : dims_(dims), coeff_(std::move(coeff)), affine_(std::move(affine)),
      partials_(std::move(partials)) {
  if (!coeff_ || !affine_)
    throw ValidationError("ConstraintSpec: coeff and affine evaluators are required");
}

ConstraintSpec ConstraintSpec::null(Dimensions dims) {
  const int r = dims.r, m = dims.m;
  ConstraintPartials p;
  p.coeff_dq = [dims, r, m](const Vec&, double) {
    return std::vector<Mat>(dims.n, Mat::Zero(r, m));
  };
  p.coeff_dt = [r, m](const Vec&, double) { return Mat::Zero(r, m); };
  p.affine_dq = [dims, r](const Vec&, double) { return Mat::Zero(r, dims.n); };
  p.affine_dt = [r](const Vec&, double) { return Vec::Zero(r); };
  return ConstraintSpec(
      dims, [r, m](const Vec&, double) { return Mat::Zero(r, m); },
      [r](const Vec&, double) { return Vec::Zero(r); }, std::move(p));
}

Mat ConstraintSpec::coeff(const Vec& q, double t) const {
  Mat a = coeff_(q, t);
  if (a.rows() != dims_.r || a.cols() != dims_.m)
    throw ValidationError("ConstraintSpec: coeff evaluator returned wrong shape");
  if (!a.allFinite())
    throw EvaluationError("ConstraintSpec: non-finite coefficient a_{nu i}", q, t);
  return a;
}

Vec ConstraintSpec::affine(const Vec& q, double t) const {
  Vec b = affine_(q, t);
  if (b.size() != dims_.r)
    throw ValidationError("ConstraintSpec: affine evaluator returned wrong size");
  if (!b.allFinite())
    throw EvaluationError("ConstraintSpec: non-finite affine part a_nu", q, t);
  return b;
}

std::vector<Mat> ConstraintSpec::coeff_dq(const Vec& q, double t) const {
  if (partials_ && partials_->coeff_dq) return partials_->coeff_dq(q, t);
  std::vector<Mat> out(dims_.n);
  for (int s = 0; s < dims_.n; ++s)
    out[s] = detail::partial_q([this](const Vec& qq, double tt) { return coeff_(qq, tt); },
                               q, t, s);
  return out;
}

Mat ConstraintSpec::coeff_dt(const Vec& q, double t) const {
  if (partials_ && partials_->coeff_dt) return partials_->coeff_dt(q, t);
  return detail::partial_t([this](const Vec& qq, double tt) { return coeff_(qq, tt); }, q, t);
}

Mat ConstraintSpec::affine_dq(const Vec& q, double t) const {
  if (partials_ && partials_->affine_dq) return partials_->affine_dq(q, t);
  Mat out(dims_.r, dims_.n);
  for (int s = 0; s < dims_.n; ++s)
    out.col(s) = detail::partial_q(
        [this](const Vec& qq, double tt) { return affine_(qq, tt); }, q, t, s);
  return out;
}

Vec ConstraintSpec::affine_dt(const Vec& q, double t) const {
  if (partials_ && partials_->affine_dt) return partials_->affine_dt(q, t);
  return detail::partial_t([this](const Vec& qq, double tt) { return affine_(qq, tt); }, q, t);
}

Vec reconstruct_velocity(const ConstraintSpec& spec, const Vec& q, const Vec& v, double t) {
  const auto& d = spec.dims();
  if (q.size() != d.n || v.size() != d.m)
    throw ValidationError("reconstruct_velocity: state size mismatch");
  const Mat a = spec.coeff(q, t);
  const Vec b = spec.affine(q, t);
  Vec qdot(d.n);
  qdot.head(d.m) = v;
  qdot.tail(d.r) = a * v + b;
  return qdot;
}

CurvatureCoeffs curvature_coeffs(const ConstraintSpec& spec, const Vec& q, double t) {
  const auto& d = spec.dims();
  if (q.size() != d.n) throw ValidationError("curvature_coeffs: state size mismatch");
  const Mat a = spec.coeff(q, t);
  const Vec b = spec.affine(q, t);
  const std::vector<Mat> a_dq = spec.coeff_dq(q, t);
  const Mat a_dt = spec.coeff_dt(q, t);
  const Mat b_dq = spec.affine_dq(q, t);
  const Vec b_dt = spec.affine_dt(q, t);
  for (const Mat& g : a_dq)
    if (!g.allFinite())
      throw EvaluationError("curvature_coeffs: non-finite coefficient partials", q, t);

  CurvatureCoeffs out;
  out.q = q;
  out.t = t;
  out.A_ij.assign(d.r, Mat::Zero(d.m, d.m));
  out.A_i = Mat::Zero(d.r, d.m);

  for (int nu = 0; nu < d.r; ++nu) {
    // T(i, j) = da_{nu i}/dq^j + sum_mu a_{mu j} da_{nu i}/dq^{m+mu};
    // A_{ij} = T - T^T keeps antisymmetry exact.
    Mat T(d.m, d.m);
    for (int i = 0; i < d.m; ++i)
      for (int j = 0; j < d.m; ++j) {
        double acc = a_dq[j](nu, i);
        for (int mu = 0; mu < d.r; ++mu) acc += a(mu, j) * a_dq[d.m + mu](nu, i);
        T(i, j) = acc;
      }
    out.A_ij[nu] = T - T.transpose();

    for (int i = 0; i < d.m; ++i) {
      double lhs = a_dt(nu, i);
      double rhs = b_dq(nu, i);
      for (int mu = 0; mu < d.r; ++mu) {
        lhs += b[mu] * a_dq[d.m + mu](nu, i);
        rhs += a(mu, i) * b_dq(nu, d.m + mu);
      }
      out.A_i(nu, i) = lhs - rhs;
    }
  }
  return out;
}

double contact_invariant(const PlanarField& a, const PlanarField& b, double x, double y,
                         double t) {
  const double hx = fd::step(x), hy = fd::step(y), ht = fd::step(t);
  const double da_dt = (a(x, y, t + ht) - a(x, y, t - ht)) / (2.0 * ht);
  const double da_dx = (a(x + hx, y, t) - a(x - hx, y, t)) / (2.0 * hx);
  const double db_dy = (b(x, y + hy, t) - b(x, y - hy, t)) / (2.0 * hy);
  const double db_dx = (b(x + hx, y, t) - b(x - hx, y, t)) / (2.0 * hx);
  const double value = da_dt - db_dy + b(x, y, t) * da_dx - a(x, y, t) * db_dx;
  if (!std::isfinite(value))
    throw EvaluationError("contact_invariant: non-finite field near the probe point",
                          (Vec(2) << x, y).finished(), t);
  return value;
}

}  // namespace voronec
