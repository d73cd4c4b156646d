#include "voronec/lagrangian.hpp"

namespace voronec {

NaturalLagrangianSpec::NaturalLagrangianSpec(int n, MatrixField metric, VectorField oneform,
                                             ScalarField potential,
                                             std::optional<LagrangianPartials> partials)
    : n_(n), metric_(std::move(metric)), oneform_(std::move(oneform)),
      potential_(std::move(potential)), partials_(std::move(partials)) {
  if (n_ < 1) throw ValidationError("NaturalLagrangianSpec: need n >= 1");
  if (!metric_ || !potential_)
    throw ValidationError("NaturalLagrangianSpec: metric and potential are required");
  if (!oneform_) {
    const int nn = n_;
    oneform_ = [nn](const Vec&, double) { return Vec::Zero(nn); };
  }
}

Mat NaturalLagrangianSpec::metric(const Vec& q, double t) const {
  Mat k = metric_(q, t);
  if (k.rows() != n_ || k.cols() != n_)
    throw ValidationError("NaturalLagrangianSpec: metric evaluator returned wrong shape");
  if (!k.allFinite()) throw EvaluationError("NaturalLagrangianSpec: non-finite metric", q, t);
  return k;
}

Vec NaturalLagrangianSpec::oneform(const Vec& q, double t) const {
  Vec d = oneform_(q, t);
  if (d.size() != n_)
    throw ValidationError("NaturalLagrangianSpec: oneform evaluator returned wrong size");
  if (!d.allFinite()) throw EvaluationError("NaturalLagrangianSpec: non-finite oneform", q, t);
  return d;
}

double NaturalLagrangianSpec::potential(const Vec& q, double t) const {
  const double v = potential_(q, t);
  if (!std::isfinite(v))
    throw EvaluationError("NaturalLagrangianSpec: non-finite potential", q, t);
  return v;
}

std::vector<Mat> NaturalLagrangianSpec::metric_dq(const Vec& q, double t) const {
  if (partials_ && partials_->metric_dq) return partials_->metric_dq(q, t);
  std::vector<Mat> out(n_);
  for (int s = 0; s < n_; ++s)
    out[s] = detail::partial_q([this](const Vec& qq, double tt) { return metric_(qq, tt); },
                               q, t, s);
  return out;
}

Mat NaturalLagrangianSpec::metric_dt(const Vec& q, double t) const {
  if (partials_ && partials_->metric_dt) return partials_->metric_dt(q, t);
  return detail::partial_t([this](const Vec& qq, double tt) { return metric_(qq, tt); }, q, t);
}

Mat NaturalLagrangianSpec::oneform_dq(const Vec& q, double t) const {
  if (partials_ && partials_->oneform_dq) return partials_->oneform_dq(q, t);
  Mat out(n_, n_);
  for (int s = 0; s < n_; ++s)
    out.col(s) = detail::partial_q(
        [this](const Vec& qq, double tt) { return oneform_(qq, tt); }, q, t, s);
  return out;
}

Vec NaturalLagrangianSpec::oneform_dt(const Vec& q, double t) const {
  if (partials_ && partials_->oneform_dt) return partials_->oneform_dt(q, t);
  return detail::partial_t([this](const Vec& qq, double tt) { return oneform_(qq, tt); }, q, t);
}

Vec NaturalLagrangianSpec::potential_dq(const Vec& q, double t) const {
  if (partials_ && partials_->potential_dq) return partials_->potential_dq(q, t);
  Vec out(n_);
  for (int s = 0; s < n_; ++s)
    out[s] = detail::partial_q(
        [this](const Vec& qq, double tt) { return potential_(qq, tt); }, q, t, s);
  return out;
}

double lagrangian_value(const NaturalLagrangianSpec& L, const Vec& q, const Vec& qdot,
                        double t) {
  if (q.size() != L.size() || qdot.size() != L.size())
    throw ValidationError("lagrangian_value: state size mismatch");
  const Mat k = L.metric(q, t);
  return 0.5 * qdot.dot(k * qdot) + L.oneform(q, t).dot(qdot) - L.potential(q, t);
}

Vec fiber_derivative(const NaturalLagrangianSpec& L, const Vec& q, const Vec& qdot,
                     double t) {
  if (q.size() != L.size() || qdot.size() != L.size())
    throw ValidationError("fiber_derivative: state size mismatch");
  return L.metric(q, t) * qdot + L.oneform(q, t);
}

double energy(const NaturalLagrangianSpec& L, const Vec& q, const Vec& qdot, double t) {
  if (q.size() != L.size() || qdot.size() != L.size())
    throw ValidationError("energy: state size mismatch");
  return 0.5 * qdot.dot(L.metric(q, t) * qdot) + L.potential(q, t);
}

double constrained_lagrangian(const NaturalLagrangianSpec& L, const ConstraintSpec& spec,
                              const Vec& q, const Vec& v, double t) {
  if (L.size() != spec.dims().n)
    throw ValidationError("constrained_lagrangian: Lagrangian/constraint dims disagree");
  return lagrangian_value(L, q, reconstruct_velocity(spec, q, v, t), t);
}

Vec kappa_momenta(const NaturalLagrangianSpec& L, const ConstraintSpec& spec, const Vec& q,
                  const Vec& v, double t) {
  if (L.size() != spec.dims().n)
    throw ValidationError("kappa_momenta: Lagrangian/constraint dims disagree");
  const Vec qdot = reconstruct_velocity(spec, q, v, t);
  return fiber_derivative(L, q, qdot, t).tail(spec.dims().r);
}

}  // namespace voronec
