#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "voronec/geometry.hpp"
#include "voronec/types.hpp"

namespace voronec {

/// Optional analytic partials of the natural Lagrangian data. Any evaluator
/// may be left empty; finite differences substitute per missing piece.
struct LagrangianPartials {
  std::function<std::vector<Mat>(const Vec& q, double t)> metric_dq;  ///< n of n x n
  MatrixField metric_dt;                                              ///< n x n
  MatrixField oneform_dq;  ///< n x n, (i, s) entry dDelta_i/dq^s
  VectorField oneform_dt;  ///< length n
  VectorField potential_dq;  ///< length n
};

/// Natural time-dependent Lagrangian
///   L(q, qdot, t) = 1/2 qdot^T K_t qdot + Delta_t(qdot) - V(q, t)
/// with kinetic metric K_t, one-form Delta_t (possibly zero) and potential V.
class NaturalLagrangianSpec {
 public:
  NaturalLagrangianSpec(int n, MatrixField metric, VectorField oneform,
                        ScalarField potential,
                        std::optional<LagrangianPartials> partials = std::nullopt);

  int size() const { return n_; }

  Mat metric(const Vec& q, double t) const;     ///< symmetric n x n
  Vec oneform(const Vec& q, double t) const;    ///< length n
  double potential(const Vec& q, double t) const;

  std::vector<Mat> metric_dq(const Vec& q, double t) const;
  Mat metric_dt(const Vec& q, double t) const;
  Mat oneform_dq(const Vec& q, double t) const;
  Vec oneform_dt(const Vec& q, double t) const;
  Vec potential_dq(const Vec& q, double t) const;

 private:
  int n_;
  MatrixField metric_;
  VectorField oneform_;
  ScalarField potential_;
  std::optional<LagrangianPartials> partials_;
};

/// Generalized non-potential forces F_i(q, qdot, t) dq^i.
class ForceSpec {
 public:
  using Field = std::function<Vec(const Vec& q, const Vec& qdot, double t)>;

  explicit ForceSpec(Field eval) : eval_(std::move(eval)) {
    if (!eval_) throw ValidationError("ForceSpec: evaluator is required");
  }

  Vec eval(const Vec& q, const Vec& qdot, double t) const {
    Vec f = eval_(q, qdot, t);
    if (!f.allFinite()) throw EvaluationError("ForceSpec: non-finite force", q, t);
    return f;
  }

 private:
  Field eval_;
};

double lagrangian_value(const NaturalLagrangianSpec& L, const Vec& q, const Vec& qdot,
                        double t);

/// Fiber derivative of the natural Lagrangian: K_t qdot + Delta_t.
Vec fiber_derivative(const NaturalLagrangianSpec& L, const Vec& q, const Vec& qdot,
                     double t);

/// E = 1/2 qdot^T K qdot + V; equals FL(qdot) . qdot - L for natural systems.
double energy(const NaturalLagrangianSpec& L, const Vec& q, const Vec& qdot, double t);

/// L evaluated at the velocity reconstructed through the constraint.
double constrained_lagrangian(const NaturalLagrangianSpec& L, const ConstraintSpec& spec,
                              const Vec& q, const Vec& v, double t);

/// K_nu = dL/dqdot^{m+nu}, the constraint imposed after differentiation:
/// the last r components of the fiber derivative at the reconstructed velocity.
Vec kappa_momenta(const NaturalLagrangianSpec& L, const ConstraintSpec& spec, const Vec& q,
                  const Vec& v, double t);

}  // namespace voronec
