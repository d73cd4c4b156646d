#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "voronec/types.hpp"

namespace voronec {

/// Optional analytic partial derivatives of the constraint coefficients.
/// Each evaluator may be left empty individually; central finite differences
/// substitute for the missing ones.
struct ConstraintPartials {
  /// n matrices, the s-th is the r x m matrix of da_{nu i}/dq^s.
  std::function<std::vector<Mat>(const Vec& q, double t)> coeff_dq;
  MatrixField coeff_dt;   ///< r x m, da_{nu i}/dt
  MatrixField affine_dq;  ///< r x n, (nu, s) entry da_nu/dq^s
  VectorField affine_dt;  ///< length r, da_nu/dt
};

/// Affine velocity constraints in solved normal form:
///   qdot^{m+nu} = sum_i a_{nu i}(q, t) qdot^i + a_nu(q, t),  nu = 1..r.
/// The coefficient evaluator returns the r x m matrix a_{nu i}; the affine
/// evaluator returns the length-r vector a_nu.
class ConstraintSpec {
 public:
  ConstraintSpec(Dimensions dims, MatrixField coeff, VectorField affine,
                 std::optional<ConstraintPartials> partials = std::nullopt);

  /// Homogeneous null constraint (a == 0, affine == 0) with r constrained rows.
  static ConstraintSpec null(Dimensions dims);

  const Dimensions& dims() const { return dims_; }

  Mat coeff(const Vec& q, double t) const;   ///< r x m, finite-checked
  Vec affine(const Vec& q, double t) const;  ///< length r, finite-checked

  bool has_analytic_partials() const { return partials_.has_value(); }

  std::vector<Mat> coeff_dq(const Vec& q, double t) const;
  Mat coeff_dt(const Vec& q, double t) const;
  Mat affine_dq(const Vec& q, double t) const;
  Vec affine_dt(const Vec& q, double t) const;

 private:
  Dimensions dims_;
  MatrixField coeff_;
  VectorField affine_;
  std::optional<ConstraintPartials> partials_;
};

/// Voronec curvature coefficients at a point: A_ij holds r antisymmetric
/// m x m matrices A_{ij}^{(nu)}; A_i is the r x m matrix A_i^{(nu)}.
struct CurvatureCoeffs {
  std::vector<Mat> A_ij;
  Mat A_i;
  Vec q;
  double t = 0.0;
};

/// Full velocity from base velocities through the constraint:
/// qdot^i = v^i (i <= m), qdot^{m+nu} = sum_i a_{nu i} v^i + a_nu.
Vec reconstruct_velocity(const ConstraintSpec& spec, const Vec& q, const Vec& v, double t);

/// The curvature coefficients of the constraint connection,
///   A_{ij}^{(nu)} = (da_{nu i}/dq^j + sum_mu a_{mu j} da_{nu i}/dq^{m+mu}) - (i <-> j),
///   A_i^{(nu)}    = (da_{nu i}/dt + sum_mu a_mu da_{nu i}/dq^{m+mu})
///                   - (da_nu/dq^i + sum_mu a_{mu i} da_nu/dq^{m+mu}).
CurvatureCoeffs curvature_coeffs(const ConstraintSpec& spec, const Vec& q, double t);

namespace detail {
/// Curvature assembly from already-evaluated coefficients and partials, so a
/// caller that needs them anyway (the Voronec right-hand side) shares the
/// evaluations with its own terms.
CurvatureCoeffs curvature_from_partials(const Dimensions& d, const Mat& a, const Vec& b,
                                        const std::vector<Mat>& a_dq, const Mat& a_dt,
                                        const Mat& b_dq);
}  // namespace detail

/// Scalar field of the planar contact test, arguments (x, y, t).
using PlanarField = std::function<double(double x, double y, double t)>;

/// Nonholonomy invariant of the single planar constraint
/// xdot - a(x,y,t) ydot - b(x,y,t) = 0: the coefficient
///   da/dt - db/dy + b da/dx - a db/dx
/// of dx^dy^dt in alpha^dalpha. Nonzero means the constraint is
/// nonholonomic at (x, y, t). Partials are taken by central differences.
double contact_invariant(const PlanarField& a, const PlanarField& b, double x, double y,
                         double t);

}  // namespace voronec
