#pragma once

#include <optional>
#include <string>
#include <vector>

#include "voronec/geometry.hpp"
#include "voronec/lagrangian.hpp"
#include "voronec/ode.hpp"
#include "voronec/types.hpp"

namespace voronec {

/// Mechanical state: full configuration q, base velocities v = (qdot^1..qdot^m),
/// and time; the constrained velocities are implied through the constraint.
struct MechState {
  Vec q;
  Vec v;
  double t = 0.0;
};

struct SampleDiagnostics {
  Vec constraint_residual;  ///< length r
  double energy = 0.0;
  std::optional<double> moving_energy;
};

struct TrajectorySample {
  MechState state;
  SampleDiagnostics diag;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  ///< strictly increasing in t
  std::string integrator;
  std::string formulation;
  StepStats stats;
};

/// The constrained triple (L, constraint, optional forces).
struct NonholonomicSystem {
  NaturalLagrangianSpec lagrangian;
  ConstraintSpec constraint;
  std::optional<ForceSpec> force;

  NonholonomicSystem(NaturalLagrangianSpec L, ConstraintSpec c,
                     std::optional<ForceSpec> f = std::nullopt)
      : lagrangian(std::move(L)), constraint(std::move(c)), force(std::move(f)) {
    if (lagrangian.size() != constraint.dims().n)
      throw ValidationError("NonholonomicSystem: Lagrangian/constraint dims disagree");
  }

  const Dimensions& dims() const { return constraint.dims(); }
};

/// Condition-number cap for mass-matrix factorizations.
inline constexpr double kCondMax = 1e12;

struct VoronecDerivative {
  Vec qdot;  ///< length n
  Vec vdot;  ///< length m
};

/// Explicit form of the closed Voronec equations at one state: qdot is the
/// reconstructed velocity and vdot solves M_c vdot = rhs with
/// M_c = d2L_c/dv dv the constrained mass matrix.
VoronecDerivative voronec_rhs(const NonholonomicSystem& sys, const MechState& s);

struct MultiplierSolution {
  Vec qddot;   ///< length n
  Vec lambda;  ///< length r
};

/// Lagrange-multiplier formulation: solves the saddle system
/// [K  G^T; G  0] [qddot; -lambda] = [rhs_EL; rhs_c] for the full
/// accelerations and multipliers, with G = [a, -I] the implicit constraint
/// rows and rhs_c the differentiated-constraint right-hand side.
MultiplierSolution multiplier_rhs(const NonholonomicSystem& sys, const Vec& q,
                                  const Vec& qdot, double t);

/// Per-constraint residual sum_i a_{nu i} qdot^i + a_nu - qdot^{m+nu}.
Vec constraint_residual(const NonholonomicSystem& sys, const Vec& q, const Vec& qdot,
                        double t);

struct IntegrateOptions {
  enum class Formulation { voronec, multiplier };

  Formulation formulation = Formulation::voronec;
  OdeOptions ode;
  double output_step = 0.0;           ///< 0 picks (t_end - t0)/200
  std::vector<double> output_times;   ///< overrides output_step when nonempty
  /// When set, the moving-energy diagnostic J = E - FL(xi) is recorded per
  /// sample with this xi_t(q).
  std::optional<VectorField> moving_energy_field;
};

/// Integrates the system from s0 (constrained velocities reconstructed, so
/// the initial state is admissible by construction) up to t_end and samples
/// the trajectory with per-sample diagnostics.
Trajectory integrate(const NonholonomicSystem& sys, const MechState& s0, double t_end,
                     const IntegrateOptions& opts = {});

}  // namespace voronec
