#include "voronec/dynamics.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace voronec {
namespace {

double condition_number(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  const double smin = s[s.size() - 1];
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / smin;
}

// Everything the Voronec assembly needs at one (q, v, t), evaluated once.
struct VoronecWorkspace {
  Mat a;                   // r x m
  Vec b;                   // r
  std::vector<Mat> a_dq;   // n of r x m
  Mat a_dt;                // r x m
  Mat b_dq;                // r x n
  Vec b_dt;                // r
  Mat K;                   // n x n
  std::vector<Mat> K_dq;   // n of n x n
  Mat K_dt;                // n x n
  Vec delta;               // n
  Mat delta_dq;            // n x n
  Vec delta_dt;            // n
  Vec V_dq;                // n
  Vec rho;                 // reconstructed velocity, n
  Mat J;                   // n x m, drho/dv
  Vec p;                   // fiber derivative at rho, n
  Vec force;               // n (zero if absent)
};

VoronecWorkspace assemble(const NonholonomicSystem& sys, const Vec& q, const Vec& v,
                          double t) {
  const auto& d = sys.dims();
  VoronecWorkspace w;
  w.a = sys.constraint.coeff(q, t);
  w.b = sys.constraint.affine(q, t);
  w.a_dq = sys.constraint.coeff_dq(q, t);
  w.a_dt = sys.constraint.coeff_dt(q, t);
  w.b_dq = sys.constraint.affine_dq(q, t);
  w.b_dt = sys.constraint.affine_dt(q, t);
  w.K = sys.lagrangian.metric(q, t);
  w.K_dq = sys.lagrangian.metric_dq(q, t);
  w.K_dt = sys.lagrangian.metric_dt(q, t);
  w.delta = sys.lagrangian.oneform(q, t);
  w.delta_dq = sys.lagrangian.oneform_dq(q, t);
  w.delta_dt = sys.lagrangian.oneform_dt(q, t);
  w.V_dq = sys.lagrangian.potential_dq(q, t);

  w.rho = Vec(d.n);
  w.rho.head(d.m) = v;
  w.rho.tail(d.r) = w.a * v + w.b;
  w.J = Mat::Zero(d.n, d.m);
  w.J.topRows(d.m).setIdentity();
  w.J.bottomRows(d.r) = w.a;
  w.p = w.K * w.rho + w.delta;
  w.force = sys.force ? sys.force->eval(q, w.rho, t) : Vec::Zero(d.n);
  return w;
}

// dL_c/dq^s for the constrained Lagrangian L_c(q, v, t) = L(q, rho(q, v, t), t).
double constrained_dLdq(const VoronecWorkspace& w, int m, int s) {
  // rho_s = drho/dq^s has zero base block and a_dq[s] v + b_dq col s below.
  const Vec rho_s_tail = w.a_dq[s] * w.rho.head(m) + w.b_dq.col(s);
  double out = 0.5 * w.rho.dot(w.K_dq[s] * w.rho);
  out += w.p.tail(rho_s_tail.size()).dot(rho_s_tail);
  out += w.delta_dq.col(s).dot(w.rho);
  out -= w.V_dq[s];
  return out;
}

}  // namespace

VoronecDerivative voronec_rhs(const NonholonomicSystem& sys, const MechState& s) {
  const auto& d = sys.dims();
  if (s.q.size() != d.n || s.v.size() != d.m)
    throw ValidationError("voronec_rhs: state size mismatch");
  const VoronecWorkspace w = assemble(sys, s.q, s.v, s.t);

  // Constrained mass matrix M_c = J^T K J.
  const Mat Mc = w.J.transpose() * w.K * w.J;
  if (condition_number(Mc) > kCondMax)
    throw DegenerateMassError("voronec_rhs: constrained mass matrix is degenerate", s.q,
                              s.t);

  const Vec kappa = w.p.tail(d.r);

  // Curvature pairing sum_nu K_nu (A_{ij} qdot^j + A_i). The coefficients
  // reuse the partials already evaluated in the workspace.
  Vec curvature_term = Vec::Zero(d.m);
  for (int nu = 0; nu < d.r; ++nu) {
    Mat T(d.m, d.m);
    for (int i = 0; i < d.m; ++i)
      for (int j = 0; j < d.m; ++j) {
        double acc = w.a_dq[j](nu, i);
        for (int mu = 0; mu < d.r; ++mu) acc += w.a(mu, j) * w.a_dq[d.m + mu](nu, i);
        T(i, j) = acc;
      }
    const Mat A = T - T.transpose();
    Vec Ai(d.m);
    for (int i = 0; i < d.m; ++i) {
      double lhs = w.a_dt(nu, i);
      double rhs = w.b_dq(nu, i);
      for (int mu = 0; mu < d.r; ++mu) {
        lhs += w.b[mu] * w.a_dq[d.m + mu](nu, i);
        rhs += w.a(mu, i) * w.b_dq(nu, d.m + mu);
      }
      Ai[i] = lhs - rhs;
    }
    curvature_term += kappa[nu] * (A * s.v + Ai);
  }

  // Force terms F_i + sum_nu a_{nu i} F_{m+nu}.
  const Vec force_term = w.force.head(d.m) + w.a.transpose() * w.force.tail(d.r);

  // dL_c/dq^i + sum_nu a_{nu i} dL_c/dq^{m+nu}.
  Vec dLc_base(d.m), dLc_fiber(d.r);
  for (int i = 0; i < d.m; ++i) dLc_base[i] = constrained_dLdq(w, d.m, i);
  for (int nu = 0; nu < d.r; ++nu) dLc_fiber[nu] = constrained_dLdq(w, d.m, d.m + nu);
  const Vec lagr_term = dLc_base + w.a.transpose() * dLc_fiber;

  // Chain-rule remainder of d/dt dL_c/dv^i:
  //   sum_s d2L_c/dv dq^s qdot^s + d2L_c/dv dt,
  // with dL_c/dv = J^T (K rho + Delta).
  Vec chain = Vec::Zero(d.m);
  for (int s_idx = 0; s_idx < d.n; ++s_idx) {
    Vec rho_s = Vec::Zero(d.n);
    rho_s.tail(d.r) = w.a_dq[s_idx] * s.v + w.b_dq.col(s_idx);
    Mat J_s = Mat::Zero(d.n, d.m);
    J_s.bottomRows(d.r) = w.a_dq[s_idx];
    const Vec c_s = J_s.transpose() * w.p +
                    w.J.transpose() * (w.K_dq[s_idx] * w.rho + w.K * rho_s +
                                       w.delta_dq.col(s_idx));
    chain += c_s * w.rho[s_idx];
  }
  {
    Vec rho_t = Vec::Zero(d.n);
    rho_t.tail(d.r) = w.a_dt * s.v + w.b_dt;
    Mat J_t = Mat::Zero(d.n, d.m);
    J_t.bottomRows(d.r) = w.a_dt;
    chain += J_t.transpose() * w.p +
             w.J.transpose() * (w.K_dt * w.rho + w.K * rho_t + w.delta_dt);
  }

  const Vec rhs = lagr_term + force_term + curvature_term - chain;

  VoronecDerivative out;
  out.qdot = w.rho;
  out.vdot = Mc.ldlt().solve(rhs);
  if (!out.vdot.allFinite())
    throw DegenerateMassError("voronec_rhs: mass solve produced non-finite accelerations",
                              s.q, s.t);
  return out;
}

MultiplierSolution multiplier_rhs(const NonholonomicSystem& sys, const Vec& q,
                                  const Vec& qdot, double t) {
  const auto& d = sys.dims();
  if (q.size() != d.n || qdot.size() != d.n)
    throw ValidationError("multiplier_rhs: state size mismatch");

  const Mat K = sys.lagrangian.metric(q, t);
  if (condition_number(K) > kCondMax)
    throw DegenerateMassError("multiplier_rhs: kinetic matrix is degenerate", q, t);
  const std::vector<Mat> K_dq = sys.lagrangian.metric_dq(q, t);
  const Mat K_dt = sys.lagrangian.metric_dt(q, t);
  const Mat delta_dq = sys.lagrangian.oneform_dq(q, t);
  const Vec delta_dt = sys.lagrangian.oneform_dt(q, t);
  const Vec V_dq = sys.lagrangian.potential_dq(q, t);
  const Vec force = sys.force ? sys.force->eval(q, qdot, t) : Vec::Zero(d.n);

  // Euler-Lagrange right-hand side with the qddot terms removed:
  //   rhs_EL = dL/dq - (sum_s K_dq[s] qdot^s) qdot - K_dt qdot
  //            - (dDelta/dq) qdot - dDelta/dt + F.
  Vec rhs_el(d.n);
  {
    Mat Kdot = K_dt;
    for (int s = 0; s < d.n; ++s) Kdot += K_dq[s] * qdot[s];
    Vec dLdq(d.n);
    for (int s = 0; s < d.n; ++s)
      dLdq[s] = 0.5 * qdot.dot(K_dq[s] * qdot) + delta_dq.col(s).dot(qdot) - V_dq[s];
    rhs_el = dLdq - Kdot * qdot - delta_dq * qdot - delta_dt + force;
  }

  // Implicit constraint rows G = [a, -I], affine part b; differentiated
  // constraint G qddot + Gdot qdot + bdot = 0 supplies the lower block.
  const Mat a = sys.constraint.coeff(q, t);
  const Vec b = sys.constraint.affine(q, t);
  const std::vector<Mat> a_dq = sys.constraint.coeff_dq(q, t);
  const Mat a_dt = sys.constraint.coeff_dt(q, t);
  const Mat b_dq = sys.constraint.affine_dq(q, t);
  const Vec b_dt = sys.constraint.affine_dt(q, t);

  Mat G(d.r, d.n);
  G.leftCols(d.m) = a;
  G.rightCols(d.r) = -Mat::Identity(d.r, d.r);

  Vec rhs_c = -(a_dt * qdot.head(d.m) + b_dq * qdot + b_dt);
  for (int s = 0; s < d.n; ++s) rhs_c -= (a_dq[s] * qdot.head(d.m)) * qdot[s];

  Mat saddle = Mat::Zero(d.n + d.r, d.n + d.r);
  saddle.topLeftCorner(d.n, d.n) = K;
  saddle.topRightCorner(d.n, d.r) = G.transpose();
  saddle.bottomLeftCorner(d.r, d.n) = G;
  Vec rhs(d.n + d.r);
  rhs.head(d.n) = rhs_el;
  rhs.tail(d.r) = rhs_c;

  Eigen::FullPivLU<Mat> lu(saddle);
  if (!lu.isInvertible())
    throw DegenerateConstraintError("multiplier_rhs: singular saddle system");
  const Vec sol = lu.solve(rhs);

  MultiplierSolution out;
  out.qddot = sol.head(d.n);
  out.lambda = -sol.tail(d.r);
  return out;
}

Vec constraint_residual(const NonholonomicSystem& sys, const Vec& q, const Vec& qdot,
                        double t) {
  const auto& d = sys.dims();
  if (q.size() != d.n || qdot.size() != d.n)
    throw ValidationError("constraint_residual: state size mismatch");
  const Mat a = sys.constraint.coeff(q, t);
  const Vec b = sys.constraint.affine(q, t);
  return a * qdot.head(d.m) + b - qdot.tail(d.r);
}

namespace {

std::vector<double> sample_grid(const IntegrateOptions& opts, double t0, double t_end) {
  if (!opts.output_times.empty()) return opts.output_times;
  double step = opts.output_step;
  if (step <= 0) step = (t_end - t0) / 200.0;
  if (t_end <= t0) return {t0};
  const auto n = static_cast<std::size_t>(std::ceil((t_end - t0) / step - 1e-9));
  return uniform_grid(t0, t_end, std::max<std::size_t>(n, 1));
}

TrajectorySample make_sample(const NonholonomicSystem& sys, const IntegrateOptions& opts,
                             Vec q, Vec qdot_full, double t) {
  TrajectorySample out;
  out.state.q = std::move(q);
  out.state.v = qdot_full.head(sys.dims().m);
  out.state.t = t;
  out.diag.constraint_residual = constraint_residual(sys, out.state.q, qdot_full, t);
  out.diag.energy = energy(sys.lagrangian, out.state.q, qdot_full, t);
  if (opts.moving_energy_field) {
    const Vec xi = (*opts.moving_energy_field)(out.state.q, t);
    out.diag.moving_energy =
        out.diag.energy - fiber_derivative(sys.lagrangian, out.state.q, qdot_full, t).dot(xi);
  }
  return out;
}

}  // namespace

Trajectory integrate(const NonholonomicSystem& sys, const MechState& s0, double t_end,
                     const IntegrateOptions& opts) {
  const auto& d = sys.dims();
  if (s0.q.size() != d.n || s0.v.size() != d.m)
    throw ValidationError("integrate: initial state size mismatch");
  if (t_end < s0.t) throw ValidationError("integrate: t_end must be >= s0.t");

  const std::vector<double> samples = sample_grid(opts, s0.t, t_end);
  Trajectory traj;
  traj.integrator = method_name(opts.ode.method);
  traj.samples.reserve(samples.size());

  const bool use_multiplier = opts.formulation == IntegrateOptions::Formulation::multiplier;
  traj.formulation = use_multiplier ? "multiplier" : "voronec";

  if (use_multiplier) {
    // State y = (q, qdot) in R^{2n}; constraints enforced at acceleration
    // level only, so the residual diagnostic reports the actual drift.
    Vec y0(2 * d.n);
    y0.head(d.n) = s0.q;
    y0.tail(d.n) = reconstruct_velocity(sys.constraint, s0.q, s0.v, s0.t);
    auto rhs = [&sys, &d](double t, const Vec& y) {
      const Vec q = y.head(d.n);
      const Vec qdot = y.tail(d.n);
      const MultiplierSolution sol = multiplier_rhs(sys, q, qdot, t);
      Vec dy(2 * d.n);
      dy.head(d.n) = qdot;
      dy.tail(d.n) = sol.qddot;
      return dy;
    };
    auto observe = [&](double t, const Vec& y) {
      traj.samples.push_back(make_sample(sys, opts, y.head(d.n), y.tail(d.n), t));
    };
    traj.stats = integrate_ode(rhs, y0, s0.t, t_end, samples, observe, opts.ode);
  } else {
    // State y = (q, v) in R^{n+m}; every emitted state is admissible since
    // the full velocity is reconstructed through the constraint.
    Vec y0(d.n + d.m);
    y0.head(d.n) = s0.q;
    y0.tail(d.m) = s0.v;
    auto rhs = [&sys, &d](double t, const Vec& y) {
      MechState s{y.head(d.n), y.tail(d.m), t};
      const VoronecDerivative der = voronec_rhs(sys, s);
      Vec dy(d.n + d.m);
      dy.head(d.n) = der.qdot;
      dy.tail(d.m) = der.vdot;
      return dy;
    };
    auto observe = [&](double t, const Vec& y) {
      const Vec q = y.head(d.n);
      const Vec qdot = reconstruct_velocity(sys.constraint, q, y.tail(d.m), t);
      traj.samples.push_back(make_sample(sys, opts, q, qdot, t));
    };
    traj.stats = integrate_ode(rhs, y0, s0.t, t_end, samples, observe, opts.ode);
  }

  for (std::size_t k = 1; k < traj.samples.size(); ++k)
    if (!(traj.samples[k].state.t > traj.samples[k - 1].state.t))
      throw ValidationError("integrate: sample times must be strictly increasing");
  return traj;
}

}  // namespace voronec
