#pragma once

#include <Eigen/Dense>

#include "xtwave/newton.hpp"
#include "xtwave/parallel.hpp"
#include "xtwave/system.hpp"

namespace xtwave {

/// Error components of the discrete trial norm plus plain L^2 errors.
/// err_Veh^2 = err_dtU_L2e^2 + err_dtV_Neh^2 + err_cgradU_L2e^2 + err_V_L2e^2.
struct ErrorReport {
  double err_dtU_L2e = 0.0;
  double err_dtV_Neh = 0.0;
  double err_cgradU_L2e = 0.0;
  double err_V_L2e = 0.0;
  double err_Veh = 0.0;
  double err_U_L2e = 0.0;
  // Unweighted L^2(Q_T) errors (what the convergence plots show).
  double err_U_L2 = 0.0;
  double err_V_L2 = 0.0;
  bool relative = false;
};

struct ErrorReports {
  ErrorReport absolute;
  ErrorReport relative;  // each entry divided by the same norm of the exact solution
};

/// Tensor Gauss quadrature of the error over Q_T with e^{-t/T}; `n_points`
/// defaults to max(p_x, p_t) + 3 per element and direction. Elements cut by
/// the problem's singular line are split at the line.
ErrorReports error_report(const DiscreteSolution& solution, const ProblemSpec& problem,
                          int n_points = 0, Exec exec = Exec::Parallel);

/// log(coarse/fine) / log(ratio).
double eoc(double coarse, double fine, double ratio = 2.0);

/// ||(U_h, V_h)||_{V_eh} of the solved (shifted) coefficients, by quadratic forms.
double discrete_Veh_norm(const DiscreteSolution& solution, const Fn1& c2);

/// 1 / (2 sqrt(C_omega^2 / c0^2 + 4 T^2)).
double infsup_lower_bound(const Interval& omega, double c0, double T);

/// Data bound on the discrete trial norm of the solution:
///   beta * (||F||_{L2e} + s ||div(c^2 grad U0)|| + s ||c grad V0||),
/// beta the reciprocal of infsup_lower_bound, s = 1 for Discrete and sqrt(T)
/// for Continuous. Needs div_c2_grad_u0 and v0_x.
enum class BoundForm { Discrete, Continuous };
double stability_bound(const ProblemSpec& problem, BoundForm form = BoundForm::Discrete);

// ---------------------------------------------------------------------------
// Elliptic projectors

class SpaceProjector {
 public:
  explicit SpaceProjector(const NewtonSolver& newton) : newton_(&newton) {}

  /// (c^2 grad w, psi_a') for all retained a.
  Eigen::VectorXd moments(const Fn1& grad_w) const;
  /// Coefficients of Pi w: K z = (c^2 grad w, psi_a').
  Eigen::VectorXd project(const Fn1& grad_w) const { return newton_->apply(moments(grad_w)); }
  /// max_a |(c^2 (grad Pi w - grad w), psi_a')| / max(1, max_a |(c^2 grad w, psi_a')|).
  double orthogonality_residual(const Fn1& grad_w, const Eigen::VectorXd& z) const;

  const NewtonSolver& newton() const { return *newton_; }

 private:
  const NewtonSolver* newton_;
};

class TimeProjector {
 public:
  TimeProjector(SplineSpace space_t, double T, int n_points = 0);

  /// (d_t w, phi_b')_e for all retained b.
  Eigen::VectorXd moments(const Fn1& dt_w) const;
  /// Coefficients of Pi w: S_e z = (d_t w, phi_b')_e.
  Eigen::VectorXd project(const Fn1& dt_w) const;
  double orthogonality_residual(const Fn1& dt_w, const Eigen::VectorXd& z) const;

  const SplineSpace& space() const { return space_; }
  double T() const { return T_; }
  const Eigen::MatrixXd& s_e() const { return s_e_; }     // (phi_j', phi_b')_e
  const Eigen::MatrixXd& mass_e() const { return m_e_; }  // (phi_j, phi_b)_e

 private:
  SplineSpace space_;
  double T_;
  int n_points_;
  Eigen::MatrixXd s_e_;
  Eigen::MatrixXd m_e_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
};

/// A space-time function with the derivatives the projectors consume.
struct SpaceTimeField {
  Fn2 value, dx, dt, dxdt;
};

/// Pi^grad Pi^dt W: time projection first (pointwise in x), then space.
Eigen::MatrixXd project_time_then_space(const SpaceTimeField& w, const SpaceProjector& sp,
                                        const TimeProjector& tp);
/// Pi^dt Pi^grad W: space projection first (pointwise in t), then time.
Eigen::MatrixXd project_space_then_time(const SpaceTimeField& w, const SpaceProjector& sp,
                                        const TimeProjector& tp);

/// ||Pi^grad Pi^dt W - Pi^dt Pi^grad W||_{L2e(Q_T)}.
double commutation_check(const SpaceTimeField& w, const SplineSpace& space_x,
                         const SplineSpace& space_t, const Fn1& c2, double T);

struct ProjectionStability {
  double projected = 0.0;  // ||c grad Pi W|| or ||d_t Pi W|| in L2e(Q_T)
  double original = 0.0;   // same seminorm of W
};

ProjectionStability space_projection_stability(const SpaceTimeField& w, const SpaceProjector& sp,
                                               const KnotVector& mesh_t, double T);
ProjectionStability time_projection_stability(const SpaceTimeField& w, const TimeProjector& tp,
                                              const KnotVector& mesh_x);

// ---------------------------------------------------------------------------
// Inf-sup

struct InfSupEstimate {
  double gamma_h = 0.0;
  double lower_bound = 0.0;
  int n_x = 0;
  int n_t = 0;
};

constexpr int kMaxInfSupSize = 2000;

/// Smallest generalized singular value of the Petrov-Galerkin matrix between
/// the discrete trial norm (X) and test norm (Y): B^T Y^{-1} B x = gamma^2 X x.
InfSupEstimate estimate_infsup(const ProblemSpec& problem, const SplineSpace& space_x,
                               const SplineSpace& space_t, int n_points = 0);

}  // namespace xtwave
