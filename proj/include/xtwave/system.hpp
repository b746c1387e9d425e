#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>

#include "xtwave/parallel.hpp"
#include "xtwave/splines.hpp"

namespace xtwave {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

/// Exact (U, V = dU/dt) with the first derivatives the error norms need.
struct ExactSolution {
  Fn2 u, u_x, u_t;
  Fn2 v, v_x, v_t;
};

/// Data of  d_tt U - div(c^2 grad U) = F  on omega x (0,T), U = 0 on the boundary.
struct ProblemSpec {
  Interval omega;
  double T = 1.0;
  Fn1 c2;
  double c0 = 1.0;  // lower bound of c (not c^2)
  Fn2 f;
  Fn1 u0, u0_x;
  Fn1 v0;
  // Only needed by the stability bound and by d/dx evaluation of V_h.
  Fn1 v0_x;
  Fn1 div_c2_grad_u0;
  std::optional<ExactSolution> exact;
  // x-position at time t of a line across which the exact solution is not
  // smooth; error quadrature splits elements there.
  Fn1 singular_line;
};

/// Samples the ProblemSpec invariants (c^2 >= c0^2, exact-solution consistency
/// with the initial data and V = dU/dt); throws InvalidArgument on violation.
void validate(const ProblemSpec& problem, std::uint64_t seed = 1);

/// Shift (U0, V0) added back to the solved coefficients on evaluation.
struct InitialShift {
  Fn1 u0, u0_x, v0, v0_x;
};

/// Univariate Kronecker factors of the block system.
struct BlockFactors {
  Eigen::SparseMatrix<double> mass_x;   // (psi_c, psi_a)
  Eigen::SparseMatrix<double> stiff_x;  // (c^2 psi_c', psi_a')
  Eigen::SparseMatrix<double> s_e;      // (phi_j', phi_b')_e
  Eigen::SparseMatrix<double> a_e_t;    // (phi_j, phi_b')_e
};

/// Square Petrov-Galerkin system. Unknown layout: U block then V block, each
/// indexed i_t * n_x + i_x (space fastest).
struct BlockSystem {
  SplineSpace space_x;
  SplineSpace space_t;
  double T = 1.0;
  int n_x = 0;
  int n_t = 0;
  Fn1 c2;
  int n_points = 0;  // quadrature used for assembly, 0 = defaults
  BlockFactors factors;
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  InitialShift shift;

  int size() const { return 2 * n_x * n_t; }
  int index(int block, int i_x, int i_t) const { return block * n_x * n_t + i_t * n_x + i_x; }
};

/// kron(time, space) with the space index fastest.
Eigen::SparseMatrix<double> kron(const Eigen::SparseMatrix<double>& time,
                                 const Eigen::SparseMatrix<double>& space);

BlockFactors assemble_factors(const SplineSpace& space_x, const SplineSpace& space_t, const Fn1& c2,
                              double T, int n_points = 0);

Eigen::SparseMatrix<double> expand_blocks(const BlockFactors& factors);

/// Data entering the right-hand side functional.
struct LoadData {
  Fn1 c2;
  Fn2 f;
  Fn1 u0_x;
  Fn1 v0;
};

Eigen::VectorXd assemble_rhs(const LoadData& data, const SplineSpace& space_x,
                             const SplineSpace& space_t, double T, int n_points = 0,
                             Exec exec = Exec::Parallel);

BlockSystem assemble(const ProblemSpec& problem, const SplineSpace& space_x,
                     const SplineSpace& space_t, int n_points = 0, Exec exec = Exec::Parallel);

/// Solved coefficients of the shifted unknowns (U - U0, V - V0).
struct DiscreteSolution {
  SplineSpace space_x;
  SplineSpace space_t;
  double T = 1.0;
  Eigen::MatrixXd u;  // n_x x n_t
  Eigen::MatrixXd v;
  InitialShift shift;
  double residual = 0.0;  // relative algebraic residual of the solve
};

DiscreteSolution solve(const BlockSystem& system);

/// Solves with an externally supplied right-hand side (same matrix).
DiscreteSolution solve(const BlockSystem& system, const Eigen::VectorXd& rhs);

/// (U_h, V_h) or their derivatives at (x, t), shift included.
std::pair<double, double> evaluate(const DiscreteSolution& solution, double x, double t, int d_x,
                                   int d_t);

/// Max over test basis pairs of |A((U_h,V_h),(lambda,chi)) - rhs|, relative to
/// |rhs|, with the form evaluated from pointwise values of the solved fields.
double galerkin_residual(const DiscreteSolution& solution, const BlockSystem& system);

/// Text dump: metadata header plus one `block,i_x,i_t,value` line per coefficient.
void write_solution(std::ostream& os, const DiscreteSolution& solution);

struct SolutionDump {
  SplineSpace space_x;
  SplineSpace space_t;
  double T;
  Eigen::MatrixXd u;
  Eigen::MatrixXd v;
};

SolutionDump read_solution(std::istream& is);

}  // namespace xtwave
