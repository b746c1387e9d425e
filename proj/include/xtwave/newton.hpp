#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>

#include "xtwave/parallel.hpp"
#include "xtwave/system.hpp"

namespace xtwave {

/// Discrete Newton potential on S_hx: z = K^{-1} (load, psi_a), where K is the
/// c^2-stiffness. One factorization of K is cached and shared read-only.
class NewtonSolver {
 public:
  NewtonSolver(SplineSpace space_x, Fn1 c2, int n_points = 0);

  const SplineSpace& space() const { return space_; }
  const Fn1& c2() const { return c2_; }
  const Eigen::SparseMatrix<double>& mass() const { return mass_; }
  const Eigen::SparseMatrix<double>& stiffness() const { return stiff_; }

  /// (load, psi_a) by composite Gauss with degree+3 points per element.
  Eigen::VectorXd moments(const Fn1& load) const;

  Eigen::VectorXd apply(const Eigen::VectorXd& moments) const;
  Eigen::VectorXd apply(const Fn1& load) const { return apply(moments(load)); }
  /// N_h of a discrete field with coefficients u: K^{-1} M u.
  Eigen::VectorXd apply_discrete(const Eigen::VectorXd& u) const { return apply(Eigen::VectorXd(mass_ * u)); }

  /// ||.||^2_{N_h} from a moment vector: m^T K^{-1} m.
  double norm_sq_moments(const Eigen::VectorXd& m) const { return m.dot(apply(m)); }
  /// ||U_h||^2_{N_h} = u^T M K^{-1} M u.
  double norm_sq(const Eigen::VectorXd& u) const { return norm_sq_moments(mass_ * u); }

  /// Dense M K^{-1} M.
  Eigen::MatrixXd mkinvm() const;

 private:
  SplineSpace space_;
  Fn1 c2_;
  int n_points_;
  Eigen::SparseMatrix<double> mass_;
  Eigen::SparseMatrix<double> stiff_;
  std::shared_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> chol_;
};

/// (int_0^T ||c grad N_h v(.,s)||^2 e^{-s/T} ds)^{1/2} with Gauss nodes on the
/// given time mesh: one moment vector and one K-solve per time node.
double seminorm_Neh(const Fn2& v, const NewtonSolver& newton, const KnotVector& mesh_t, double T,
                    int n_points = 0, Exec exec = Exec::Parallel);

/// Same quantity for a tensor field sum w(a,b) psi_a theta_b via the quadratic
/// form w^T (G_t (x) M K^{-1} M) w, G_t the weighted Gram matrix of theta.
double seminorm_Neh_discrete(const Eigen::MatrixXd& w, const NewtonSolver& newton,
                             const Eigen::MatrixXd& time_gram);

/// Sharp Poincare constant |omega| / pi of H^1_0 on an interval.
inline double poincare_constant(const Interval& omega) { return omega.length() / 3.14159265358979323846; }

}  // namespace xtwave
