#include "xtwave/newton.hpp"

#include <cmath>

#include "element_basis.hpp"
#include "xtwave/error.hpp"
#include "xtwave/forms.hpp"
#include "xtwave/quadrature.hpp"

namespace xtwave {

NewtonSolver::NewtonSolver(SplineSpace space_x, Fn1 c2, int n_points)
    : space_(std::move(space_x)), c2_(std::move(c2)), n_points_(n_points) {
  mass_ = assemble_space_matrix(space_, space_, 0, 0, [](double) { return 1.0; }, n_points).matrix;
  stiff_ = assemble_space_matrix(space_, space_, 1, 1, c2_, n_points).matrix;
  chol_ = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>(stiff_);
  if (chol_->info() != Eigen::Success)
    throw Error(ErrorCode::FactorizationError, "Cholesky of the spatial stiffness failed");
}

Eigen::VectorXd NewtonSolver::moments(const Fn1& load) const {
  const int nq = n_points_ > 0 ? n_points_ : space_.degree() + 3;
  const QuadratureRule rule = gauss_rule(nq);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(space_.dim());
  for (int e = 0; e < space_.n_elements(); ++e) {
    const auto eb = detail::element_basis(space_, e, rule, 0);
    for (int q = 0; q < eb.n_nodes(); ++q) {
      const double f = load(eb.x[q]);
      if (!std::isfinite(f)) throw Error(ErrorCode::IntegrationError, "non-finite load value");
      for (int k = 0; k < eb.n_active; ++k) {
        const int g = space_.retained_index(eb.first_unconstrained + k);
        if (g >= 0) m[g] += eb.w[q] * f * eb(q, 0, k);
      }
    }
  }
  return m;
}

Eigen::VectorXd NewtonSolver::apply(const Eigen::VectorXd& m) const {
  if (!chol_) throw Error(ErrorCode::FactorizationError, "no stiffness factorization");
  return chol_->solve(m);
}

Eigen::MatrixXd NewtonSolver::mkinvm() const {
  const Eigen::MatrixXd md(mass_);
  const Eigen::MatrixXd kinv_m = chol_->solve(md);
  Eigen::MatrixXd out = md * kinv_m;
  return 0.5 * (out + out.transpose());
}

double seminorm_Neh(const Fn2& v, const NewtonSolver& newton, const KnotVector& mesh_t, double T,
                    int n_points, Exec exec) {
  const int nq = n_points > 0 ? n_points : mesh_t.degree() + 3;
  const QuadratureRule rule = gauss_rule(nq);
  const auto& bp = mesh_t.breakpoints();
  const int ne = mesh_t.n_elements();
  std::vector<double> partial(ne, 0.0);
  auto kernel = [&](int e) {
    const MappedRule m = map_rule(rule, bp[e], bp[e + 1]);
    double acc = 0.0;
    for (std::size_t q = 0; q < m.x.size(); ++q) {
      const double s = m.x[q];
      const Eigen::VectorXd mom = newton.moments([&](double x) { return v(x, s); });
      acc += m.w[q] * std::exp(-s / T) * newton.norm_sq_moments(mom);
    }
    partial[e] = acc;
  };
  if (exec == Exec::Serial) {
    for (int e = 0; e < ne; ++e) kernel(e);
  } else {
#pragma omp parallel for schedule(static)
    for (int e = 0; e < ne; ++e) kernel(e);
  }
  double sum = 0.0;
  for (double p : partial) sum += p;
  return std::sqrt(std::max(sum, 0.0));
}

double seminorm_Neh_discrete(const Eigen::MatrixXd& w, const NewtonSolver& newton,
                             const Eigen::MatrixXd& time_gram) {
  const Eigen::MatrixXd a = newton.mkinvm();
  // vec(W)^T (G (x) A) vec(W) = trace(W^T A W G)
  const double q = (w.transpose() * a * w * time_gram).trace();
  return std::sqrt(std::max(q, 0.0));
}

}  // namespace xtwave
