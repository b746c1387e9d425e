#include "xtwave/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "element_basis.hpp"
#include "xtwave/error.hpp"
#include "xtwave/forms.hpp"
#include "xtwave/quadrature.hpp"

namespace xtwave {

namespace {

enum Acc : int {
  kErrDtU,
  kErrDtVN,
  kErrGradU,
  kErrV,
  kErrUe,
  kErrU,
  kErrVPlain,
  kExDtU,
  kExDtVN,
  kExGradU,
  kExV,
  kExUe,
  kExU,
  kExVPlain,
  kNumAcc
};

using Sums = std::array<double, kNumAcc>;

// Values of the shifted discrete fields at one node.
struct FieldValues {
  double u, u_x, u_t, v, v_t;
};

FieldValues contract(const DiscreteSolution& sol, const detail::ElementBasis& xb, int qx,
                     const detail::ElementBasis& tb, int qt) {
  const SplineSpace& sx = sol.space_x;
  const SplineSpace& st = sol.space_t;
  FieldValues f{0, 0, 0, 0, 0};
  for (int k = 0; k < tb.n_active; ++k) {
    const int gk = st.retained_index(tb.first_unconstrained + k);
    if (gk < 0) continue;
    const double t0 = tb(qt, 0, k), t1 = tb(qt, 1, k);
    for (int i = 0; i < xb.n_active; ++i) {
      const int gi = sx.retained_index(xb.first_unconstrained + i);
      if (gi < 0) continue;
      const double x0 = xb(qx, 0, i), x1 = xb(qx, 1, i);
      const double uc = sol.u(gi, gk), vc = sol.v(gi, gk);
      f.u += uc * x0 * t0;
      f.u_x += uc * x1 * t0;
      f.u_t += uc * x0 * t1;
      f.v += vc * x0 * t0;
      f.v_t += vc * x0 * t1;
    }
  }
  return f;
}

}  // namespace

ErrorReports error_report(const DiscreteSolution& sol, const ProblemSpec& problem, int n_points,
                          Exec exec) {
  if (!problem.exact) throw Error(ErrorCode::MissingExact, "error report needs an exact solution");
  const ExactSolution& ex = *problem.exact;
  const SplineSpace& sx = sol.space_x;
  const SplineSpace& st = sol.space_t;
  const double T = sol.T;
  if (n_points <= 0) n_points = std::max(sx.degree(), st.degree()) + 3;
  const QuadratureRule rule = gauss_rule(n_points);
  const NewtonSolver newton(sx, problem.c2);
  const int nex = sx.n_elements(), net = st.n_elements(), n_x = sx.dim();
  const auto& bpx = sx.knots().breakpoints();

  std::vector<detail::ElementBasis> xb(nex);
  for (int e = 0; e < nex; ++e) xb[e] = detail::element_basis(sx, e, rule, 1);

  std::vector<Sums> partial(net);
  auto kernel = [&](int et) {
    Sums acc{};
    const auto tb = detail::element_basis(st, et, rule, 1);
    Eigen::VectorXd m_err(n_x), m_ex(n_x);
    for (int qt = 0; qt < tb.n_nodes(); ++qt) {
      const double t = tb.x[qt];
      const double we = tb.w[qt] * std::exp(-t / T);
      const double wp = tb.w[qt];
      m_err.setZero();
      m_ex.setZero();
      const double xs = problem.singular_line ? problem.singular_line(t) : 0.0;

      auto integrate_piece = [&](const detail::ElementBasis& eb) {
        for (int qx = 0; qx < eb.n_nodes(); ++qx) {
          const double x = eb.x[qx], w = eb.w[qx];
          const FieldValues fv = contract(sol, eb, qx, tb, qt);
          const double u0 = sol.shift.u0(x), u0x = sol.shift.u0_x(x), v0 = sol.shift.v0(x);
          const double c2 = problem.c2(x);
          const double U = ex.u(x, t), Ux = ex.u_x(x, t), Ut = ex.u_t(x, t);
          const double V = ex.v(x, t), Vt = ex.v_t(x, t);
          const double e_u = U - (fv.u + u0);
          const double e_ux = Ux - (fv.u_x + u0x);
          const double e_ut = Ut - fv.u_t;
          const double e_v = V - (fv.v + v0);
          const double e_vt = Vt - fv.v_t;
          acc[kErrDtU] += we * w * e_ut * e_ut;
          acc[kErrGradU] += we * w * c2 * e_ux * e_ux;
          acc[kErrV] += we * w * e_v * e_v;
          acc[kErrUe] += we * w * e_u * e_u;
          acc[kErrU] += wp * w * e_u * e_u;
          acc[kErrVPlain] += wp * w * e_v * e_v;
          acc[kExDtU] += we * w * Ut * Ut;
          acc[kExGradU] += we * w * c2 * Ux * Ux;
          acc[kExV] += we * w * V * V;
          acc[kExUe] += we * w * U * U;
          acc[kExU] += wp * w * U * U;
          acc[kExVPlain] += wp * w * V * V;
          for (int a = 0; a < eb.n_active; ++a) {
            const int ga = sx.retained_index(eb.first_unconstrained + a);
            if (ga < 0) continue;
            m_err[ga] += w * e_vt * eb(qx, 0, a);
            m_ex[ga] += w * Vt * eb(qx, 0, a);
          }
        }
      };

      for (int e = 0; e < nex; ++e) {
        const double lo = bpx[e], hi = bpx[e + 1];
        const double margin = 1e-12 * (hi - lo);
        if (problem.singular_line && xs > lo + margin && xs < hi - margin) {
          integrate_piece(detail::element_basis(sx, e, rule, 1, lo, xs));
          integrate_piece(detail::element_basis(sx, e, rule, 1, xs, hi));
        } else {
          integrate_piece(xb[e]);
        }
      }
      acc[kErrDtVN] += we * newton.norm_sq_moments(m_err);
      acc[kExDtVN] += we * newton.norm_sq_moments(m_ex);
    }
    partial[et] = acc;
  };
  if (exec == Exec::Serial) {
    for (int et = 0; et < net; ++et) kernel(et);
  } else {
#pragma omp parallel for schedule(static)
    for (int et = 0; et < net; ++et) kernel(et);
  }
  Sums tot{};
  for (const Sums& s : partial)
    for (int k = 0; k < kNumAcc; ++k) tot[k] += s[k];
  auto rt = [](double v) { return std::sqrt(std::max(v, 0.0)); };

  ErrorReports out;
  ErrorReport& a = out.absolute;
  a.err_dtU_L2e = rt(tot[kErrDtU]);
  a.err_dtV_Neh = rt(tot[kErrDtVN]);
  a.err_cgradU_L2e = rt(tot[kErrGradU]);
  a.err_V_L2e = rt(tot[kErrV]);
  a.err_Veh = rt(tot[kErrDtU] + tot[kErrDtVN] + tot[kErrGradU] + tot[kErrV]);
  a.err_U_L2e = rt(tot[kErrUe]);
  a.err_U_L2 = rt(tot[kErrU]);
  a.err_V_L2 = rt(tot[kErrVPlain]);

  auto safe = [](double num, double den) { return den > 0.0 ? num / den : num; };
  const double veh = rt(tot[kExDtU] + tot[kExDtVN] + tot[kExGradU] + tot[kExV]);
  ErrorReport& r = out.relative;
  r.relative = true;
  r.err_dtU_L2e = safe(a.err_dtU_L2e, veh);
  r.err_dtV_Neh = safe(a.err_dtV_Neh, veh);
  r.err_cgradU_L2e = safe(a.err_cgradU_L2e, veh);
  r.err_V_L2e = safe(a.err_V_L2e, veh);
  r.err_Veh = safe(a.err_Veh, veh);
  r.err_U_L2e = safe(a.err_U_L2e, rt(tot[kExUe]));
  r.err_U_L2 = safe(a.err_U_L2, rt(tot[kExU]));
  r.err_V_L2 = safe(a.err_V_L2, rt(tot[kExVPlain]));
  return out;
}

double eoc(double coarse, double fine, double ratio) {
  return std::log(coarse / fine) / std::log(ratio);
}

double discrete_Veh_norm(const DiscreteSolution& sol, const Fn1& c2) {
  const NewtonSolver newton(sol.space_x, c2);
  const DerivativeView test = test_space_of(sol.space_t);
  const Eigen::MatrixXd s_e = assemble_time_matrix(sol.space_t, sol.space_t, 1, 1, sol.T).dense();
  const Eigen::MatrixXd m_e = assemble_time_matrix(sol.space_t, sol.space_t, 0, 0, sol.T).dense();
  const Eigen::MatrixXd m(newton.mass()), k(newton.stiffness());
  const Eigen::MatrixXd mkm = newton.mkinvm();
  const auto& u = sol.u;
  const auto& v = sol.v;
  const double q = (u.transpose() * m * u * s_e).trace() + (u.transpose() * k * u * m_e).trace() +
                   (v.transpose() * mkm * v * s_e).trace() + (v.transpose() * m * v * m_e).trace();
  return std::sqrt(std::max(q, 0.0));
}

double infsup_lower_bound(const Interval& omega, double c0, double T) {
  const double c = poincare_constant(omega);
  return 1.0 / (2.0 * std::sqrt(c * c / (c0 * c0) + 4.0 * T * T));
}

double stability_bound(const ProblemSpec& p, BoundForm form) {
  if (!p.div_c2_grad_u0 || !p.v0_x)
    throw Error(ErrorCode::InvalidArgument, "stability bound needs div(c^2 grad U0) and V0'");
  const int n_el = 256;
  const KnotVector mesh_x(
      [&] {
        std::vector<double> bp(n_el + 1);
        for (int i = 0; i <= n_el; ++i) bp[i] = p.omega.a + p.omega.length() * i / n_el;
        return bp;
      }(),
      1, 1);
  const int nq = 8;
  const double div_u0 =
      std::sqrt(integrate([&](double x) { const double d = p.div_c2_grad_u0(x); return d * d; }, mesh_x, nq));
  const double grad_v0 = std::sqrt(
      integrate([&](double x) { const double d = p.v0_x(x); return p.c2(x) * d * d; }, mesh_x, nq));
  const KnotVector mesh_t(
      [&] {
        std::vector<double> bp(n_el + 1);
        for (int i = 0; i <= n_el; ++i) bp[i] = p.T * i / n_el;
        return bp;
      }(),
      1, 1);
  const double f_sq = integrate(
      [&](double t) {
        const double inner =
            integrate([&](double x) { const double f = p.f(x, t); return f * f; }, mesh_x, nq);
        return inner * std::exp(-t / p.T);
      },
      mesh_t, nq);
  const double beta = 1.0 / infsup_lower_bound(p.omega, p.c0, p.T);
  const double s = form == BoundForm::Continuous ? std::sqrt(p.T) : 1.0;
  return beta * (std::sqrt(f_sq) + s * div_u0 + s * grad_v0);
}

// ---------------------------------------------------------------------------

Eigen::VectorXd SpaceProjector::moments(const Fn1& grad_w) const {
  const SplineSpace& s = newton_->space();
  const QuadratureRule rule = gauss_rule(s.degree() + 3);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(s.dim());
  for (int e = 0; e < s.n_elements(); ++e) {
    const auto eb = detail::element_basis(s, e, rule, 1);
    for (int q = 0; q < eb.n_nodes(); ++q) {
      const double val = newton_->c2()(eb.x[q]) * grad_w(eb.x[q]);
      if (!std::isfinite(val)) throw Error(ErrorCode::IntegrationError, "non-finite gradient");
      for (int k = 0; k < eb.n_active; ++k) {
        const int g = s.retained_index(eb.first_unconstrained + k);
        if (g >= 0) m[g] += eb.w[q] * val * eb(q, 1, k);
      }
    }
  }
  return m;
}

double SpaceProjector::orthogonality_residual(const Fn1& grad_w, const Eigen::VectorXd& z) const {
  const Eigen::VectorXd m = moments(grad_w);
  const Eigen::VectorXd r = newton_->stiffness() * z - m;
  return r.cwiseAbs().maxCoeff() / std::max(1.0, m.cwiseAbs().maxCoeff());
}

TimeProjector::TimeProjector(SplineSpace space_t, double T, int n_points)
    : space_(std::move(space_t)), T_(T), n_points_(n_points) {
  s_e_ = assemble_time_matrix(space_, space_, 1, 1, T_, n_points).dense();
  m_e_ = assemble_time_matrix(space_, space_, 0, 0, T_, n_points).dense();
  chol_.compute(s_e_);
  if (chol_.info() != Eigen::Success)
    throw Error(ErrorCode::FactorizationError, "Cholesky of the weighted time stiffness failed");
}

Eigen::VectorXd TimeProjector::moments(const Fn1& dt_w) const {
  const int nq = n_points_ > 0 ? n_points_
                              : std::max(space_.degree() + 3,
                                         weighted_points(space_.degree(), max_element_length(space_), T_));
  const QuadratureRule rule = gauss_rule(nq);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(space_.dim());
  for (int e = 0; e < space_.n_elements(); ++e) {
    const auto eb = detail::element_basis(space_, e, rule, 1);
    for (int q = 0; q < eb.n_nodes(); ++q) {
      const double val = dt_w(eb.x[q]) * std::exp(-eb.x[q] / T_);
      if (!std::isfinite(val)) throw Error(ErrorCode::IntegrationError, "non-finite time derivative");
      for (int k = 0; k < eb.n_active; ++k) {
        const int g = space_.retained_index(eb.first_unconstrained + k);
        if (g >= 0) m[g] += eb.w[q] * val * eb(q, 1, k);
      }
    }
  }
  return m;
}

Eigen::VectorXd TimeProjector::project(const Fn1& dt_w) const { return chol_.solve(moments(dt_w)); }

double TimeProjector::orthogonality_residual(const Fn1& dt_w, const Eigen::VectorXd& z) const {
  const Eigen::VectorXd m = moments(dt_w);
  const Eigen::VectorXd r = s_e_ * z - m;
  return r.cwiseAbs().maxCoeff() / std::max(1.0, m.cwiseAbs().maxCoeff());
}

Eigen::MatrixXd project_time_then_space(const SpaceTimeField& w, const SpaceProjector& sp,
                                        const TimeProjector& tp) {
  // Intermediate W1(x,t) = sum_b c_b(x) phi_b(t); its x-derivative has
  // coefficients c'(x) = S_e^{-1} (d_t d_x W(x,.), phi_b')_e.
  const SplineSpace& sx = sp.newton().space();
  const QuadratureRule rule = gauss_rule(sx.degree() + 3);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(sx.dim(), tp.space().dim());
  for (int e = 0; e < sx.n_elements(); ++e) {
    const auto eb = detail::element_basis(sx, e, rule, 1);
    for (int q = 0; q < eb.n_nodes(); ++q) {
      const double x = eb.x[q];
      const Eigen::VectorXd cx = tp.project([&](double t) { return w.dxdt(x, t); });
      const double c2 = sp.newton().c2()(x);
      for (int k = 0; k < eb.n_active; ++k) {
        const int g = sx.retained_index(eb.first_unconstrained + k);
        if (g >= 0) r.row(g) += (eb.w[q] * c2 * eb(q, 1, k)) * cx.transpose();
      }
    }
  }
  Eigen::MatrixXd z(r.rows(), r.cols());
  for (int b = 0; b < r.cols(); ++b) z.col(b) = sp.newton().apply(Eigen::VectorXd(r.col(b)));
  return z;
}

Eigen::MatrixXd project_space_then_time(const SpaceTimeField& w, const SpaceProjector& sp,
                                        const TimeProjector& tp) {
  // Intermediate W2(x,t) = sum_a d_a(t) psi_a(x); d'(t) = K^{-1} (c^2 d_x d_t W(.,t), psi_a').
  const SplineSpace& st = tp.space();
  const QuadratureRule rule =
      gauss_rule(std::max(st.degree() + 3, weighted_points(st.degree(), max_element_length(st), tp.T())));
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(sp.newton().space().dim(), st.dim());
  for (int e = 0; e < st.n_elements(); ++e) {
    const auto eb = detail::element_basis(st, e, rule, 1);
    for (int q = 0; q < eb.n_nodes(); ++q) {
      const double t = eb.x[q];
      const Eigen::VectorXd dt = sp.project([&](double x) { return w.dxdt(x, t); });
      const double we = eb.w[q] * std::exp(-t / tp.T());
      for (int k = 0; k < eb.n_active; ++k) {
        const int g = st.retained_index(eb.first_unconstrained + k);
        if (g >= 0) r.col(g) += (we * eb(q, 1, k)) * dt;
      }
    }
  }
  Eigen::LLT<Eigen::MatrixXd> chol(tp.s_e());
  return chol.solve(r.transpose()).transpose();
}

double commutation_check(const SpaceTimeField& w, const SplineSpace& sx, const SplineSpace& st,
                         const Fn1& c2, double T) {
  const NewtonSolver newton(sx, c2);
  const SpaceProjector sp(newton);
  const TimeProjector tp(st, T);
  const Eigen::MatrixXd d = project_time_then_space(w, sp, tp) - project_space_then_time(w, sp, tp);
  const Eigen::MatrixXd m(newton.mass());
  const double q = (d.transpose() * m * d * tp.mass_e()).trace();
  return std::sqrt(std::max(q, 0.0));
}

ProjectionStability space_projection_stability(const SpaceTimeField& w, const SpaceProjector& sp,
                                               const KnotVector& mesh_t, double T) {
  const SplineSpace& sx = sp.newton().space();
  const QuadratureRule rule = gauss_rule(std::max(sx.degree(), mesh_t.degree()) + 3);
  const auto& bp = mesh_t.breakpoints();
  double proj = 0.0, orig = 0.0;
  for (int e = 0; e < mesh_t.n_elements(); ++e) {
    const MappedRule m = map_rule(rule, bp[e], bp[e + 1]);
    for (std::size_t q = 0; q < m.x.size(); ++q) {
      const double t = m.x[q];
      const double we = m.w[q] * std::exp(-t / T);
      const Fn1 g = [&](double x) { return w.dx(x, t); };
      const Eigen::VectorXd z = sp.project(g);
      proj += we * z.dot(sp.newton().stiffness() * z);
      orig += we * integrate([&](double x) { const double d = g(x); return sp.newton().c2()(x) * d * d; },
                             sx.knots(), sx.degree() + 3);
    }
  }
  return {std::sqrt(proj), std::sqrt(orig)};
}

ProjectionStability time_projection_stability(const SpaceTimeField& w, const TimeProjector& tp,
                                              const KnotVector& mesh_x) {
  const SplineSpace& st = tp.space();
  const QuadratureRule rule = gauss_rule(std::max(st.degree(), mesh_x.degree()) + 3);
  const auto& bp = mesh_x.breakpoints();
  double proj = 0.0, orig = 0.0;
  for (int e = 0; e < mesh_x.n_elements(); ++e) {
    const MappedRule m = map_rule(rule, bp[e], bp[e + 1]);
    for (std::size_t q = 0; q < m.x.size(); ++q) {
      const double x = m.x[q];
      const Fn1 g = [&](double t) { return w.dt(x, t); };
      const Eigen::VectorXd z = tp.project(g);
      proj += m.w[q] * z.dot(tp.s_e() * z);
      orig += m.w[q] * integrate([&](double t) { const double d = g(t); return d * d * std::exp(-t / tp.T()); },
                                 st.knots(), st.degree() + 3);
    }
  }
  return {std::sqrt(proj), std::sqrt(orig)};
}

// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXd dense_kron(const Eigen::MatrixXd& time, const Eigen::MatrixXd& space) {
  Eigen::MatrixXd out(time.rows() * space.rows(), time.cols() * space.cols());
  for (Eigen::Index i = 0; i < time.rows(); ++i)
    for (Eigen::Index j = 0; j < time.cols(); ++j)
      out.block(i * space.rows(), j * space.cols(), space.rows(), space.cols()) = time(i, j) * space;
  return out;
}

}  // namespace

InfSupEstimate estimate_infsup(const ProblemSpec& p, const SplineSpace& sx, const SplineSpace& st,
                               int n_points) {
  const int n_x = sx.dim(), n_t = st.dim(), n = n_x * n_t;
  if (2 * n > kMaxInfSupSize)
    throw Error(ErrorCode::InvalidArgument,
                "inf-sup estimate limited to " + std::to_string(kMaxInfSupSize) + " unknowns");
  const BlockFactors f = assemble_factors(sx, st, p.c2, p.T, n_points);
  const Eigen::MatrixXd b(expand_blocks(f));
  const NewtonSolver newton(sx, p.c2, n_points);
  const Eigen::MatrixXd m(newton.mass()), k(newton.stiffness()), mkm = newton.mkinvm();
  const Eigen::MatrixXd s_e(f.s_e);
  const Eigen::MatrixXd m_e = assemble_time_matrix(st, st, 0, 0, p.T, n_points).dense();

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  x.topLeftCorner(n, n) = dense_kron(s_e, m) + dense_kron(m_e, k);
  x.bottomRightCorner(n, n) = dense_kron(s_e, mkm) + dense_kron(m_e, m);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  y.topLeftCorner(n, n) = dense_kron(s_e, m);
  y.bottomRightCorner(n, n) = dense_kron(s_e, mkm);

  Eigen::LLT<Eigen::MatrixXd> ychol(y);
  if (ychol.info() != Eigen::Success) throw Error(ErrorCode::IndefiniteGram, "test Gram matrix not SPD");
  Eigen::MatrixXd g = b.transpose() * ychol.solve(b);
  g = 0.5 * (g + g.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(g, x, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::IndefiniteGram, "trial Gram matrix not SPD");
  const double lam = es.eigenvalues().minCoeff();
  InfSupEstimate est;
  est.gamma_h = std::sqrt(std::max(lam, 0.0));
  est.lower_bound = infsup_lower_bound(p.omega, p.c0, p.T);
  est.n_x = n_x;
  est.n_t = n_t;
  return est;
}

}  // namespace xtwave
