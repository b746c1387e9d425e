#include "xtwave/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "xtwave/error.hpp"

namespace xtwave {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

NamedProblem smooth_case() {
  constexpr double w = 5.0 * kPi / 4.0;
  NamedProblem np;
  np.name = "smooth";
  ProblemSpec& p = np.spec;
  p.omega = {0.0, 1.0};
  p.T = 3.0;
  p.c0 = 1.0;
  p.c2 = [](double x) { return x + 1.0; };
  // d/dx ((x+1) pi cos(pi x)) = pi cos(pi x) - (x+1) pi^2 sin(pi x)
  auto div_grad = [](double x) {
    return kPi * std::cos(kPi * x) - (x + 1.0) * kPi * kPi * std::sin(kPi * x);
  };
  p.f = [div_grad](double x, double t) {
    const double s = std::sin(w * t);
    return 2.0 * w * w * std::cos(2.0 * w * t) * std::sin(kPi * x) - (s * s + 1.0) * div_grad(x);
  };
  p.u0 = [](double x) { return std::sin(kPi * x); };
  p.u0_x = [](double x) { return kPi * std::cos(kPi * x); };
  p.v0 = [](double) { return 0.0; };
  p.v0_x = [](double) { return 0.0; };
  p.div_c2_grad_u0 = div_grad;

  ExactSolution ex;
  ex.u = [](double x, double t) {
    const double s = std::sin(w * t);
    return (s * s + 1.0) * std::sin(kPi * x);
  };
  ex.u_x = [](double x, double t) {
    const double s = std::sin(w * t);
    return (s * s + 1.0) * kPi * std::cos(kPi * x);
  };
  ex.u_t = [](double x, double t) { return w * std::sin(2.0 * w * t) * std::sin(kPi * x); };
  ex.v = ex.u_t;
  ex.v_x = [](double x, double t) { return w * std::sin(2.0 * w * t) * kPi * std::cos(kPi * x); };
  ex.v_t = [](double x, double t) { return 2.0 * w * w * std::cos(2.0 * w * t) * std::sin(kPi * x); };
  p.exact = ex;

  const Expr X = Expr::var_x(), T = Expr::var_t();
  const Expr st = sin(Expr(w) * T);
  np.u_expr = (st * st + Expr(1.0)) * sin(Expr(kPi) * X);
  np.c2_expr = X + Expr(1.0);
  return np;
}

double singular_profile(double s, int d) {
  constexpr double a = 0.1;
  const double em = std::exp(-20.0 * (s - a) * (s - a));
  const double ep = std::exp(-20.0 * (s + a) * (s + a));
  switch (d) {
    case 0: return em - ep;
    case 1: return -40.0 * (s - a) * em + 40.0 * (s + a) * ep;
    case 2:
      return (1600.0 * (s - a) * (s - a) - 40.0) * em - (1600.0 * (s + a) * (s + a) - 40.0) * ep;
    default: throw Error(ErrorCode::InvalidArgument, "profile derivative order must be 0, 1 or 2");
  }
}

NamedProblem singular_case() {
  // Indicator of s > 0, with the line itself taken from the smooth positive side.
  auto step = [](double s) { return s >= -1e-14 ? 1.0 : 0.0; };
  auto g = [step](int d, double s) { return step(s) * singular_profile(s, d); };

  NamedProblem np;
  np.name = "singular";
  ProblemSpec& p = np.spec;
  p.omega = {-1.5, 1.5};
  p.T = 1.0;
  p.c0 = 1.0;
  p.c2 = [](double) { return 1.0; };
  p.f = [](double, double) { return 0.0; };
  p.u0 = [g](double x) { return g(0, x + 1.0); };
  p.u0_x = [g](double x) { return g(1, x + 1.0); };
  p.v0 = [g](double x) { return -g(1, x + 1.0); };
  p.v0_x = [g](double x) { return -g(2, x + 1.0); };
  p.singular_line = [](double t) { return t - 1.0; };

  ExactSolution ex;
  ex.u = [g](double x, double t) { return g(0, x - t + 1.0); };
  ex.u_x = [g](double x, double t) { return g(1, x - t + 1.0); };
  ex.u_t = [g](double x, double t) { return -g(1, x - t + 1.0); };
  ex.v = ex.u_t;
  ex.v_x = [g](double x, double t) { return -g(2, x - t + 1.0); };
  ex.v_t = [g](double x, double t) { return g(2, x - t + 1.0); };
  p.exact = ex;
  return np;
}

namespace {

double sampled_c0(const Expr& c2, Interval omega) {
  double lo = c2(omega.a, 0.0);
  for (int i = 1; i <= 1000; ++i) lo = std::min(lo, c2(omega.a + omega.length() * i / 1000.0, 0.0));
  if (!(lo > 0.0)) throw Error(ErrorCode::InvalidArgument, "c^2 must be positive on the domain");
  return std::sqrt(lo);
}

void check_finite(const Expr& e, const char* what, Interval omega, double T) {
  for (int i = 0; i <= 16; ++i)
    for (int j = 0; j <= 16; ++j) {
      const double x = omega.a + omega.length() * i / 16.0, t = T * j / 16.0;
      if (!std::isfinite(e(x, t)))
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " is not finite at x=" +
                                                    std::to_string(x) + ", t=" + std::to_string(t));
    }
}

Fn1 at_zero(const Expr& e) {
  return [e](double x) { return e(x, 0.0); };
}

Fn2 as_fn2(const Expr& e) {
  return [e](double x, double t) { return e(x, t); };
}

}  // namespace

NamedProblem manufactured(const Expr& u, const Expr& c2, Interval omega, double T, double c0) {
  if (c2.depends_on_t()) throw Error(ErrorCode::InvalidArgument, "c^2 must not depend on t");
  const Expr u_x = u.diff_x(), u_t = u.diff_t();
  const Expr flux_x = (c2 * u_x).diff_x();
  const Expr u_tt = u_t.diff_t();
  const Expr f = u_tt - flux_x;
  for (const auto& [e, what] : {std::pair{u, "U"}, {u_x, "dU/dx"}, {u_t, "dU/dt"}, {u_tt, "d2U/dt2"},
                                {flux_x, "div(c^2 grad U)"}, {c2, "c^2"}})
    check_finite(e, what, omega, T);

  NamedProblem np;
  np.name = "manufactured";
  ProblemSpec& p = np.spec;
  p.omega = omega;
  p.T = T;
  p.c0 = c0 > 0.0 ? c0 : sampled_c0(c2, omega);
  p.c2 = at_zero(c2);
  p.f = as_fn2(f);
  p.u0 = at_zero(u);
  p.u0_x = at_zero(u_x);
  p.v0 = at_zero(u_t);
  p.v0_x = at_zero(u_t.diff_x());
  p.div_c2_grad_u0 = at_zero(flux_x);
  ExactSolution ex;
  ex.u = as_fn2(u);
  ex.u_x = as_fn2(u_x);
  ex.u_t = as_fn2(u_t);
  ex.v = ex.u_t;
  ex.v_x = as_fn2(u_t.diff_x());
  ex.v_t = as_fn2(u_tt);
  p.exact = ex;
  np.u_expr = u;
  np.c2_expr = c2;
  return np;
}

NamedProblem from_expressions(const Expr& c2, const Expr& f, const Expr& u0, const Expr& v0,
                              Interval omega, double T, double c0) {
  if (c2.depends_on_t()) throw Error(ErrorCode::InvalidArgument, "c^2 must not depend on t");
  if (u0.depends_on_t() || v0.depends_on_t())
    throw Error(ErrorCode::InvalidArgument, "initial data must not depend on t");
  NamedProblem np;
  np.name = "custom";
  ProblemSpec& p = np.spec;
  p.omega = omega;
  p.T = T;
  p.c0 = c0 > 0.0 ? c0 : sampled_c0(c2, omega);
  p.c2 = at_zero(c2);
  p.f = as_fn2(f);
  p.u0 = at_zero(u0);
  p.u0_x = at_zero(u0.diff_x());
  p.v0 = at_zero(v0);
  p.v0_x = at_zero(v0.diff_x());
  p.div_c2_grad_u0 = at_zero((c2 * u0.diff_x()).diff_x());
  np.c2_expr = c2;
  return np;
}

NamedProblem problem_by_name(const std::string& name) {
  if (name == "smooth") return smooth_case();
  if (name == "singular") return singular_case();
  throw Error(ErrorCode::InvalidArgument, "unknown problem '" + name + "'");
}

double pde_residual(const NamedProblem& np, int n, std::uint64_t seed) {
  if (!np.u_expr || !np.c2_expr)
    throw Error(ErrorCode::MissingExact, "residual check needs symbolic U and c^2");
  const Expr& u = *np.u_expr;
  const Expr lhs = u.diff_t().diff_t() - (*np.c2_expr * u.diff_x()).diff_x();
  const ProblemSpec& p = np.spec;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(p.omega.a, p.omega.b), ut(0.0, p.T);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = ux(rng), t = ut(rng);
    worst = std::max(worst, std::abs(lhs(x, t) - p.f(x, t)));
  }
  return worst;
}

double derivative_fd_error(const NamedProblem& np, int n, double h, std::uint64_t seed) {
  const ProblemSpec& p = np.spec;
  if (!p.exact) throw Error(ErrorCode::MissingExact, "no exact solution");
  const ExactSolution& ex = *p.exact;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(p.omega.a + 2 * h, p.omega.b - 2 * h), ut(2 * h, p.T - 2 * h);
  double worst = 0.0;
  auto cmp = [&](double analytic, double fd) {
    worst = std::max(worst, std::abs(analytic - fd) / std::max(1.0, std::abs(analytic)));
  };
  for (int i = 0; i < n;) {
    const double x = ux(rng), t = ut(rng);
    if (p.singular_line && std::abs(x - p.singular_line(t)) < 1e-3) continue;
    ++i;
    cmp(ex.u_x(x, t), (ex.u(x + h, t) - ex.u(x - h, t)) / (2 * h));
    cmp(ex.u_t(x, t), (ex.u(x, t + h) - ex.u(x, t - h)) / (2 * h));
    cmp(ex.v_x(x, t), (ex.v(x + h, t) - ex.v(x - h, t)) / (2 * h));
    cmp(ex.v_t(x, t), (ex.v(x, t + h) - ex.v(x, t - h)) / (2 * h));
  }
  return worst;
}

}  // namespace xtwave
