#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "xtwave/expression.hpp"
#include "xtwave/system.hpp"

namespace xtwave {

struct NamedProblem {
  std::string name;
  ProblemSpec spec;
  // Symbolic U and c^2 when known; the residual check differentiates them.
  std::optional<Expr> u_expr;
  std::optional<Expr> c2_expr;
};

/// U = (sin^2(5 pi t / 4) + 1) sin(pi x) on (0,1) x (0,3), c^2 = x + 1.
NamedProblem smooth_case();

/// Traveling wave U = w(x - t + 1) H(x - t + 1) on (-1.5,1.5) x (0,1), c = 1,
/// w(s) = exp(-20 (s - 0.1)^2) - exp(-20 (s + 0.1)^2).
NamedProblem singular_case();

/// The profile w and its first two derivatives.
double singular_profile(double s, int derivative);

/// F = U_tt - (c^2 U_x)_x and the initial traces of U. `c0` <= 0 samples
/// sqrt(min c^2) on a uniform grid. Throws InvalidArgument when c^2 depends
/// on t or a derivative evaluates to a non-finite value.
NamedProblem manufactured(const Expr& u, const Expr& c2, Interval omega, double T, double c0 = 0.0);

/// Data given by expressions, no exact solution.
NamedProblem from_expressions(const Expr& c2, const Expr& f, const Expr& u0, const Expr& v0,
                              Interval omega, double T, double c0 = 0.0);

/// `smooth` or `singular`; InvalidArgument otherwise.
NamedProblem problem_by_name(const std::string& name);

/// max |U_tt - (c^2 U_x)_x - F| over `n` random interior points, using the
/// symbolic expressions. Requires u_expr and c2_expr.
double pde_residual(const NamedProblem& problem, int n = 100, std::uint64_t seed = 1);

/// Largest relative mismatch between the analytic first derivatives of the
/// exact solution and central differences (step `h`) at `n` random points,
/// skipping points within 1e-3 of the singular line.
double derivative_fd_error(const NamedProblem& problem, int n = 100, double h = 1e-6,
                           std::uint64_t seed = 1);

}  // namespace xtwave
