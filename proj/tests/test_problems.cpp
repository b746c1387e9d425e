#include <doctest.h>

#include <cmath>
#include <random>

#include "xtwave/error.hpp"
#include "xtwave/expression.hpp"
#include "xtwave/problems.hpp"

using namespace xtwave;

namespace {

const double pi = M_PI;

// Second central difference, independent of the symbolic derivatives.
double d2(const Fn2& f, double x, double t, bool in_t, double h = 1e-4) {
  if (in_t) return (f(x, t + h) - 2 * f(x, t) + f(x, t - h)) / (h * h);
  return (f(x + h, t) - 2 * f(x, t) + f(x - h, t)) / (h * h);
}

}  // namespace

TEST_CASE("smooth case data") {
  const NamedProblem np = smooth_case();
  const ProblemSpec& p = np.spec;
  CHECK(np.name == "smooth");
  CHECK(p.omega.a == 0.0);
  CHECK(p.omega.b == 1.0);
  CHECK(p.T == 3.0);
  CHECK(p.c0 == 1.0);
  REQUIRE(p.exact);
  CHECK(p.exact->u(0.5, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ux(0, 1);
  for (int i = 0; i < 20; ++i) {
    const double x = ux(rng);
    CHECK(p.exact->u(x, 0) == doctest::Approx(std::sin(pi * x)).epsilon(1e-15));
    CHECK(p.u0(x) == doctest::Approx(std::sin(pi * x)).epsilon(1e-15));
    CHECK(std::abs(p.exact->v(x, 0)) < 1e-15);
    CHECK(p.v0(x) == 0.0);
    CHECK(p.c2(x) == doctest::Approx(x + 1).epsilon(1e-15));
  }
  CHECK(pde_residual(np, 100, 1) < 1e-8);
  CHECK(derivative_fd_error(np, 100, 1e-6, 1) < 1e-6);
  CHECK_NOTHROW(validate(p));
}

TEST_CASE("smooth forcing against finite differences of the exact solution") {
  const ProblemSpec p = smooth_case().spec;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ux(0.05, 0.95), ut(0.05, 2.95);
  for (int i = 0; i < 50; ++i) {
    const double x = ux(rng), t = ut(rng);
    // (c^2 U_x)_x = c^2 U_xx + (c^2)' U_x with (c^2)' = 1
    const double lhs = d2(p.exact->u, x, t, true) - (p.c2(x) * d2(p.exact->u, x, t, false) + p.exact->u_x(x, t));
    CHECK(std::abs(lhs - p.f(x, t)) < 1e-5 * std::max(1.0, std::abs(p.f(x, t))));
  }
}

TEST_CASE("singular case data") {
  const NamedProblem np = singular_case();
  const ProblemSpec& p = np.spec;
  CHECK(np.name == "singular");
  CHECK(p.omega.a == -1.5);
  CHECK(p.omega.b == 1.5);
  CHECK(p.T == 1.0);
  CHECK(p.f(0.3, 0.4) == 0.0);
  CHECK(singular_profile(0.0, 0) == 0.0);
  CHECK(singular_profile(0.0, 1) == doctest::Approx(8 * std::exp(-0.2)).epsilon(1e-15));
  const double w2 = singular_profile(0.1, 2);
  const double fd = (singular_profile(0.1 + 1e-4, 0) - 2 * singular_profile(0.1, 0) + singular_profile(0.1 - 1e-4, 0)) / 1e-8;
  CHECK(w2 == doctest::Approx(fd).epsilon(1e-6));

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ux(-1.5, 1.5), ut(0, 1);
  for (int i = 0; i < 50; ++i) {
    const double x = ux(rng);
    const double want = x + 1 > 0 ? singular_profile(x + 1, 0) : 0.0;
    CHECK(p.exact->u(x, 0) == want);
    CHECK(p.u0(x) == want);
    const double t = ut(rng);
    CHECK(std::abs(p.exact->u(-1.5, t)) <= 1e-17);
    CHECK(std::abs(p.exact->u(1.5, t)) <= 1e-17);
  }
  // On the line x - t + 1 = 0 the smooth side (s > 0) is taken.
  const double t = 0.4, x = t - 1;
  CHECK(p.exact->v(x, t) == doctest::Approx(-singular_profile(0.0, 1)).epsilon(1e-15));
  CHECK(p.exact->v(x - 1e-15, t) == doctest::Approx(p.exact->v(x, t)).epsilon(1e-12));
  CHECK(p.exact->v(x - 1e-3, t) == 0.0);
  CHECK(p.singular_line(t) == doctest::Approx(x).epsilon(1e-15));
  CHECK(derivative_fd_error(np, 200, 1e-6, 3) < 1e-6);
  CHECK_NOTHROW(validate(p));
}

TEST_CASE("manufactured problems") {
  SUBCASE("zero solution") {
    const NamedProblem np = manufactured(Expr(), Expr(1.0), {0, 1}, 2.0);
    for (double x : {0.1, 0.5, 0.9}) {
      CHECK(np.spec.f(x, 0.7) == 0.0);
      CHECK(np.spec.u0(x) == 0.0);
      CHECK(np.spec.v0(x) == 0.0);
    }
  }
  SUBCASE("t^2 x (1 - x)") {
    const NamedProblem np = manufactured(Expr::parse("t^2*x*(1-x)"), Expr(1.0), {0, 1}, 2.0);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ux(0.01, 0.99), ut(0.01, 1.99);
    for (int i = 0; i < 30; ++i) {
      const double x = ux(rng), t = ut(rng);
      CHECK(np.spec.f(x, t) == doctest::Approx(2 * x * (1 - x) + 2 * t * t).epsilon(1e-13));
      const double fd = d2(np.spec.exact->u, x, t, true) - d2(np.spec.exact->u, x, t, false);
      CHECK(np.spec.f(x, t) == doctest::Approx(fd).epsilon(1e-6));
    }
    CHECK(np.spec.u0(0.3) == 0.0);
    CHECK(np.spec.v0(0.3) == 0.0);
    CHECK(pde_residual(np) < 1e-12);
  }
  SUBCASE("linear in x and t") {
    const NamedProblem np = manufactured(Expr::parse("3*x - 2*t + 1"), Expr::parse("1 + x"), {0, 1}, 1.0);
    // (c^2 U_x)_x = (3 (1 + x))_x = 3, so linear U needs F = -3 with this c^2.
    CHECK(np.spec.f(0.4, 0.2) == doctest::Approx(-3.0).epsilon(1e-15));
    const NamedProblem flat = manufactured(Expr::parse("3*x - 2*t + 1"), Expr(2.0), {0, 1}, 1.0);
    CHECK(flat.spec.f(0.4, 0.2) == 0.0);
    CHECK(flat.spec.u0(0.5) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(flat.spec.v0(0.5) == doctest::Approx(-2.0).epsilon(1e-15));
  }
  SUBCASE("c0 defaults to the sampled minimum of c") {
    const NamedProblem np = manufactured(Expr::parse("x*t"), Expr::parse("4 + x"), {0, 1}, 1.0);
    CHECK(np.spec.c0 == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(manufactured(Expr::parse("x*t"), Expr::parse("1 + t"), {0, 1}, 1.0), Error);
    CHECK_THROWS_AS(manufactured(Expr::parse("x/(x - 0.5)*t"), Expr(1.0), {0, 1}, 1.0), Error);
    CHECK_THROWS_AS(manufactured(Expr::parse("x*t"), Expr(-1.0), {0, 1}, 1.0), Error);
  }
}

TEST_CASE("problems by name") {
  CHECK(problem_by_name("smooth").name == "smooth");
  CHECK(problem_by_name("singular").name == "singular");
  CHECK_THROWS_AS(problem_by_name("gaussian"), Error);
}

TEST_CASE("expression data without an exact solution") {
  const NamedProblem np = from_expressions(Expr::parse("1 + x^2"), Expr::parse("sin(pi*x)*t"),
                                           Expr::parse("x*(1-x)"), Expr(0.0), {0, 1}, 2.0);
  CHECK_FALSE(np.spec.exact);
  CHECK(np.spec.f(0.5, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(np.spec.u0_x(0.25) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(np.spec.c0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(from_expressions(Expr::parse("1 + t"), Expr(0.0), Expr(0.0), Expr(0.0), {0, 1}, 1.0), Error);
}

TEST_CASE("expression grammar") {
  auto at = [](const char* s, double x = 0.3, double t = 0.7) { return Expr::parse(s)(x, t); };
  CHECK(at("1 + 2 * 3") == 7.0);
  CHECK(at("2 ^ 3 ^ 2") == 512.0);
  CHECK(at("-2 ^ 2") == -4.0);
  CHECK(at("(1 + 2) * 3") == 9.0);
  CHECK(at("8 / 4 / 2") == 1.0);
  CHECK(at("1 - 2 - 3") == -4.0);
  CHECK(at("+x") == 0.3);
  CHECK(at("x - -t") == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(at("pi") == pi);
  CHECK(at("1.5e1 + .5") == 15.5);
  CHECK(at("sin(pi*x)*cos(t) + exp(-x)") ==
        doctest::Approx(std::sin(pi * 0.3) * std::cos(0.7) + std::exp(-0.3)).epsilon(1e-15));
  CHECK(at("  x*t  ") == doctest::Approx(0.21).epsilon(1e-15));

  for (const char* bad : {"", "1 +", "(x", "x)", "sin x", "foo(x)", "y", "2 ** 3", "1 2", "sin()", "x,t", "1e"}) {
    CAPTURE(bad);
    try {
      Expr::parse(bad);
      FAIL("parsed");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
    }
  }
}

TEST_CASE("symbolic derivatives match finite differences") {
  const char* exprs[] = {"sin(pi*x)*(sin(5*pi*t/4))^2", "exp(-x*t)/(1 + x^2)", "x^3*t - 2*t^2*cos(x)",
                         "(1 + x)^(t + 1)", "-x/(t + 2)"};
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  const double h = 1e-6;
  for (const char* s : exprs) {
    CAPTURE(s);
    const Expr e = Expr::parse(s);
    for (int i = 0; i < 10; ++i) {
      const double x = u(rng), t = u(rng);
      const double fx = (e(x + h, t) - e(x - h, t)) / (2 * h);
      const double ft = (e(x, t + h) - e(x, t - h)) / (2 * h);
      CHECK(e.diff_x()(x, t) == doctest::Approx(fx).epsilon(1e-6));
      CHECK(e.diff_t()(x, t) == doctest::Approx(ft).epsilon(1e-6));
      // Printing and re-parsing preserves the value.
      CHECK(Expr::parse(e.str())(x, t) == doctest::Approx(e(x, t)).epsilon(1e-14));
    }
  }
  CHECK_FALSE(Expr::parse("x^2 + pi").depends_on_t());
  CHECK(Expr::parse("sin(t)").depends_on_t());
}
