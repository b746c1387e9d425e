#include <doctest.h>

#include <Eigen/Cholesky>
#include <random>

#include "oracles.hpp"
#include "xtwave/error.hpp"
#include "xtwave/forms.hpp"

using namespace xtwave;

namespace {

Eigen::VectorXd random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

const auto one = [](double) { return 1.0; };

}  // namespace

TEST_CASE("single degree-0 element gives the weight integral") {
  for (double T : {1.0, 3.0}) {
    const SplineSpace s = make_uniform_space({0, T}, 1, 0, 0, Constraint::None);
    const Eigen::MatrixXd m = assemble_time_matrix(s, s, 0, 0, T).dense();
    REQUIRE(m.rows() == 1);
    const double oracle = oracle::integral([T](double t) { return std::exp(-t / T); }, 0, T);
    CHECK(std::abs(m(0, 0) - T * (1 - std::exp(-1.0))) < 1e-14);
    CHECK(std::abs(m(0, 0) - oracle) < 1e-12);
  }
}

TEST_CASE("equal derivative orders give symmetric matrices") {
  for (int p = 1; p <= 4; ++p) {
    const SplineSpace s = make_uniform_space({0, 3}, 6, p, p - 1, Constraint::ZeroLeft);
    for (int d = 0; d <= 1; ++d) {
      const Eigen::MatrixXd m = assemble_time_matrix(s, s, d, d, 3.0).dense();
      CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-13 * std::max(1.0, m.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("weighted identity for w = t") {
  const double T = 1.0;
  const SplineSpace s = make_uniform_space({0, T}, 4, 1, 0, Constraint::ZeroLeft);
  Eigen::VectorXd v(s.dim());
  for (int i = 0; i < s.dim(); ++i) v[i] = (i + 1) * 0.25;  // nodal values of t
  const Eigen::MatrixXd a = assemble_time_matrix(s, s, 0, 1, T).dense();
  const Eigen::MatrixXd m = assemble_time_matrix(s, s, 0, 0, T).dense();
  const double lhs = v.dot(a * v);
  const double wT = v[s.dim() - 1];
  const double rhs = v.dot(m * v) / (2 * T) + std::exp(-1.0) / 2 * wT * wT;
  const double closed = 1 - 2 * std::exp(-1.0);
  CHECK(std::abs(lhs - closed) < 1e-14);
  CHECK(std::abs(rhs - closed) < 1e-14);
  CHECK(std::abs(oracle::integral([](double t) { return t * std::exp(-t); }, 0, 1) - closed) < 1e-14);
}

TEST_CASE("weighted identity on random zero-left splines") {
  std::mt19937_64 rng(2024);
  for (double T : {1.0, 3.0})
    for (int p = 1; p <= 5; ++p)
      for (int n : {1, 4, 9}) {
        const SplineSpace s = make_uniform_space({0, T}, n, p, p - 1, Constraint::ZeroLeft);
        const Eigen::MatrixXd a = assemble_time_matrix(s, s, 0, 1, T).dense();
        const Eigen::MatrixXd m = assemble_time_matrix(s, s, 0, 0, T).dense();
        for (int k = 0; k < 20; ++k) {
          const Eigen::VectorXd v = random_vector(s.dim(), rng);
          const BasisEval end = s.eval(T, 0);
          double wT = 0.0;
          for (std::size_t j = 0; j < end.values.size(); ++j) wT += end.values[j] * v[end.first_active + j];
          const double res = v.dot(a * v) - v.dot(m * v) / (2 * T) - std::exp(-1.0) / 2 * wT * wT;
          CHECK(std::abs(res) < 1e-11 * std::max(1.0, v.squaredNorm()));
        }
      }
}

TEST_CASE("linear stiffness is tridiagonal with 2/h and -1/h") {
  const int n = 8;
  const double h = 1.0 / n;
  const SplineSpace s = make_uniform_space({0, 1}, n, 1, 0, Constraint::ZeroBoth);
  const Eigen::MatrixXd k = assemble_space_matrix(s, s, 1, 1, one).dense();
  REQUIRE(k.rows() == n - 1);
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n - 1; ++j) {
      const double expect = i == j ? 2 / h : (std::abs(i - j) == 1 ? -1 / h : 0.0);
      CHECK(std::abs(k(i, j) - expect) < 1e-12);
    }
}

TEST_CASE("mass matrix entries sum to the domain length") {
  for (int p = 1; p <= 5; ++p) {
    const SplineSpace s = make_uniform_space({-1.5, 1.5}, 7, p, 0, Constraint::None);
    const Eigen::MatrixXd m = assemble_space_matrix(s, s, 0, 0, one).dense();
    CHECK(m.sum() == doctest::Approx(3.0).epsilon(1e-13));
  }
}

TEST_CASE("variable coefficient stiffness is bracketed") {
  const SplineSpace s = make_uniform_space({0, 1}, 6, 2, 1, Constraint::ZeroBoth);
  const Eigen::MatrixXd k1 = assemble_space_matrix(s, s, 1, 1, one).dense();
  const Eigen::MatrixXd k2 = 2.0 * k1;
  const Eigen::MatrixXd kc = assemble_space_matrix(s, s, 1, 1, [](double x) { return x + 1; }).dense();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd v = random_vector(s.dim(), rng);
    CHECK(v.dot(k1 * v) <= v.dot(kc * v) * (1 + 1e-14));
    CHECK(v.dot(kc * v) <= v.dot(k2 * v) * (1 + 1e-14));
  }
  // diagonal entries of a positive integrand are monotone too
  for (int i = 0; i < s.dim(); ++i) {
    CHECK(k1(i, i) <= kc(i, i));
    CHECK(kc(i, i) <= k2(i, i));
  }
}

TEST_CASE("weighted mass is sandwiched by the unweighted one") {
  std::mt19937_64 rng(9);
  for (double T : {1.0, 3.0}) {
    const SplineSpace s = make_uniform_space({0, T}, 5, 3, 2, Constraint::ZeroLeft);
    const Eigen::MatrixXd me = assemble_time_matrix(s, s, 0, 0, T).dense();
    const Eigen::MatrixXd m = assemble_unweighted_time_matrix(s, s, 0, 0).dense();
    for (int i = 0; i < 20; ++i) {
      const Eigen::VectorXd v = random_vector(s.dim(), rng);
      CHECK(std::exp(-1.0) * v.dot(m * v) <= v.dot(me * v) * (1 + 1e-14));
      CHECK(v.dot(me * v) <= v.dot(m * v) * (1 + 1e-14));
    }
  }
}

TEST_CASE("constrained mass and stiffness are SPD") {
  for (int p = 1; p <= 5; ++p)
    for (int r : {0, p - 1})
      for (int n : {1, 2, 8, 33}) {
        if (p == 1 && n == 1) continue;
        const SplineSpace s = make_uniform_space({0, 1}, n, p, r, Constraint::ZeroBoth);
        const Eigen::MatrixXd m = assemble_space_matrix(s, s, 0, 0, one).dense();
        const Eigen::MatrixXd k = assemble_space_matrix(s, s, 1, 1, [](double x) { return 1 + x; }).dense();
        CHECK(Eigen::LLT<Eigen::MatrixXd>(m).info() == Eigen::Success);
        CHECK(Eigen::LLT<Eigen::MatrixXd>(k).info() == Eigen::Success);
      }
}

TEST_CASE("default quadrature agrees with the adaptive oracle") {
  for (double T : {1.0, 3.0})
    for (int p = 1; p <= 5; ++p) {
      const SplineSpace s = make_uniform_space({0, T}, 3, p, p - 1, Constraint::None);
      const auto& U = s.knots().knots();
      for (int d = 0; d <= 1; ++d) {
        const Eigen::MatrixXd m = assemble_time_matrix(s, s, d, d, T).dense();
        double worst = 0.0;
        for (int i = 0; i < s.dim(); ++i)
          for (int j = 0; j < s.dim(); ++j) {
            const double ref = oracle::integral(
                [&](double t) {
                  return oracle::bspline_deriv(U, i, p, d, t) * oracle::bspline_deriv(U, j, p, d, t) *
                         std::exp(-t / T);
                },
                0, T, {T / 3, 2 * T / 3});
            worst = std::max(worst, std::abs(m(i, j) - ref) / std::max(1e-3, std::abs(ref)));
          }
        CHECK(worst < 1e-11);
      }
    }
}

TEST_CASE("doubling the quadrature changes nothing") {
  for (int p = 1; p <= 5; ++p) {
    const SplineSpace s = make_uniform_space({0, 3}, 6, p, p - 1, Constraint::ZeroLeft);
    const int n0 = weighted_points(p, max_element_length(s), 3.0);
    for (int d : {0, 1}) {
      const Eigen::MatrixXd a = assemble_time_matrix(s, test_space_of(s), d, 0, 3.0, n0).dense();
      const Eigen::MatrixXd b = assemble_time_matrix(s, test_space_of(s), d, 0, 3.0, 2 * n0).dense();
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("serial and parallel assembly agree") {
  const SplineSpace s = make_uniform_space({0, 1}, 40, 3, 2, Constraint::ZeroBoth);
  auto c = [](double x) { return 1 + x * x; };
  const Eigen::MatrixXd a = assemble_space_matrix(s, s, 1, 1, c, 0, Exec::Serial).dense();
  const Eigen::MatrixXd b = assemble_space_matrix(s, s, 1, 1, c, 0, Exec::Parallel).dense();
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("assembly errors") {
  const SplineSpace a = make_uniform_space({0, 1}, 2, 2, 1, Constraint::None);
  const SplineSpace b = make_uniform_space({0, 2}, 2, 2, 1, Constraint::None);
  try {
    assemble_space_matrix(a, b, 0, 0, one);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainMismatch);
  }
  try {
    assemble_time_matrix(b, b, 0, 0, 1.0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainMismatch);
  }
  try {
    assemble_space_matrix(a, a, 1, 1, [](double x) { return x > 0.5 ? INFINITY : 1.0; });
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AssemblyError);
  }
}

TEST_CASE("mixed meshes integrate on the merged breakpoints") {
  const SplineSpace a = make_uniform_space({0, 1}, 2, 2, 1, Constraint::None);
  const SplineSpace b = make_uniform_space({0, 1}, 3, 1, 0, Constraint::None);
  const Eigen::MatrixXd m = assemble_space_matrix(a, b, 0, 0, one).dense();
  const auto& Ua = a.knots().knots();
  const auto& Ub = b.knots().knots();
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      const double ref = oracle::integral(
          [&](double x) { return oracle::bspline(Ub, i, 1, x) * oracle::bspline(Ua, j, 2, x); }, 0, 1,
          {1.0 / 3, 0.5, 2.0 / 3});
      CHECK(std::abs(m(i, j) - ref) < 1e-13);
    }
}
