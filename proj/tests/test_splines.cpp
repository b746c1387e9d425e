#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "xtwave/error.hpp"
#include "xtwave/splines.hpp"

using namespace xtwave;

namespace {

// Unconstrained values of all basis functions at x, by the recursive oracle.
std::vector<double> oracle_values(const SplineSpace& s, double x, int order) {
  const auto& U = s.knots().knots();
  std::vector<double> v(s.knots().n_basis());
  for (int i = 0; i < s.knots().n_basis(); ++i) v[i] = oracle::bspline_deriv(U, i, s.degree(), order, x);
  return v;
}

}  // namespace

TEST_CASE("dimension formula for uniform spaces") {
  CHECK(make_uniform_space({0, 1}, 4, 2, 1, Constraint::None).dim() == 6);
  CHECK(make_uniform_space({0, 1}, 4, 3, 1, Constraint::None).dim() == 10);
  CHECK(make_uniform_space({0, 3}, 8, 1, 0, Constraint::ZeroLeft).dim() == 8);
  for (int p = 1; p <= 5; ++p)
    for (int r = 0; r < p; ++r)
      for (int n : {1, 3, 7}) {
        if (p == 1 && n == 1) {
          CHECK_THROWS_AS(make_uniform_space({0, 1}, 1, 1, 0, Constraint::ZeroBoth), Error);
          continue;
        }
        const int full = (p + 1) + (n - 1) * (p - r);
        CHECK(make_uniform_space({0, 1}, n, p, r, Constraint::None).dim() == full);
        CHECK(make_uniform_space({0, 1}, n, p, r, Constraint::ZeroLeft).dim() == full - 1);
        CHECK(make_uniform_space({0, 1}, n, p, r, Constraint::ZeroBoth).dim() == full - 2);
      }
}

TEST_CASE("regularity must stay below the degree") {
  CHECK_THROWS_AS(make_uniform_space({0, 1}, 4, 2, 2, Constraint::None), Error);
  try {
    make_uniform_space({0, 1}, 4, 3, 5, Constraint::None);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidRegularity);
  }
  CHECK_THROWS_AS(make_uniform_space({0, 1}, 4, 2, -1, Constraint::None), Error);
}

TEST_CASE("invalid knot data") {
  CHECK_THROWS_AS(KnotVector({0.0, 0.5, 0.5, 1.0}, 2, 1), Error);
  CHECK_THROWS_AS(KnotVector({0.0}, 2, 1), Error);
  CHECK_THROWS_AS(KnotVector({0.0, 1.0}, 2, 3), Error);
}

TEST_CASE("basis values match the recursive oracle") {
  std::mt19937_64 rng(7);
  for (int p = 1; p <= 5; ++p)
    for (int r : {0, p - 1}) {
      const SplineSpace s = make_uniform_space({-0.5, 2.0}, 5, p, r, Constraint::None);
      std::uniform_real_distribution<double> u(-0.5, 2.0);
      for (int trial = 0; trial < 20; ++trial) {
        const double x = u(rng);
        for (int d = 0; d <= p; ++d) {
          const auto ref = oracle_values(s, x, d);
          const BasisEval b = s.eval(x, d);
          CHECK(b.values.size() <= static_cast<std::size_t>(p + 1));
          for (std::size_t k = 0; k < b.values.size(); ++k)
            CHECK(b.values[k] == doctest::Approx(ref[b.first_active + k]).epsilon(1e-11).scale(1.0));
          // functions outside the reported window vanish
          double outside = 0.0;
          for (int i = 0; i < static_cast<int>(ref.size()); ++i)
            if (i < b.first_active || i >= b.first_active + static_cast<int>(b.values.size()))
              outside = std::max(outside, std::abs(ref[i]));
          CHECK(outside < 1e-12);
        }
      }
    }
}

TEST_CASE("partition of unity at random points of every element") {
  std::mt19937_64 rng(11);
  for (int p = 1; p <= 5; ++p) {
    const SplineSpace s = make_uniform_space({0, 1}, 6, p, std::max(0, p - 2), Constraint::None);
    const auto& bp = s.knots().breakpoints();
    for (int e = 0; e < s.n_elements(); ++e) {
      std::uniform_real_distribution<double> u(bp[e], bp[e + 1]);
      for (int i = 0; i < 10; ++i) {
        double sum = 0.0;
        for (double v : s.eval(u(rng), 0).values) sum += v;
        CHECK(std::abs(sum - 1.0) < 1e-13);
      }
    }
  }
}

TEST_CASE("hat function derivatives") {
  const SplineSpace s = make_uniform_space({0, 1}, 4, 1, 0, Constraint::None);
  const BasisEval b = s.eval(0.3, 1);
  REQUIRE(b.values.size() == 2);
  CHECK(b.values[0] == doctest::Approx(-4.0));
  CHECK(b.values[1] == doctest::Approx(4.0));
}

TEST_CASE("constraints remove the boundary functions") {
  const SplineSpace left = make_uniform_space({0, 3}, 5, 3, 2, Constraint::ZeroLeft);
  for (double v : left.eval(0.0, 0).values) CHECK(v == 0.0);
  const SplineSpace both = make_uniform_space({0, 1}, 5, 2, 1, Constraint::ZeroBoth);
  for (double v : both.eval(0.0, 0).values) CHECK(v == 0.0);
  for (double v : both.eval(1.0, 0).values) CHECK(v == 0.0);
  // retained functions keep their oracle values, shifted by one index
  const auto ref = oracle_values(both, 0.37, 1);
  const BasisEval b = both.eval(0.37, 1);
  for (std::size_t k = 0; k < b.values.size(); ++k)
    CHECK(b.values[k] == doctest::Approx(ref[b.first_active + k + 1]));
}

TEST_CASE("evaluation outside the interval") {
  const SplineSpace s = make_uniform_space({0, 1}, 3, 2, 1, Constraint::None);
  try {
    s.eval(1.0 + 1e-9, 0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfDomain);
  }
  CHECK_NOTHROW(s.eval(1.0, 0));
  CHECK_NOTHROW(s.eval(0.0, 2));
}

TEST_CASE("first derivative matches central differences away from breakpoints") {
  std::mt19937_64 rng(3);
  const double h = 1e-6;
  for (int p = 2; p <= 5; ++p) {
    const SplineSpace s = make_uniform_space({0, 1}, 4, p, 1, Constraint::ZeroBoth);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 20; ++i) {
      double x = u(rng);
      const double frac = x * 4 - std::floor(x * 4);
      if (frac < 1e-3 || frac > 1 - 1e-3) continue;
      const BasisEval d = s.eval(x, 1), fp = s.eval(x + h, 0), fm = s.eval(x - h, 0);
      REQUIRE(fp.first_active == d.first_active);
      REQUIRE(fm.first_active == d.first_active);
      for (std::size_t k = 0; k < d.values.size(); ++k) {
        const double fd = (fp.values[k] - fm.values[k]) / (2 * h);
        CHECK(std::abs(fd - d.values[k]) <= 1e-6 * std::max(1.0, std::abs(d.values[k])));
      }
    }
  }
}

TEST_CASE("one-sided derivatives agree across breakpoints up to the regularity") {
  for (int p = 2; p <= 5; ++p)
    for (int r = 1; r < p; ++r) {
      const SplineSpace s = make_uniform_space({0, 1}, 4, p, r, Constraint::None);
      const auto& bp = s.knots().breakpoints();
      for (int e = 1; e < s.n_elements(); ++e) {
        const BasisTable left = s.eval_on_element(e - 1, bp[e], r);
        const BasisTable right = s.eval_on_element(e, bp[e], r);
        for (int d = 0; d <= r; ++d)
          for (int g = 0; g < s.knots().n_basis(); ++g) {
            auto pick = [&](const BasisTable& t) {
              const int k = g - t.first_unconstrained;
              return (k >= 0 && k < t.n_active) ? t(d, k) : 0.0;
            };
            const double a = pick(left), b = pick(right);
            CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)) * std::pow(4.0, d));
          }
      }
    }
}

TEST_CASE("derivative test view") {
  const SplineSpace t = make_uniform_space({0, 3}, 8, 1, 0, Constraint::ZeroLeft);
  const DerivativeView v = test_space_of(t);
  CHECK(v.dim() == 8);
  // degree-1 trial: test functions are constant on each element
  const BasisEval a = v.eval(0.1, 0), b = v.eval(0.3, 0);
  CHECK(a.values == b.values);
  for (int p = 1; p <= 4; ++p) {
    const SplineSpace s = make_uniform_space({0, 2}, 5, p, p - 1, Constraint::ZeroLeft);
    const DerivativeView view = test_space_of(s);
    CHECK(view.dim() == s.dim());
    const BasisEval x = view.eval(0.77, 0), y = s.eval(0.77, 1);
    CHECK(x.first_active == y.first_active);
    CHECK(x.values == y.values);
  }
  try {
    test_space_of(make_uniform_space({0, 1}, 2, 2, 1, Constraint::None));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidTestSpace);
  }
}

TEST_CASE("non-uniform breakpoints") {
  const KnotVector kv({0.0, 0.1, 0.15, 0.6, 1.0}, 3, 2);
  const SplineSpace s(kv, Constraint::None);
  CHECK(s.dim() == 4 + 3 * 2);
  const auto ref = oracle_values(s, 0.12, 2);
  const BasisEval b = s.eval(0.12, 2);
  for (std::size_t k = 0; k < b.values.size(); ++k)
    CHECK(b.values[k] == doctest::Approx(ref[b.first_active + k]).epsilon(1e-11));
  CHECK(kv.find_element(0.1) == 1);
  CHECK(kv.find_element(1.0) == 3);
}

TEST_CASE("constraint names round trip") {
  for (Constraint c : {Constraint::None, Constraint::ZeroLeft, Constraint::ZeroBoth})
    CHECK(constraint_from_string(to_string(c)) == c);
  CHECK_THROWS_AS(constraint_from_string("clamped"), Error);
}
