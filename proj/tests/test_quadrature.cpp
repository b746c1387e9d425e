#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "xtwave/error.hpp"
#include "xtwave/quadrature.hpp"

using namespace xtwave;

TEST_CASE("low order rules") {
  const QuadratureRule r1 = gauss_rule(1);
  REQUIRE(r1.size() == 1);
  CHECK(r1.nodes[0] == doctest::Approx(0.5));
  CHECK(r1.weights[0] == doctest::Approx(1.0));
  const QuadratureRule r2 = gauss_rule(2);
  CHECK(r2.nodes[0] == doctest::Approx(0.5 - 1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-15));
  CHECK(r2.nodes[1] == doctest::Approx(0.5 + 1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-15));
  double cubic = 0.0;
  for (int i = 0; i < 2; ++i) cubic += r2.weights[i] * std::pow(r2.nodes[i], 3);
  CHECK(std::abs(cubic - 0.25) < 1e-16);
}

TEST_CASE("weights sum to one and polynomial exactness") {
  for (int n = 1; n <= kMaxGaussPoints; ++n) {
    const QuadratureRule r = gauss_rule(n);
    double sum = 0.0;
    for (double w : r.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(std::abs(sum - 1.0) < 1e-14);
    for (int d : {2 * n - 1, std::min(2 * n - 2, 12)}) {
      if (d < 0) continue;
      double q = 0.0;
      for (int i = 0; i < n; ++i) q += r.weights[i] * std::pow(r.nodes[i], d);
      CHECK(std::abs(q - 1.0 / (d + 1)) < 1e-14);
    }
  }
}

TEST_CASE("unsupported rule sizes") {
  for (int n : {0, -1, kMaxGaussPoints + 1}) {
    try {
      gauss_rule(n);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnsupportedRule);
    }
  }
}

TEST_CASE("composite integrals against closed forms and the adaptive oracle") {
  const KnotVector unit(oracle::uniform(0, 1, 3), 1, 1);
  CHECK(integrate([](double) { return 1.0; }, unit, 1) == doctest::Approx(1.0).epsilon(1e-15));

  const double T3 = 3.0;
  const KnotVector m3(oracle::uniform(0, T3, 8), 1, 1);
  auto w3 = [&](double t) { return std::exp(-t / T3); };
  const double closed3 = T3 * (1.0 - std::exp(-1.0));
  CHECK(std::abs(closed3 - 1.8963616765) < 1e-10);
  CHECK(std::abs(integrate(w3, m3, 10) - closed3) < 1e-13);
  CHECK(std::abs(oracle::integral(w3, 0, T3) - closed3) < 1e-12);

  const KnotVector m1(oracle::uniform(0, 1, 8), 1, 1);
  auto w1 = [](double t) { return t * std::exp(-t); };
  const double closed1 = 1.0 - 2.0 * std::exp(-1.0);
  CHECK(std::abs(closed1 - 0.2642411177) < 1e-10);
  CHECK(std::abs(integrate(w1, m1, 10) - closed1) < 1e-13);
  CHECK(std::abs(oracle::integral(w1, 0, 1) - closed1) < 1e-12);
}

TEST_CASE("non-finite integrand names the node") {
  const KnotVector m(oracle::uniform(0, 1, 2), 1, 1);
  try {
    integrate([](double x) { return x > 0.6 ? std::nan("") : 1.0; }, m, 3);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IntegrationError);
    CHECK(std::string(e.what()).find("x =") != std::string::npos);
  }
}

TEST_CASE("mapped rules and breakpoint merging") {
  const MappedRule m = map_rule(gauss_rule(3), 2.0, 5.0);
  double s = 0.0;
  for (double w : m.w) s += w;
  CHECK(s == doctest::Approx(3.0));
  const auto merged = merge_breakpoints({0.0, 0.5, 1.0}, {0.0, 0.25, 0.5, 1.0});
  CHECK(merged == std::vector<double>{0.0, 0.25, 0.5, 1.0});
}
