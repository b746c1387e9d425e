#include "xtwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "xtwave/error.hpp"

namespace xtwave {

QuadratureRule gauss_rule(int n) {
  if (n < 1 || n > kMaxGaussPoints)
    throw Error(ErrorCode::UnsupportedRule, "Gauss rule with " + std::to_string(n) + " points");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Roots of P_n on [-1,1] by Newton from the Chebyshev-like initial guess;
  // symmetric pairs are filled together.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // map [-1,1] -> (0,1); weights halve
    rule.nodes[i] = 0.5 * (1.0 - z);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + z);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.5;
  return rule;
}

MappedRule map_rule(const QuadratureRule& rule, double lo, double hi) {
  MappedRule m;
  const double h = hi - lo;
  m.x.resize(rule.nodes.size());
  m.w.resize(rule.nodes.size());
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    m.x[q] = lo + h * rule.nodes[q];
    m.w[q] = h * rule.weights[q];
  }
  return m;
}

double integrate(const std::function<double(double)>& f, const KnotVector& mesh, int n_points) {
  const QuadratureRule rule = gauss_rule(n_points);
  const auto& bp = mesh.breakpoints();
  double sum = 0.0;
  for (std::size_t e = 0; e + 1 < bp.size(); ++e) {
    const MappedRule m = map_rule(rule, bp[e], bp[e + 1]);
    for (std::size_t q = 0; q < m.x.size(); ++q) {
      const double v = f(m.x[q]);
      if (!std::isfinite(v))
        throw Error(ErrorCode::IntegrationError,
                    "non-finite integrand at node x = " + std::to_string(m.x[q]));
      sum += m.w[q] * v;
    }
  }
  return sum;
}

std::vector<double> merge_breakpoints(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  const double scale = std::max(std::abs(out.front()), std::abs(out.back())) + 1.0;
  auto last = std::unique(out.begin(), out.end(),
                          [&](double x, double y) { return std::abs(x - y) <= 1e-14 * scale; });
  out.erase(last, out.end());
  return out;
}

}  // namespace xtwave
