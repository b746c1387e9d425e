#pragma once

#include <functional>
#include <vector>

#include "xtwave/splines.hpp"

namespace xtwave {

/// Gauss-Legendre rule on the reference element (0,1); weights sum to 1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

constexpr int kMaxGaussPoints = 64;

QuadratureRule gauss_rule(int n_points);

/// Physical nodes/weights of `rule` mapped onto [lo, hi].
struct MappedRule {
  std::vector<double> x;
  std::vector<double> w;
};
MappedRule map_rule(const QuadratureRule& rule, double lo, double hi);

/// Composite Gauss integral over the mesh, element by element.
double integrate(const std::function<double(double)>& f, const KnotVector& mesh, int n_points);

/// Sorted union of two breakpoint sets on the same interval.
std::vector<double> merge_breakpoints(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace xtwave
