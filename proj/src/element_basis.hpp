#pragma once

#include <vector>

#include "xtwave/quadrature.hpp"
#include "xtwave/splines.hpp"

namespace xtwave::detail {

// Basis derivative tables of one element at the mapped nodes of [lo, hi]
// (a sub-interval of the element when a discontinuity splits it).
struct ElementBasis {
  int first_unconstrained = 0;
  int n_active = 0;
  int max_order = 0;
  std::vector<double> x;
  std::vector<double> w;
  std::vector<double> vals;  // [node][order][k]

  int n_nodes() const { return static_cast<int>(x.size()); }
  double operator()(int q, int order, int k) const {
    return vals[(static_cast<std::size_t>(q) * (max_order + 1) + order) * n_active + k];
  }
};

inline ElementBasis element_basis(const SplineSpace& s, int element, const QuadratureRule& rule,
                                  int max_order, double lo, double hi) {
  ElementBasis eb;
  const MappedRule m = map_rule(rule, lo, hi);
  eb.x = m.x;
  eb.w = m.w;
  eb.max_order = max_order;
  eb.n_active = s.degree() + 1;
  eb.vals.assign(static_cast<std::size_t>(eb.n_nodes()) * (max_order + 1) * eb.n_active, 0.0);
  for (int q = 0; q < eb.n_nodes(); ++q) {
    const BasisTable t = s.eval_on_element(element, eb.x[q], max_order);
    eb.first_unconstrained = t.first_unconstrained;
    for (int o = 0; o <= std::min(max_order, s.degree()); ++o)
      for (int k = 0; k < eb.n_active; ++k)
        eb.vals[(static_cast<std::size_t>(q) * (max_order + 1) + o) * eb.n_active + k] = t(o, k);
  }
  return eb;
}

inline ElementBasis element_basis(const SplineSpace& s, int element, const QuadratureRule& rule,
                                  int max_order) {
  const auto& bp = s.knots().breakpoints();
  return element_basis(s, element, rule, max_order, bp[element], bp[element + 1]);
}

}  // namespace xtwave::detail
