#include "xtwave/splines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xtwave/error.hpp"

namespace xtwave {

KnotVector::KnotVector(std::vector<double> breakpoints, int degree, int interior_multiplicity)
    : breakpoints_(std::move(breakpoints)), degree_(degree), multiplicity_(interior_multiplicity) {
  if (breakpoints_.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "knot vector needs at least two breakpoints");
  if (degree_ < 0) throw Error(ErrorCode::InvalidArgument, "negative spline degree");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i)
    if (!(breakpoints_[i] > breakpoints_[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "breakpoints must be strictly increasing");
  // Degree 0 has no continuity to give up; its only valid multiplicity is 1.
  const int max_mult = std::max(degree_, 1);
  if (multiplicity_ < 1 || multiplicity_ > max_mult)
    throw Error(ErrorCode::InvalidRegularity,
                "interior multiplicity " + std::to_string(multiplicity_) + " outside [1, " +
                    std::to_string(max_mult) + "]");

  knots_.assign(degree_ + 1, breakpoints_.front());
  for (std::size_t i = 1; i + 1 < breakpoints_.size(); ++i)
    knots_.insert(knots_.end(), multiplicity_, breakpoints_[i]);
  knots_.insert(knots_.end(), degree_ + 1, breakpoints_.back());
}

int KnotVector::find_element(double x) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  int e = static_cast<int>(it - breakpoints_.begin()) - 1;
  return std::clamp(e, 0, n_elements() - 1);
}

const char* to_string(Constraint c) {
  switch (c) {
    case Constraint::None: return "none";
    case Constraint::ZeroLeft: return "zero-left";
    case Constraint::ZeroBoth: return "zero-both";
  }
  return "none";
}

Constraint constraint_from_string(const std::string& s) {
  if (s == "none") return Constraint::None;
  if (s == "zero-left") return Constraint::ZeroLeft;
  if (s == "zero-both") return Constraint::ZeroBoth;
  throw Error(ErrorCode::ParseError, "unknown constraint '" + s + "'");
}

SplineSpace::SplineSpace(KnotVector knots, Constraint constraint)
    : knots_(std::move(knots)), constraint_(constraint) {
  offset_ = constraint_ == Constraint::None ? 0 : 1;
  const int removed = constraint_ == Constraint::None ? 0 : (constraint_ == Constraint::ZeroLeft ? 1 : 2);
  dim_ = knots_.n_basis() - removed;
  if (dim_ < 1) throw Error(ErrorCode::InvalidSpace, "constrained space has no basis functions");
  if (constraint_ != Constraint::None && knots_.degree() == 0)
    throw Error(ErrorCode::InvalidSpace, "degree-0 splines cannot carry boundary constraints");
}

BasisTable SplineSpace::eval_on_element(int element, double x, int max_order) const {
  // Derivatives of the nonzero B-splines by the Cox-de Boor triangle.
  const int p = knots_.degree();
  const auto& U = knots_.knots();
  const int span = knots_.span_of_element(element);

  BasisTable out;
  out.first_unconstrained = span - p;
  out.n_active = p + 1;
  out.max_order = max_order;
  out.data.assign(static_cast<std::size_t>(max_order + 1) * (p + 1), 0.0);

  std::vector<double> left(p + 1), right(p + 1);
  std::vector<double> ndu((p + 1) * (p + 1));
  auto NDU = [&](int i, int j) -> double& { return ndu[i * (p + 1) + j]; };
  NDU(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - U[span + 1 - j];
    right[j] = U[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      NDU(j, r) = right[r + 1] + left[j - r];
      const double temp = NDU(r, j - 1) / NDU(j, r);
      NDU(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    NDU(j, j) = saved;
  }
  for (int j = 0; j <= p; ++j) out.data[j] = NDU(j, p);

  const int top = std::min(max_order, p);
  std::vector<double> a(2 * (p + 1));
  auto A = [&](int s, int j) -> double& { return a[s * (p + 1) + j]; };
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    A(0, 0) = 1.0;
    for (int k = 1; k <= top; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        A(s2, 0) = A(s1, 0) / NDU(pk + 1, rk);
        d = A(s2, 0) * NDU(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        A(s2, j) = (A(s1, j) - A(s1, j - 1)) / NDU(pk + 1, rk + j);
        d += A(s2, j) * NDU(rk + j, pk);
      }
      if (r <= pk) {
        A(s2, k) = -A(s1, k - 1) / NDU(pk + 1, r);
        d += A(s2, k) * NDU(r, pk);
      }
      out.data[k * (p + 1) + r] = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= top; ++k) {
    for (int j = 0; j <= p; ++j) out.data[k * (p + 1) + j] *= factor;
    factor *= (p - k);
  }
  return out;
}

BasisEval SplineSpace::eval(double x, int deriv_order) const {
  const Interval I = interval();
  if (!std::isfinite(x) || !I.contains(x))
    throw Error(ErrorCode::OutOfDomain, "point " + std::to_string(x) + " outside [" +
                                            std::to_string(I.a) + ", " + std::to_string(I.b) + "]");
  if (deriv_order < 0) throw Error(ErrorCode::InvalidArgument, "negative derivative order");
  const int e = knots_.find_element(x);
  const BasisTable tab = eval_on_element(e, x, deriv_order);

  BasisEval out;
  out.first_active = -1;
  for (int k = 0; k < tab.n_active; ++k) {
    const int g = retained_index(tab.first_unconstrained + k);
    if (g < 0) continue;
    if (out.first_active < 0) out.first_active = g;
    out.values.push_back(tab(deriv_order, k));
  }
  if (out.first_active < 0) out.first_active = 0;
  return out;
}

SplineSpace make_uniform_space(Interval interval, int n_elements, int degree, int regularity,
                               Constraint constraint) {
  if (n_elements < 1) throw Error(ErrorCode::InvalidArgument, "need at least one element");
  if (!(interval.b > interval.a)) throw Error(ErrorCode::InvalidArgument, "empty interval");
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "negative degree");
  if (regularity < 0 || (degree > 0 && regularity >= degree) || (degree == 0 && regularity != 0))
    throw Error(ErrorCode::InvalidRegularity, "regularity " + std::to_string(regularity) +
                                                  " invalid for degree " + std::to_string(degree));
  std::vector<double> bp(n_elements + 1);
  const double h = interval.length() / n_elements;
  for (int i = 0; i <= n_elements; ++i) bp[i] = interval.a + h * i;
  bp.back() = interval.b;
  const int mult = degree == 0 ? 1 : degree - regularity;
  return SplineSpace(KnotVector(std::move(bp), degree, mult), constraint);
}

DerivativeView::DerivativeView(SplineSpace trial) : trial_(std::move(trial)) {
  if (trial_.constraint() != Constraint::ZeroLeft)
    throw Error(ErrorCode::InvalidTestSpace, "test space requires a zero-left trial space");
}

DerivativeView test_space_of(const SplineSpace& trial) { return DerivativeView(trial); }

}  // namespace xtwave
