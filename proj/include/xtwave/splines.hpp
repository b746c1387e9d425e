#pragma once

#include <string>
#include <vector>

namespace xtwave {

struct Interval {
  double a = 0.0;
  double b = 1.0;

  double length() const { return b - a; }
  bool contains(double x) const { return x >= a && x <= b; }
  bool operator==(const Interval&) const = default;
};

/// Open (clamped) knot vector: breakpoints with a uniform interior
/// multiplicity; end knots are repeated degree+1 times.
class KnotVector {
 public:
  KnotVector(std::vector<double> breakpoints, int degree, int interior_multiplicity);

  int degree() const { return degree_; }
  int multiplicity() const { return multiplicity_; }
  int regularity() const { return degree_ - multiplicity_; }
  int n_elements() const { return static_cast<int>(breakpoints_.size()) - 1; }
  Interval interval() const { return {breakpoints_.front(), breakpoints_.back()}; }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& knots() const { return knots_; }

  /// Number of B-splines before any boundary constraint is applied.
  int n_basis() const { return static_cast<int>(knots_.size()) - degree_ - 1; }

  /// Element containing x; the right end point belongs to the last element.
  int find_element(double x) const;

  /// Knot span index of element e (knots_[span] = breakpoint e).
  int span_of_element(int e) const { return degree_ + multiplicity_ * e; }

  bool operator==(const KnotVector& o) const {
    return degree_ == o.degree_ && multiplicity_ == o.multiplicity_ && breakpoints_ == o.breakpoints_;
  }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> knots_;
  int degree_;
  int multiplicity_;
};

enum class Constraint { None, ZeroLeft, ZeroBoth };

const char* to_string(Constraint c);
Constraint constraint_from_string(const std::string& s);

/// Values (or derivatives) of the retained basis functions active at a point.
/// values[k] belongs to global (post-constraint) index first_active + k.
struct BasisEval {
  int first_active = 0;
  std::vector<double> values;
};

/// Derivative table of all unconstrained B-splines active on one element:
/// entry (order, k) is D^order of B-spline first_unconstrained + k.
struct BasisTable {
  int first_unconstrained = 0;
  int n_active = 0;
  int max_order = 0;
  std::vector<double> data;

  double operator()(int order, int k) const { return data[order * n_active + k]; }
};

class SplineSpace {
 public:
  SplineSpace(KnotVector knots, Constraint constraint);

  const KnotVector& knots() const { return knots_; }
  Constraint constraint() const { return constraint_; }
  int degree() const { return knots_.degree(); }
  int regularity() const { return knots_.regularity(); }
  int n_elements() const { return knots_.n_elements(); }
  Interval interval() const { return knots_.interval(); }
  int dim() const { return dim_; }

  /// Global index after constraint elimination, or -1 for a removed function.
  int retained_index(int unconstrained) const {
    const int idx = unconstrained - offset_;
    return (idx < 0 || idx >= dim_) ? -1 : idx;
  }

  BasisEval eval(double x, int deriv_order) const;

  /// Derivatives 0..max_order of the element's active functions at x.
  /// x may lie anywhere in the closed element; no domain check is made.
  BasisTable eval_on_element(int element, double x, int max_order) const;

  bool operator==(const SplineSpace& o) const {
    return knots_ == o.knots_ && constraint_ == o.constraint_;
  }

 private:
  KnotVector knots_;
  Constraint constraint_;
  int offset_;
  int dim_;
};

SplineSpace make_uniform_space(Interval interval, int n_elements, int degree, int regularity,
                               Constraint constraint);

/// Basis {d/dt phi_i} of a zero-left trial space. Same dimension as the
/// trial space; evaluating order k delegates to order k+1 on the trial.
class DerivativeView {
 public:
  explicit DerivativeView(SplineSpace trial);

  const SplineSpace& trial() const { return trial_; }
  int dim() const { return trial_.dim(); }
  Interval interval() const { return trial_.interval(); }
  BasisEval eval(double x, int deriv_order) const { return trial_.eval(x, deriv_order + 1); }

 private:
  SplineSpace trial_;
};

DerivativeView test_space_of(const SplineSpace& trial);

/// A basis used in assembly: a spline space differentiated `shift` extra times.
struct BasisRef {
  const SplineSpace* space;
  int shift;

  BasisRef(const SplineSpace& s) : space(&s), shift(0) {}          // NOLINT
  BasisRef(const DerivativeView& v) : space(&v.trial()), shift(1) {}  // NOLINT

  int dim() const { return space->dim(); }
};

}  // namespace xtwave
