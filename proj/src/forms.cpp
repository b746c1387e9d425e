#include "xtwave/forms.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "xtwave/error.hpp"
#include "xtwave/quadrature.hpp"

namespace xtwave {

Eigen::MatrixXd UnivariateForm::dense() const {
  if (rows > kDenseLimit || cols > kDenseLimit)
    throw Error(ErrorCode::InvalidArgument, "form too large for a dense copy");
  return Eigen::MatrixXd(matrix);
}

int default_points(BasisRef trial, BasisRef test) {
  return std::max(trial.space->degree(), test.space->degree()) + 2;
}

int weighted_points(int degree, double h, double T) {
  const double L = h / T;
  for (int n = degree + 2; n < kMaxGaussPoints; ++n) {
    // log of h^{-1} * |Gauss remainder| for poly(2p) * e^{-s} on length L, with
    // the polynomial normalized to the element.
    const double log_est = 4 * std::lgamma(n + 1.0) - std::log(2.0 * n + 1) - 2 * std::lgamma(2 * n + 1.0) -
                           std::lgamma(2.0 * n - 2.0 * degree + 1) + (2.0 * n - 2.0 * degree) * std::log(L);
    if (log_est < std::log(1e-17)) return n;
  }
  return kMaxGaussPoints;
}

double max_element_length(const SplineSpace& s) {
  const auto& bp = s.knots().breakpoints();
  double h = 0.0;
  for (std::size_t i = 1; i < bp.size(); ++i) h = std::max(h, bp[i] - bp[i - 1]);
  return h;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Integrates one (sub)element [lo,hi] of the merged mesh into `out`.
void element_kernel(BasisRef trial, BasisRef test, int d_trial, int d_test,
                    const std::function<double(double)>& weight, const QuadratureRule& rule,
                    double lo, double hi, Triplets& out) {
  const double mid = 0.5 * (lo + hi);
  const int e_tr = trial.space->knots().find_element(mid);
  const int e_te = test.space->knots().find_element(mid);
  const int o_tr = d_trial + trial.shift;
  const int o_te = d_test + test.shift;
  const int n_tr = trial.space->degree() + 1;
  const int n_te = test.space->degree() + 1;

  std::vector<double> local(static_cast<std::size_t>(n_tr) * n_te, 0.0);
  const MappedRule m = map_rule(rule, lo, hi);
  int first_tr = 0, first_te = 0;
  for (std::size_t q = 0; q < m.x.size(); ++q) {
    const double x = m.x[q];
    const double w = weight(x);
    if (!std::isfinite(w))
      throw Error(ErrorCode::AssemblyError, "non-finite coefficient at node " + std::to_string(x));
    const BasisTable bt = trial.space->eval_on_element(e_tr, x, o_tr);
    const BasisTable bs = test.space->eval_on_element(e_te, x, o_te);
    first_tr = bt.first_unconstrained;
    first_te = bs.first_unconstrained;
    const double ww = m.w[q] * w;
    for (int i = 0; i < n_te; ++i) {
      const double vi = ww * (o_te <= test.space->degree() ? bs(o_te, i) : 0.0);
      for (int j = 0; j < n_tr; ++j)
        local[i * n_tr + j] += vi * (o_tr <= trial.space->degree() ? bt(o_tr, j) : 0.0);
    }
  }
  for (int i = 0; i < n_te; ++i) {
    const int gi = test.space->retained_index(first_te + i);
    if (gi < 0) continue;
    for (int j = 0; j < n_tr; ++j) {
      const int gj = trial.space->retained_index(first_tr + j);
      if (gj < 0) continue;
      out.emplace_back(gi, gj, local[i * n_tr + j]);
    }
  }
}

}  // namespace

UnivariateForm assemble_form(BasisRef trial, BasisRef test, int d_trial, int d_test,
                             const std::function<double(double)>& weight, int n_points, Exec exec) {
  if (!(trial.space->interval() == test.space->interval()))
    throw Error(ErrorCode::DomainMismatch, "trial and test spaces live on different intervals");
  if (d_trial < 0 || d_test < 0) throw Error(ErrorCode::InvalidArgument, "negative derivative order");
  if (n_points <= 0) n_points = default_points(trial, test);
  const QuadratureRule rule = gauss_rule(n_points);

  const auto& bp_tr = trial.space->knots().breakpoints();
  const auto& bp_te = test.space->knots().breakpoints();
  const std::vector<double> bp = bp_tr == bp_te ? bp_tr : merge_breakpoints(bp_tr, bp_te);
  const int n_el = static_cast<int>(bp.size()) - 1;

  Triplets all;
  if (exec == Exec::Serial) {
    for (int e = 0; e < n_el; ++e)
      element_kernel(trial, test, d_trial, d_test, weight, rule, bp[e], bp[e + 1], all);
  } else {
    std::vector<Triplets> per_element(n_el);
    bool failed = false;
    std::string message;
    ErrorCode code = ErrorCode::AssemblyError;
#pragma omp parallel for schedule(static)
    for (int e = 0; e < n_el; ++e) {
      try {
        element_kernel(trial, test, d_trial, d_test, weight, rule, bp[e], bp[e + 1], per_element[e]);
      } catch (const Error& err) {
#pragma omp critical(xtwave_assembly_error)
        {
          failed = true;
          message = err.what();
          code = err.code();
        }
      }
    }
    if (failed) throw Error(code, message);
    for (auto& t : per_element) all.insert(all.end(), t.begin(), t.end());
  }

  UnivariateForm form;
  form.rows = test.dim();
  form.cols = trial.dim();
  form.d_trial = d_trial;
  form.d_test = d_test;
  form.matrix.resize(form.rows, form.cols);
  form.matrix.setFromTriplets(all.begin(), all.end());
  form.matrix.makeCompressed();
  return form;
}

UnivariateForm assemble_time_matrix(BasisRef trial, BasisRef test, int d_trial, int d_test, double T,
                                    int n_points, Exec exec) {
  const Interval I = trial.space->interval();
  if (!(I == test.space->interval()) || I.a != 0.0 || std::abs(I.b - T) > 1e-14 * std::max(1.0, T))
    throw Error(ErrorCode::DomainMismatch, "time spaces must live on (0, T)");
  if (n_points <= 0)
    n_points = weighted_points(std::max(trial.space->degree(), test.space->degree()),
                               std::max(max_element_length(*trial.space), max_element_length(*test.space)), T);
  UnivariateForm f = assemble_form(
      trial, test, d_trial, d_test, [T](double t) { return std::exp(-t / T); }, n_points, exec);
  f.weight = Weight::ExpT;
  return f;
}

UnivariateForm assemble_unweighted_time_matrix(BasisRef trial, BasisRef test, int d_trial, int d_test,
                                               int n_points) {
  return assemble_form(trial, test, d_trial, d_test, [](double) { return 1.0; }, n_points);
}

UnivariateForm assemble_space_matrix(BasisRef trial, BasisRef test, int d_trial, int d_test,
                                     const std::function<double(double)>& coefficient, int n_points,
                                     Exec exec) {
  return assemble_form(trial, test, d_trial, d_test, coefficient, n_points, exec);
}

}  // namespace xtwave
