#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>

#include "xtwave/parallel.hpp"
#include "xtwave/splines.hpp"

namespace xtwave {

enum class Weight { One, ExpT };

/// Matrix of  entry(i,j) = int coefficient * D^{d_test} psi_i * D^{d_trial} phi_j * weight,
/// rows indexed by the test basis, columns by the trial basis.
struct UnivariateForm {
  int rows = 0;
  int cols = 0;
  int d_trial = 0;
  int d_test = 0;
  Weight weight = Weight::One;
  Eigen::SparseMatrix<double> matrix;

  /// Largest dimension for which a dense copy is handed out.
  static constexpr int kDenseLimit = 2048;
  Eigen::MatrixXd dense() const;
};

/// Default points per element: max(trial degree, test degree) + 2.
int default_points(BasisRef trial, BasisRef test);

/// Points per element for integrands (degree <= 2p polynomial) * e^{-t/T} on
/// elements of length h: the smallest n >= p + 2 whose Gauss remainder
/// estimate is below 1e-17 h. Coarse time meshes need more than p + 2.
int weighted_points(int degree, double h, double T);

/// Largest element length of a space.
double max_element_length(const SplineSpace& s);

/// Generic kernel; `weight` multiplies the integrand pointwise.
UnivariateForm assemble_form(BasisRef trial, BasisRef test, int d_trial, int d_test,
                             const std::function<double(double)>& weight, int n_points = 0,
                             Exec exec = Exec::Parallel);

/// Time matrix on (0,T) with weight e^{-t/T}.
UnivariateForm assemble_time_matrix(BasisRef trial, BasisRef test, int d_trial, int d_test, double T,
                                    int n_points = 0, Exec exec = Exec::Parallel);

/// Unweighted time matrix (used for comparisons against the weighted one).
UnivariateForm assemble_unweighted_time_matrix(BasisRef trial, BasisRef test, int d_trial, int d_test,
                                               int n_points = 0);

/// Space matrix with a pointwise coefficient (c^2 for stiffness, 1 for mass).
UnivariateForm assemble_space_matrix(BasisRef trial, BasisRef test, int d_trial, int d_test,
                                     const std::function<double(double)>& coefficient,
                                     int n_points = 0, Exec exec = Exec::Parallel);

}  // namespace xtwave
