// Serial reference versus OpenMP element loops: RHS assembly, matrix
// assembly and error quadrature on the smooth problem.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "xtwave/analysis.hpp"
#include "xtwave/forms.hpp"
#include "xtwave/problems.hpp"

using namespace xtwave;

namespace {

double best_of(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int k = argc > 1 ? std::atoi(argv[1]) : 5;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;
  const NamedProblem np = smooth_case();
  const ProblemSpec& p = np.spec;
  const int p_deg = 3;
  const SplineSpace sx = make_uniform_space(p.omega, 1 << k, p_deg, p_deg - 1, Constraint::ZeroBoth);
  const SplineSpace st = make_uniform_space({0.0, p.T}, 3 << k, p_deg, p_deg - 1, Constraint::ZeroLeft);
  const LoadData load{p.c2, p.f, p.u0_x, p.v0};
  const DiscreteSolution sol = solve(assemble(p, sx, st));

  std::printf("threads %d, n_x %d, n_t %d, p %d\n", max_threads(), sx.dim(), st.dim(), p_deg);
  std::printf("%-16s %12s %12s %8s %12s\n", "kernel", "serial_s", "parallel_s", "speedup", "max_diff");

  {
    Eigen::VectorXd a, b;
    const double ts = best_of(reps, [&] { a = assemble_rhs(load, sx, st, p.T, 0, Exec::Serial); });
    const double tp = best_of(reps, [&] { b = assemble_rhs(load, sx, st, p.T, 0, Exec::Parallel); });
    std::printf("%-16s %12.4e %12.4e %8.2f %12.3e\n", "rhs", ts, tp, ts / tp, (a - b).cwiseAbs().maxCoeff());
  }
  {
    Eigen::SparseMatrix<double> a, b;
    const double ts =
        best_of(reps, [&] { a = assemble_time_matrix(st, test_space_of(st), 1, 0, p.T, 0, Exec::Serial).matrix; });
    const double tp =
        best_of(reps, [&] { b = assemble_time_matrix(st, test_space_of(st), 1, 0, p.T, 0, Exec::Parallel).matrix; });
    std::printf("%-16s %12.4e %12.4e %8.2f %12.3e\n", "time_matrix", ts, tp, ts / tp,
                Eigen::MatrixXd(a - b).cwiseAbs().maxCoeff());
  }
  {
    ErrorReports a, b;
    const double ts = best_of(reps, [&] { a = error_report(sol, p, 0, Exec::Serial); });
    const double tp = best_of(reps, [&] { b = error_report(sol, p, 0, Exec::Parallel); });
    std::printf("%-16s %12.4e %12.4e %8.2f %12.3e\n", "error_quadrature", ts, tp, ts / tp,
                std::abs(a.absolute.err_Veh - b.absolute.err_Veh));
  }
  return 0;
}
