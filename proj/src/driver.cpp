#include "xtwave/driver.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "xtwave/error.hpp"
#include "xtwave/system.hpp"

namespace xtwave {

NamedProblem make_problem(const RunConfig& c) {
  if (c.problem != "custom") return problem_by_name(c.problem);
  const Interval omega{c.omega_a, c.omega_b};
  const Expr c2 = Expr::parse(c.c2);
  if (!c.exact_U.empty()) return manufactured(Expr::parse(c.exact_U), c2, omega, c.T, c.c0);
  return from_expressions(c2, Expr::parse(c.F), Expr::parse(c.U0), Expr::parse(c.V0), omega, c.T, c.c0);
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

struct Prepared {
  NamedProblem problem;
  std::vector<SplineSpace> sx, st;
};

Prepared prepare(const RunConfig& c) {
  check(c);
  Prepared out{make_problem(c), {}, {}};
  const ProblemSpec& p = out.problem.spec;
  validate(p, c.seed);
  if (c.mode != Mode::Solve && c.mode != Mode::InfSup && !p.exact)
    throw Error(ErrorCode::ConfigError, std::string(to_string(c.mode)) + " mode needs an exact solution");
  const int r = c.resolved_regularity();
  for (const auto& [nx, nt] : c.levels) {
    out.sx.push_back(make_uniform_space(p.omega, nx, c.degree, r, Constraint::ZeroBoth));
    out.st.push_back(make_uniform_space({0.0, p.T}, nt, c.degree, r, Constraint::ZeroLeft));
    if (c.mode == Mode::InfSup && 2 * out.sx.back().dim() * out.st.back().dim() > kMaxInfSupSize)
      throw Error(ErrorCode::ConfigError, "level " + std::to_string(nx) + "x" + std::to_string(nt) +
                                              " too large for the inf-sup eigensolve");
  }
  return out;
}

}  // namespace

std::string format_csv(const std::vector<LevelRow>& rows) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const LevelRow& r : rows) {
    os << r.level << ',' << num(r.h_x) << ',' << num(r.h_t) << ',' << r.p << ',' << r.regularity << ','
       << r.dofs << ',';
    const auto& e = r.errors;
    os << (e ? num(e->err_Veh) : "") << ',' << opt(r.eoc_Veh) << ',';
    os << (e ? num(e->err_U_L2) : "") << ',' << opt(r.eoc_U_L2) << ',';
    os << (e ? num(e->err_V_L2) : "") << ',' << opt(r.eoc_V_L2) << ',';
    os << (e ? num(e->err_cgradU_L2e) : "") << ',' << opt(r.eoc_cgradU) << ',';
    os << opt(r.gamma_h) << ',' << opt(r.lower_bound) << ',' << num(r.seconds) << '\n';
  }
  return os.str();
}

std::string format_plot_data(const std::vector<LevelRow>& rows, Mode mode) {
  std::ostringstream os;
  auto abscissa = [mode](const LevelRow& r) { return mode == Mode::Stability ? r.h_x : std::max(r.h_x, r.h_t); };
  const char* xname = mode == Mode::Stability ? "h_x" : "h";
  auto block = [&](const char* name, auto get) {
    bool any = false;
    for (const LevelRow& r : rows)
      if (get(r)) any = true;
    if (!any) return;
    os << "# " << xname << ' ' << name << '\n';
    for (const LevelRow& r : rows)
      if (const auto v = get(r)) os << num(abscissa(r)) << ' ' << num(*v) << '\n';
    os << "\n\n";
  };
  using O = std::optional<double>;
  block("err_Veh", [](const LevelRow& r) { return r.errors ? O(r.errors->err_Veh) : O(); });
  block("err_U_L2", [](const LevelRow& r) { return r.errors ? O(r.errors->err_U_L2) : O(); });
  block("err_V_L2", [](const LevelRow& r) { return r.errors ? O(r.errors->err_V_L2) : O(); });
  block("err_cgradU", [](const LevelRow& r) { return r.errors ? O(r.errors->err_cgradU_L2e) : O(); });
  block("gamma_h", [](const LevelRow& r) { return r.gamma_h; });
  block("lower_bound", [](const LevelRow& r) { return r.lower_bound; });
  return os.str();
}

RunResult run(const RunConfig& c, std::ostream& log) {
  RunResult result;
  Prepared prep;
  try {
    prep = prepare(c);
  } catch (const Error& e) {
    result.exit_code = kExitConfig;
    result.message = e.what();
    return result;
  }
  const ProblemSpec& p = prep.problem.spec;
  const std::filesystem::path out_dir(c.output);
  try {
    std::filesystem::create_directories(out_dir);
  } catch (const std::filesystem::filesystem_error& e) {
    result.exit_code = kExitConfig;
    result.message = e.what();
    return result;
  }

  try {
    for (std::size_t k = 0; k < c.levels.size(); ++k) {
      const SplineSpace& sx = prep.sx[k];
      const SplineSpace& st = prep.st[k];
      LevelRow row;
      row.level = static_cast<int>(k);
      row.h_x = p.omega.length() / c.levels[k].first;
      row.h_t = p.T / c.levels[k].second;
      row.p = c.degree;
      row.regularity = sx.regularity();
      row.dofs = 2 * sx.dim() * st.dim();

      const auto t0 = std::chrono::steady_clock::now();
      if (c.mode == Mode::InfSup) {
        const InfSupEstimate est = estimate_infsup(p, sx, st, c.quadrature);
        row.gamma_h = est.gamma_h;
        row.lower_bound = est.lower_bound;
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      } else {
        const BlockSystem sys = assemble(p, sx, st, c.quadrature);
        const DiscreteSolution sol = solve(sys);
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (p.exact) row.errors = error_report(sol, p).relative;
        if (c.mode == Mode::Solve) {
          std::ofstream dump(out_dir / ("solution_level" + std::to_string(k) + ".txt"));
          write_solution(dump, sol);
          if (!dump) throw Error(ErrorCode::InvalidArgument, "cannot write solution dump");
        }
        if (c.mode == Mode::Convergence && k > 0) {
          const ErrorReport& a = *result.rows.back().errors;
          const ErrorReport& b = *row.errors;
          row.eoc_Veh = eoc(a.err_Veh, b.err_Veh);
          row.eoc_U_L2 = eoc(a.err_U_L2, b.err_U_L2);
          row.eoc_V_L2 = eoc(a.err_V_L2, b.err_V_L2);
          row.eoc_cgradU = eoc(a.err_cgradU_L2e, b.err_cgradU_L2e);
        }
      }
      log << "level " << k << ": " << c.levels[k].first << "x" << c.levels[k].second << ", " << row.dofs
          << " dofs";
      if (row.errors) log << ", err_Veh " << num(row.errors->err_Veh);
      if (row.gamma_h) log << ", gamma_h " << num(*row.gamma_h);
      log << '\n';
      result.rows.push_back(row);
    }
  } catch (const Error& e) {
    result.exit_code = kExitSolver;
    result.message = e.what();
    return result;
  }

  std::ofstream csv(out_dir / "results.csv");
  csv << format_csv(result.rows);
  std::ofstream plot(out_dir / "plot.dat");
  plot << format_plot_data(result.rows, c.mode);
  if (!csv || !plot) {
    result.exit_code = kExitSolver;
    result.message = "cannot write results to " + out_dir.string();
  }
  return result;
}

}  // namespace xtwave
