#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xtwave/analysis.hpp"
#include "xtwave/config.hpp"
#include "xtwave/problems.hpp"

namespace xtwave {

inline constexpr const char* kCsvHeader =
    "level,h_x,h_t,p,regularity,dofs,err_Veh,eoc_Veh,err_U_L2,eoc_U_L2,err_V_L2,eoc_V_L2,"
    "err_cgradU,eoc_cgradU,gamma_h,lower_bound,solve_seconds";

struct LevelRow {
  int level = 0;
  double h_x = 0.0;
  double h_t = 0.0;
  int p = 0;
  int regularity = 0;
  int dofs = 0;
  std::optional<ErrorReport> errors;  // relative
  std::optional<double> eoc_Veh, eoc_U_L2, eoc_V_L2, eoc_cgradU;
  std::optional<double> gamma_h, lower_bound;
  double seconds = 0.0;
};

struct RunResult {
  int exit_code = 0;
  std::string message;
  std::vector<LevelRow> rows;
};

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitSolver = 3 };

/// Problem described by a config (named or custom).
NamedProblem make_problem(const RunConfig& config);

/// Runs every level of the config and writes results.csv, plot.dat and, in
/// solve mode, one solution dump per level into config.output.
RunResult run(const RunConfig& config, std::ostream& log);

/// CSV text for the rows (header included). Timing is the last column.
std::string format_csv(const std::vector<LevelRow>& rows);

/// Two-column series, one block per curve, separated by blank lines.
std::string format_plot_data(const std::vector<LevelRow>& rows, Mode mode);

}  // namespace xtwave
