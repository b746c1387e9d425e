#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace xtwave {

enum class Mode { Solve, Convergence, Stability, InfSup };

const char* to_string(Mode m);
Mode mode_from_string(const std::string& s);

/// Flat `key = value` run description. `#` starts a comment.
///
///   mode        solve | convergence | stability | infsup
///   problem     smooth | singular | custom
///   degree      spline degree in space and time (>= 1)
///   regularity  maximal | c1 | integer in [0, degree - 1]
///   levels      "nx x nt, nx x nt, ..." element counts per level
///   quadrature  Gauss points per element for assembly, 0 = default
///   output      output directory
///   seed        seed of the sampled data checks
///
/// Custom problems additionally take omega_a, omega_b, T, c2, c0 (0 = sampled)
/// and either exact_U or the data F, U0, V0, all as expressions in x and t.
struct RunConfig {
  Mode mode = Mode::Solve;
  std::string problem = "smooth";
  int degree = 2;
  std::string regularity = "maximal";
  std::vector<std::pair<int, int>> levels;
  int quadrature = 0;
  std::string output = ".";
  std::uint64_t seed = 1;

  double omega_a = 0.0;
  double omega_b = 1.0;
  double T = 1.0;
  double c0 = 0.0;
  std::string c2 = "1";
  std::string exact_U;
  std::string F;
  std::string U0;
  std::string V0;

  /// Continuity order the regularity key resolves to for `degree`.
  int resolved_regularity() const;

  bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError on syntax errors, unknown or duplicate keys and bad values.
RunConfig parse_config(std::istream& is);
RunConfig parse_config_string(const std::string& text);
RunConfig load_config(const std::string& path);

std::string serialize(const RunConfig& config);

/// Cross-field checks: non-empty levels, halving in convergence mode, fixed
/// n_t in stability mode, regularity range, custom-problem completeness.
void check(const RunConfig& config);

}  // namespace xtwave
