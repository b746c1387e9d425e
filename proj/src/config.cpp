#include "xtwave/config.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "xtwave/error.hpp"

namespace xtwave {

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Solve: return "solve";
    case Mode::Convergence: return "convergence";
    case Mode::Stability: return "stability";
    case Mode::InfSup: return "infsup";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "solve") return Mode::Solve;
  if (s == "convergence") return Mode::Convergence;
  if (s == "stability") return Mode::Stability;
  if (s == "infsup") return Mode::InfSup;
  throw Error(ErrorCode::ConfigError, "unknown mode '" + s + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& why) {
  throw Error(ErrorCode::ConfigError, "key '" + key + "' = '" + value + "': " + why);
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad(key, v, "expected an integer");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad(key, v, "expected an unsigned integer");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad(key, v, "expected a number");
  return out;
}

std::vector<std::pair<int, int>> to_levels(const std::string& key, const std::string& v) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto x = item.find('x');
    if (x == std::string::npos) bad(key, v, "level '" + item + "' is not of the form NXxNT");
    const long long nx = to_int(key, trim(item.substr(0, x)));
    const long long nt = to_int(key, trim(item.substr(x + 1)));
    if (nx < 1 || nt < 1 || nx > 1 << 20 || nt > 1 << 20) bad(key, v, "element counts out of range");
    out.emplace_back(static_cast<int>(nx), static_cast<int>(nt));
  }
  if (out.empty()) bad(key, v, "no levels");
  return out;
}

std::string fmt_double(double d) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, r.ptr);
}

}  // namespace

int RunConfig::resolved_regularity() const {
  if (regularity == "maximal") return degree - 1;
  if (regularity == "c1") return 1;
  return static_cast<int>(to_int("regularity", regularity));
}

RunConfig parse_config(std::istream& is) {
  RunConfig c;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw Error(ErrorCode::ConfigError, "duplicate key '" + key + "'");

    if (key == "mode") c.mode = mode_from_string(v);
    else if (key == "problem") {
      if (v != "smooth" && v != "singular" && v != "custom") bad(key, v, "expected smooth, singular or custom");
      c.problem = v;
    } else if (key == "degree") c.degree = static_cast<int>(to_int(key, v));
    else if (key == "regularity") {
      if (v != "maximal" && v != "c1") to_int(key, v);
      c.regularity = v;
    } else if (key == "levels") c.levels = to_levels(key, v);
    else if (key == "quadrature") c.quadrature = static_cast<int>(to_int(key, v));
    else if (key == "output") c.output = v;
    else if (key == "seed") c.seed = to_u64(key, v);
    else if (key == "omega_a") c.omega_a = to_double(key, v);
    else if (key == "omega_b") c.omega_b = to_double(key, v);
    else if (key == "T") c.T = to_double(key, v);
    else if (key == "c0") c.c0 = to_double(key, v);
    else if (key == "c2") c.c2 = v;
    else if (key == "exact_U") c.exact_U = v;
    else if (key == "F") c.F = v;
    else if (key == "U0") c.U0 = v;
    else if (key == "V0") c.V0 = v;
    else throw Error(ErrorCode::ConfigError, "unknown key '" + key + "'");
  }
  return c;
}

RunConfig parse_config_string(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config '" + path + "'");
  return parse_config(in);
}

std::string serialize(const RunConfig& c) {
  std::ostringstream os;
  os << "mode = " << to_string(c.mode) << '\n';
  os << "problem = " << c.problem << '\n';
  os << "degree = " << c.degree << '\n';
  os << "regularity = " << c.regularity << '\n';
  if (!c.levels.empty()) {
    os << "levels = ";
    for (std::size_t i = 0; i < c.levels.size(); ++i)
      os << (i ? ", " : "") << c.levels[i].first << 'x' << c.levels[i].second;
    os << '\n';
  }
  os << "quadrature = " << c.quadrature << '\n';
  os << "output = " << c.output << '\n';
  os << "seed = " << c.seed << '\n';
  os << "omega_a = " << fmt_double(c.omega_a) << '\n';
  os << "omega_b = " << fmt_double(c.omega_b) << '\n';
  os << "T = " << fmt_double(c.T) << '\n';
  os << "c0 = " << fmt_double(c.c0) << '\n';
  os << "c2 = " << c.c2 << '\n';
  if (!c.exact_U.empty()) os << "exact_U = " << c.exact_U << '\n';
  if (!c.F.empty()) os << "F = " << c.F << '\n';
  if (!c.U0.empty()) os << "U0 = " << c.U0 << '\n';
  if (!c.V0.empty()) os << "V0 = " << c.V0 << '\n';
  return os.str();
}

void check(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::ConfigError, m); };
  if (c.levels.empty()) fail("levels must not be empty");
  if (c.degree < 1 || c.degree > 10) fail("degree must be between 1 and 10");
  const int r = c.resolved_regularity();
  if (r < 0 || r > c.degree - 1)
    fail("regularity " + std::to_string(r) + " not in [0, " + std::to_string(c.degree - 1) + "]");
  if (c.quadrature < 0 || c.quadrature > 64) fail("quadrature must be between 0 and 64");
  if (c.mode == Mode::Convergence)
    for (std::size_t k = 1; k < c.levels.size(); ++k)
      if (c.levels[k].first != 2 * c.levels[k - 1].first || c.levels[k].second != 2 * c.levels[k - 1].second)
        fail("convergence levels must halve h_x and h_t at every step");
  if (c.mode == Mode::Stability)
    for (const auto& l : c.levels)
      if (l.second != c.levels.front().second) fail("stability levels must share n_t");
  if (c.problem == "custom") {
    if (!(c.omega_b > c.omega_a)) fail("omega_b must exceed omega_a");
    if (!(c.T > 0.0)) fail("T must be positive");
    if (c.c0 < 0.0) fail("c0 must be non-negative");
    const bool data = !c.F.empty() || !c.U0.empty() || !c.V0.empty();
    if (!c.exact_U.empty() && data) fail("give either exact_U or F/U0/V0, not both");
    if (c.exact_U.empty() && (c.F.empty() || c.U0.empty() || c.V0.empty()))
      fail("custom problem needs exact_U or all of F, U0, V0");
  } else if (!c.exact_U.empty() || !c.F.empty() || !c.U0.empty() || !c.V0.empty()) {
    fail("expression keys are only valid for problem = custom");
  }
}

}  // namespace xtwave
