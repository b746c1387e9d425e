#include "xtwave/system.hpp"

#include <Eigen/UmfPackSupport>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "element_basis.hpp"
#include "xtwave/error.hpp"
#include "xtwave/forms.hpp"
#include "xtwave/quadrature.hpp"

namespace xtwave {

void validate(const ProblemSpec& p, std::uint64_t seed) {
  if (!(p.T > 0.0)) throw Error(ErrorCode::InvalidArgument, "final time must be positive");
  if (!(p.omega.b > p.omega.a)) throw Error(ErrorCode::InvalidArgument, "empty spatial domain");
  if (!(p.c0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "c0 must be positive");
  if (!p.c2 || !p.f || !p.u0 || !p.u0_x || !p.v0)
    throw Error(ErrorCode::InvalidArgument, "problem data incomplete");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(p.omega.a, p.omega.b), ut(0.0, p.T);
  for (int i = 0; i < 100; ++i) {
    const double x = ux(rng);
    if (!(p.c2(x) >= p.c0 * p.c0 * (1.0 - 1e-14)))
      throw Error(ErrorCode::InvalidArgument, "c^2 below c0^2 at x = " + std::to_string(x));
  }
  if (!p.exact) return;
  const ExactSolution& ex = *p.exact;
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const double x = ux(rng);
    const double t = std::clamp(ut(rng), 2 * h, p.T - 2 * h);
    if (p.singular_line) {
      const double xs = p.singular_line(t);
      if (std::abs(x - xs) < 1e-3 || std::abs(x - p.singular_line(0.0)) < 1e-3) continue;
    }
    const double fd = (ex.u(x, t + h) - ex.u(x, t - h)) / (2 * h);
    const double scale = std::max(1.0, std::abs(ex.v(x, t)));
    if (std::abs(fd - ex.v(x, t)) > 1e-6 * scale)
      throw Error(ErrorCode::InvalidArgument, "exact V differs from dU/dt");
    if (std::abs(ex.u(x, 0.0) - p.u0(x)) > 1e-12 * std::max(1.0, std::abs(p.u0(x))))
      throw Error(ErrorCode::InvalidArgument, "exact U(., 0) differs from U0");
    if (std::abs(ex.v(x, 0.0) - p.v0(x)) > 1e-12 * std::max(1.0, std::abs(p.v0(x))))
      throw Error(ErrorCode::InvalidArgument, "exact V(., 0) differs from V0");
  }
}

Eigen::SparseMatrix<double> kron(const Eigen::SparseMatrix<double>& time,
                                 const Eigen::SparseMatrix<double>& space) {
  const Eigen::Index nr = time.rows() * space.rows();
  const Eigen::Index nc = time.cols() * space.cols();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(time.nonZeros()) * space.nonZeros());
  for (int jt = 0; jt < time.outerSize(); ++jt)
    for (Eigen::SparseMatrix<double>::InnerIterator it(time, jt); it; ++it)
      for (int js = 0; js < space.outerSize(); ++js)
        for (Eigen::SparseMatrix<double>::InnerIterator is(space, js); is; ++is)
          trip.emplace_back(it.row() * space.rows() + is.row(), it.col() * space.cols() + is.col(),
                            it.value() * is.value());
  Eigen::SparseMatrix<double> out(nr, nc);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

BlockFactors assemble_factors(const SplineSpace& sx, const SplineSpace& st, const Fn1& c2, double T,
                              int n_points) {
  const DerivativeView test_t = test_space_of(st);
  BlockFactors f;
  f.mass_x = assemble_space_matrix(sx, sx, 0, 0, [](double) { return 1.0; }, n_points).matrix;
  f.stiff_x = assemble_space_matrix(sx, sx, 1, 1, c2, n_points).matrix;
  f.s_e = assemble_time_matrix(st, test_t, 1, 0, T, n_points).matrix;
  f.a_e_t = assemble_time_matrix(st, test_t, 0, 0, T, n_points).matrix;
  return f;
}

Eigen::SparseMatrix<double> expand_blocks(const BlockFactors& f) {
  const Eigen::SparseMatrix<double> kx_ae = kron(f.a_e_t, f.stiff_x);
  const Eigen::SparseMatrix<double> mx_se = kron(f.s_e, f.mass_x);
  const Eigen::SparseMatrix<double> mx_ae = kron(f.a_e_t, f.mass_x);
  const Eigen::Index n = kx_ae.rows();

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(kx_ae.nonZeros() + 2 * mx_se.nonZeros() + mx_ae.nonZeros()));
  auto put = [&](const Eigen::SparseMatrix<double>& b, Eigen::Index r0, Eigen::Index c0, double s) {
    for (int j = 0; j < b.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(b, j); it; ++it)
        trip.emplace_back(r0 + it.row(), c0 + it.col(), s * it.value());
  };
  // lambda rows: (c^2 grad U, grad lambda)_e + (d_t V, lambda)_e
  put(kx_ae, 0, 0, 1.0);
  put(mx_se, 0, n, 1.0);
  // chi rows: -(d_t U, chi)_e + (V, chi)_e
  put(mx_se, n, 0, -1.0);
  put(mx_ae, n, n, 1.0);
  Eigen::SparseMatrix<double> m(2 * n, 2 * n);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

Eigen::VectorXd assemble_rhs(const LoadData& data, const SplineSpace& sx, const SplineSpace& st,
                             double T, int n_points, Exec exec) {
  if (sx.constraint() != Constraint::ZeroBoth || st.constraint() != Constraint::ZeroLeft)
    throw Error(ErrorCode::InvalidSpace, "space needs zero-both and time zero-left constraints");
  const int n_x = sx.dim(), n_t = st.dim();
  const QuadratureRule rule = gauss_rule(n_points > 0 ? n_points : std::max(sx.degree(), st.degree()) + 2);
  const QuadratureRule rule_t =
      gauss_rule(n_points > 0 ? n_points : weighted_points(st.degree(), max_element_length(st), T));
  const int nex = sx.n_elements(), net = st.n_elements();

  // Spatial moments (c^2 U0', psi_a') and (V0, psi_a).
  Eigen::VectorXd k0 = Eigen::VectorXd::Zero(n_x), m0 = Eigen::VectorXd::Zero(n_x);
  std::vector<detail::ElementBasis> xb(nex);
  for (int ex = 0; ex < nex; ++ex) {
    xb[ex] = detail::element_basis(sx, ex, rule, 1);
    const auto& eb = xb[ex];
    for (int q = 0; q < eb.n_nodes(); ++q) {
      const double x = eb.x[q];
      const double a = data.c2(x) * data.u0_x(x), b = data.v0(x);
      if (!std::isfinite(a) || !std::isfinite(b))
        throw Error(ErrorCode::AssemblyError, "non-finite initial data at x = " + std::to_string(x));
      for (int k = 0; k < eb.n_active; ++k) {
        const int g = sx.retained_index(eb.first_unconstrained + k);
        if (g < 0) continue;
        k0[g] += eb.w[q] * a * eb(q, 1, k);
        m0[g] += eb.w[q] * b * eb(q, 0, k);
      }
    }
  }
  // Time moments g_b = int phi_b' e^{-t/T}.
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n_t);
  std::vector<detail::ElementBasis> tb(net);
  for (int et = 0; et < net; ++et) {
    tb[et] = detail::element_basis(st, et, rule_t, 1);
    const auto& eb = tb[et];
    for (int q = 0; q < eb.n_nodes(); ++q) {
      const double wq = eb.w[q] * std::exp(-eb.x[q] / T);
      for (int k = 0; k < eb.n_active; ++k) {
        const int gi = st.retained_index(eb.first_unconstrained + k);
        if (gi >= 0) g[gi] += wq * eb(q, 1, k);
      }
    }
  }

  // Forcing (F, psi_a phi_b')_e: one dense n_x x (p_t+1) buffer per time element,
  // scattered in element order so the result does not depend on the schedule.
  const int nat = st.degree() + 1;
  std::vector<Eigen::MatrixXd> local(net);
  bool failed = false;
  auto kernel = [&](int et) {
    Eigen::MatrixXd& buf = local[et];
    buf.setZero(n_x + 2, nat);
    const auto& eb_t = tb[et];
    for (int qt = 0; qt < eb_t.n_nodes(); ++qt) {
      const double t = eb_t.x[qt];
      const double wt = eb_t.w[qt] * std::exp(-t / T);
      for (int ex = 0; ex < nex; ++ex) {
        const auto& eb = xb[ex];
        for (int qx = 0; qx < eb.n_nodes(); ++qx) {
          const double fv = data.f(eb.x[qx], t);
          if (!std::isfinite(fv)) {
            failed = true;
            continue;
          }
          const double w = wt * eb.w[qx] * fv;
          for (int a = 0; a < eb.n_active; ++a) {
            const int ga = sx.retained_index(eb.first_unconstrained + a);
            if (ga < 0) continue;
            const double wa = w * eb(qx, 0, a);
            for (int b = 0; b < nat; ++b) buf(ga, b) += wa * eb_t(qt, 1, b);
          }
        }
      }
    }
  };
  if (exec == Exec::Serial) {
    for (int et = 0; et < net; ++et) kernel(et);
  } else {
#pragma omp parallel for schedule(static)
    for (int et = 0; et < net; ++et) kernel(et);
  }
  if (failed) throw Error(ErrorCode::AssemblyError, "non-finite forcing value");

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n_x * n_t);
  for (int et = 0; et < net; ++et) {
    for (int b = 0; b < nat; ++b) {
      const int gb = st.retained_index(tb[et].first_unconstrained + b);
      if (gb < 0) continue;
      for (int a = 0; a < n_x; ++a) rhs[gb * n_x + a] += local[et](a, b);
    }
  }
  for (int b = 0; b < n_t; ++b)
    for (int a = 0; a < n_x; ++a) {
      rhs[b * n_x + a] -= k0[a] * g[b];
      rhs[n_x * n_t + b * n_x + a] = -m0[a] * g[b];
    }
  return rhs;
}

BlockSystem assemble(const ProblemSpec& p, const SplineSpace& sx, const SplineSpace& st, int n_points,
                     Exec exec) {
  if (sx.constraint() != Constraint::ZeroBoth)
    throw Error(ErrorCode::InvalidSpace, "spatial trial space must vanish at both ends");
  if (st.constraint() != Constraint::ZeroLeft)
    throw Error(ErrorCode::InvalidSpace, "temporal trial space must vanish at t = 0");
  if (!(sx.interval() == p.omega))
    throw Error(ErrorCode::DomainMismatch, "spatial space does not live on the problem domain");
  BlockSystem s{sx, st, p.T, sx.dim(), st.dim(), p.c2, n_points, {}, {}, {}, {p.u0, p.u0_x, p.v0, p.v0_x}};
  s.factors = assemble_factors(sx, st, p.c2, p.T, n_points);
  s.matrix = expand_blocks(s.factors);
  s.rhs = assemble_rhs({p.c2, p.f, p.u0_x, p.v0}, sx, st, p.T, n_points, exec);
  return s;
}

DiscreteSolution solve(const BlockSystem& s) { return solve(s, s.rhs); }

DiscreteSolution solve(const BlockSystem& s, const Eigen::VectorXd& rhs) {
  Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(s.matrix);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "sparse LU failed");
  Eigen::VectorXd z = lu.solve(rhs);
  const double rn = rhs.norm();
  const double denom = rn > 0.0 ? rn : 1.0;
  double res = (s.matrix * z - rhs).norm() / denom;
  // A couple of refinement sweeps recover the last digits on ill-scaled levels.
  for (int it = 0; it < 3 && res > 1e-13; ++it) {
    const Eigen::VectorXd r = rhs - s.matrix * z;
    z += lu.solve(r);
    res = (s.matrix * z - rhs).norm() / denom;
  }
  if (!z.allFinite()) throw Error(ErrorCode::SingularSystem, "non-finite solution");

  DiscreteSolution sol{s.space_x, s.space_t, s.T, {}, {}, s.shift, res};
  const int n = s.n_x * s.n_t;
  sol.u = Eigen::Map<const Eigen::MatrixXd>(z.data(), s.n_x, s.n_t);
  sol.v = Eigen::Map<const Eigen::MatrixXd>(z.data() + n, s.n_x, s.n_t);
  return sol;
}

std::pair<double, double> evaluate(const DiscreteSolution& sol, double x, double t, int d_x, int d_t) {
  if (d_x < 0 || d_x > 1 || d_t < 0 || d_t > 1)
    throw Error(ErrorCode::InvalidArgument, "derivative orders must be 0 or 1");
  const BasisEval bx = sol.space_x.eval(x, d_x);
  const BasisEval bt = sol.space_t.eval(t, d_t);
  double u = 0.0, v = 0.0;
  for (std::size_t j = 0; j < bt.values.size(); ++j)
    for (std::size_t i = 0; i < bx.values.size(); ++i) {
      const double w = bx.values[i] * bt.values[j];
      u += w * sol.u(bx.first_active + i, bt.first_active + j);
      v += w * sol.v(bx.first_active + i, bt.first_active + j);
    }
  if (d_t == 0) {
    if (d_x == 0) {
      u += sol.shift.u0(x);
      v += sol.shift.v0(x);
    } else {
      u += sol.shift.u0_x(x);
      if (!sol.shift.v0_x) throw Error(ErrorCode::InvalidArgument, "V0 derivative unavailable");
      v += sol.shift.v0_x(x);
    }
  }
  return {u, v};
}

double galerkin_residual(const DiscreteSolution& sol, const BlockSystem& s) {
  const SplineSpace& sx = sol.space_x;
  const SplineSpace& st = sol.space_t;
  const int n_x = sx.dim(), n_t = st.dim();
  const int np = s.n_points;
  const QuadratureRule rule = gauss_rule(np > 0 ? np : std::max(sx.degree(), st.degree()) + 2);
  const QuadratureRule rule_t =
      gauss_rule(np > 0 ? np : weighted_points(st.degree(), max_element_length(st), s.T));

  // Pointwise values of the shifted fields; the shift never enters A because
  // it has been moved to the right-hand side.
  Eigen::VectorXd form = Eigen::VectorXd::Zero(2 * n_x * n_t);
  const int nax = sx.degree() + 1, nat = st.degree() + 1;
  for (int et = 0; et < st.n_elements(); ++et) {
    const auto tb = detail::element_basis(st, et, rule_t, 1);
    for (int ex = 0; ex < sx.n_elements(); ++ex) {
      const auto xb = detail::element_basis(sx, ex, rule, 1);
      for (int qt = 0; qt < tb.n_nodes(); ++qt) {
        const double wt = tb.w[qt] * std::exp(-tb.x[qt] / s.T);
        for (int qx = 0; qx < xb.n_nodes(); ++qx) {
          double u_x = 0, u_t = 0, v = 0, v_t = 0;
          for (int k = 0; k < nat; ++k) {
            const int gk = st.retained_index(tb.first_unconstrained + k);
            if (gk < 0) continue;
            for (int i = 0; i < nax; ++i) {
              const int gi = sx.retained_index(xb.first_unconstrained + i);
              if (gi < 0) continue;
              const double uc = sol.u(gi, gk), vc = sol.v(gi, gk);
              u_x += uc * xb(qx, 1, i) * tb(qt, 0, k);
              u_t += uc * xb(qx, 0, i) * tb(qt, 1, k);
              v += vc * xb(qx, 0, i) * tb(qt, 0, k);
              v_t += vc * xb(qx, 0, i) * tb(qt, 1, k);
            }
          }
          const double w = wt * xb.w[qx];
          const double c2 = s.c2(xb.x[qx]);
          for (int b = 0; b < nat; ++b) {
            const int gb = st.retained_index(tb.first_unconstrained + b);
            if (gb < 0) continue;
            const double tst = tb(qt, 1, b);
            for (int a = 0; a < nax; ++a) {
              const int ga = sx.retained_index(xb.first_unconstrained + a);
              if (ga < 0) continue;
              const double psi = xb(qx, 0, a), dpsi = xb(qx, 1, a);
              form[gb * n_x + ga] += w * tst * (v_t * psi + c2 * u_x * dpsi);
              form[n_x * n_t + gb * n_x + ga] += w * tst * (-u_t + v) * psi;
            }
          }
        }
      }
    }
  }
  const double rn = s.rhs.norm();
  return (form - s.rhs).norm() / (rn > 0.0 ? rn : 1.0);
}

void write_solution(std::ostream& os, const DiscreteSolution& sol) {
  auto space_line = [&](const char* name, const SplineSpace& s) {
    os << "# " << name << " degree=" << s.degree() << " multiplicity=" << s.knots().multiplicity()
       << " constraint=" << to_string(s.constraint()) << " breakpoints=";
    const auto& bp = s.knots().breakpoints();
    for (std::size_t i = 0; i < bp.size(); ++i) os << (i ? "," : "") << bp[i];
    os << '\n';
  };
  const auto old_prec = os.precision(17);
  os << "# xtwave-solution v1\n";
  os << "# T=" << sol.T << '\n';
  space_line("space_x", sol.space_x);
  space_line("space_t", sol.space_t);
  os << "# block,i_x,i_t,value\n";
  for (int block = 0; block < 2; ++block) {
    const Eigen::MatrixXd& c = block == 0 ? sol.u : sol.v;
    for (int it = 0; it < c.cols(); ++it)
      for (int ix = 0; ix < c.rows(); ++ix)
        os << (block == 0 ? 'U' : 'V') << ',' << ix << ',' << it << ',' << c(ix, it) << '\n';
  }
  os.precision(old_prec);
}

namespace {

SplineSpace parse_space_line(const std::string& line) {
  std::istringstream ss(line);
  std::string hash, name, tok;
  ss >> hash >> name;
  int degree = -1, mult = -1;
  Constraint c = Constraint::None;
  std::vector<double> bp;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "bad header token '" + tok + "'");
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "degree") degree = std::stoi(val);
    else if (key == "multiplicity") mult = std::stoi(val);
    else if (key == "constraint") c = constraint_from_string(val);
    else if (key == "breakpoints") {
      std::istringstream vs(val);
      std::string item;
      while (std::getline(vs, item, ',')) bp.push_back(std::stod(item));
    } else throw Error(ErrorCode::ParseError, "unknown header key '" + key + "'");
  }
  return SplineSpace(KnotVector(bp, degree, mult), c);
}

}  // namespace

SolutionDump read_solution(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "# xtwave-solution v1")
    throw Error(ErrorCode::ParseError, "missing solution header");
  double T = 0.0;
  std::optional<SplineSpace> sx, st;
  while (std::getline(is, line)) {
    if (line.rfind("# T=", 0) == 0) T = std::stod(line.substr(4));
    else if (line.rfind("# space_x ", 0) == 0) sx = parse_space_line(line);
    else if (line.rfind("# space_t ", 0) == 0) st = parse_space_line(line);
    else if (line == "# block,i_x,i_t,value") break;
    else throw Error(ErrorCode::ParseError, "unexpected header line '" + line + "'");
  }
  if (!sx || !st) throw Error(ErrorCode::ParseError, "solution header lacks space metadata");
  SolutionDump d{*sx, *st, T, Eigen::MatrixXd::Zero(sx->dim(), st->dim()),
                 Eigen::MatrixXd::Zero(sx->dim(), st->dim())};
  std::size_t seen = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string block, ix, it, val;
    if (!std::getline(ls, block, ',') || !std::getline(ls, ix, ',') || !std::getline(ls, it, ',') ||
        !std::getline(ls, val))
      throw Error(ErrorCode::ParseError, "malformed coefficient line '" + line + "'");
    const int i = std::stoi(ix), j = std::stoi(it);
    if (i < 0 || i >= sx->dim() || j < 0 || j >= st->dim())
      throw Error(ErrorCode::ParseError, "coefficient index out of range");
    Eigen::MatrixXd& target = block == "U" ? d.u : (block == "V" ? d.v : throw Error(ErrorCode::ParseError, "bad block '" + block + "'"));
    target(i, j) = std::stod(val);
    ++seen;
  }
  if (seen != static_cast<std::size_t>(2 * sx->dim() * st->dim()))
    throw Error(ErrorCode::ParseError, "coefficient count does not match the spaces");
  return d;
}

}  // namespace xtwave
