#include "dmzkit/hydro.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>

#include <cmath>
#include <sstream>

namespace dmzkit {

Expr Connection::at(int i, int j) const {
  auto it = gamma.find({i, j});
  return it == gamma.end() ? Expr(0) : it->second;
}

Connection diagonal_connection(const HydroSystem& V) {
  if (V.v.size() != V.n()) throw std::invalid_argument("one velocity per Riemann invariant");
  Connection G;
  int n = static_cast<int>(V.n());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Expr d = canonicalize(V.v[j] - V.v[i]);
      if (vanishes(d))
        throw HyperbolicityError("v" + std::to_string(i + 1) + " and v" + std::to_string(j + 1) +
                                 " coincide identically; the system is not strongly hyperbolic");
      if (!free_symbols(d).empty())
        G.warnings.push_back("degenerate where v" + std::to_string(j + 1) + " - v" + std::to_string(i + 1) +
                             " = " + to_string(d) + " vanishes");
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) G.gamma[{i, j}] = canonicalize(diff(V.v[i], V.vars[j]) / (V.v[j] - V.v[i]));
  return G;
}

Connection connection_of(const DmzSystem& S) {
  Connection G;
  int n = static_cast<int>(S.n());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) G.gamma[{i, j}] = S.gamma(i, i, j);
  return G;
}

DmzSystem induced_dmz(const std::vector<std::string>& vars, const Connection& G) {
  DmzSystem S(vars);
  int n = static_cast<int>(vars.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) S.set_gamma(i, i, j, G.at(i, j));
  return S;
}

std::vector<Residual> semihamiltonian_residuals(const HydroSystem& V) {
  std::vector<Residual> out;
  if (V.n() < 3) return out;
  Connection G = diagonal_connection(V);
  int n = static_cast<int>(V.n());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (i != j && j != k && i != k)
          out.push_back({index_label("semiham", {i, j, k}),
                         diff(G.at(i, j), V.vars[k]) - diff(G.at(i, k), V.vars[j])});
  return out;
}

std::vector<Residual> commuting_flow_residuals(const std::vector<std::string>& vars, const Connection& G,
                                               const std::vector<Expr>& w) {
  if (w.size() != vars.size()) throw std::invalid_argument("one flow component per Riemann invariant");
  std::vector<Residual> out;
  int n = static_cast<int>(vars.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) out.push_back({index_label("commute", {i, j}), diff(w[i], vars[j]) - G.at(i, j) * (w[j] - w[i])});
  return out;
}

std::vector<Residual> commuting_flow_residuals(const HydroSystem& V, const std::vector<Expr>& w) {
  return commuting_flow_residuals(V.vars, diagonal_connection(V), w);
}

std::vector<Residual> conserved_density_residuals(const HydroSystem& V, const Expr& P) {
  Connection G = diagonal_connection(V);
  std::vector<Residual> out;
  int n = static_cast<int>(V.n());
  const auto& u = V.vars;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      out.push_back({index_label("density", {i, j}), diff(diff(P, u[i]), u[j]) - G.at(i, j) * diff(P, u[i]) -
                                                         G.at(j, i) * diff(P, u[j])});
  return out;
}

std::vector<Expr> three_component_flow(const std::vector<std::string>& coords, const std::vector<Expr>& ts,
                                       const std::vector<Expr>& f, const std::string& s) {
  if (coords.size() != 3 || f.size() != 3) throw std::invalid_argument("three coordinates and three functions");
  std::vector<Expr> u = ts;
  if (u.empty())
    for (auto& c : coords) u.push_back(Expr::sym(c));
  if (u.size() != 3) throw std::invalid_argument("three reparametrizations");
  auto F = [&](int i) { return substitute(f[i], {{s, u[i]}}); };
  auto dF = [&](int i) { return substitute(diff(f[i], s), {{s, u[i]}}); };
  Expr common = F(0) - F(1) + F(2);
  return {canonicalize(((u[1] - u[0]) * dF(0) + common) / (u[2] - u[1])),
          canonicalize(((u[1] - u[0]) * dF(1) + common) / (u[2] - u[0])), canonicalize(dF(2))};
}

HydroSystem hydro_from_dmz(const DmzSystem& S, const std::vector<Expr>& f, const std::vector<Expr>& ts,
                           const std::string& s) {
  if (S.n() != 3) throw UnsupportedFamily("only three-component systems have a registered closed form");
  if (S.has_c()) throw UnsupportedFamily("the system must have C = 0");
  HydroSystem V{S.coords(), three_component_flow(S.coords(), ts, f, s)};
  auto r = summarize(commuting_flow_residuals(S.coords(), connection_of(S), V.v));
  if (!r.ok)
    throw UnsupportedFamily("the coefficients are not in a registered closed-form family (" + r.describe() +
                            "); supply the flow directly and use commuting_flow_residuals");
  return V;
}

// ---------------------------------------------------------------------------

namespace {

using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

const std::string kX = "@x", kT = "@t";

struct Problem {
  std::vector<std::string> vars;
  std::vector<Expr> F;                  // w^i - v^i t - x
  std::vector<std::vector<Expr>> J;     // dF_i / du_k
  std::vector<Expr> v;

  Problem(const HydroSystem& V, const std::vector<Expr>& w) : vars(V.vars), v(V.v) {
    std::size_t n = V.n();
    if (w.size() != n || V.v.size() != n) throw std::invalid_argument("one flow component per Riemann invariant");
    for (std::size_t i = 0; i < n; ++i) {
      F.push_back(normal_form(w[i] - V.v[i] * Expr::sym(kT) - Expr::sym(kX)));
      J.emplace_back();
      for (std::size_t k = 0; k < n; ++k) J.back().push_back(diff(F.back(), vars[k]));
    }
  }

  RealAssignment point(const Vec& u, const Real& x, const Real& t) const {
    RealAssignment a{{kX, x}, {kT, t}};
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = u[static_cast<Eigen::Index>(i)];
    return a;
  }

  // Max-norm of F; infinity at poles.
  Real norm(const Vec& u, const Real& x, const Real& t, Vec* out = nullptr) const {
    auto a = point(u, x, t);
    Vec f(static_cast<Eigen::Index>(F.size()));
    Real m = 0;
    try {
      for (std::size_t i = 0; i < F.size(); ++i) {
        f[static_cast<Eigen::Index>(i)] = eval_real(F[i], a);
        m = std::max(m, Real(abs(f[static_cast<Eigen::Index>(i)])));
      }
    } catch (const PoleError&) {
      return std::numeric_limits<Real>::infinity();
    }
    if (out) *out = f;
    return m;
  }

  Mat jacobian(const Vec& u, const Real& x, const Real& t) const {
    auto a = point(u, x, t);
    Eigen::Index n = static_cast<Eigen::Index>(F.size());
    Mat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < n; ++k) m(i, k) = eval_real(J[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)], a);
    return m;
  }
};

struct NewtonOut {
  Vec u;
  Real residual;
  int iterations = 0;
};

NewtonOut newton(const Problem& P, Vec u, const Real& x, const Real& t, const HodographOptions& opt) {
  Real target = pow(Real(2), -static_cast<int>(opt.precision) / 2);
  Vec f;
  Real r = P.norm(u, x, t, &f);
  if (!isfinite(r)) throw HodographError("the initial guess is at a pole");
  int it = 0;
  for (; it < opt.max_iterations && r > target; ++it) {
    Mat J = P.jacobian(u, x, t);
    Eigen::FullPivLU<Mat> lu(J);
    lu.setThreshold(pow(Real(2), -static_cast<int>(opt.precision) / 2));
    if (lu.rank() < J.rows()) {
      std::ostringstream os;
      os << "singular Jacobian at u = (";
      for (Eigen::Index i = 0; i < u.size(); ++i) os << (i ? ", " : "") << u[i].str(12);
      os << ")";
      throw HodographError(os.str());
    }
    Vec d = lu.solve(f);
    Real lambda = 1;
    Vec trial, ft;
    Real rt;
    for (int h = 0; h < 40; ++h, lambda /= 2) {
      trial = u - lambda * d;
      rt = P.norm(trial, x, t, &ft);
      if (rt < r) break;
    }
    if (!(rt < r)) break;  // no progress along the Newton direction
    u = trial, f = ft, r = rt;
  }
  if (!(r < Real(opt.tolerance)))
    throw HodographError("Newton did not converge after " + std::to_string(it) + " iterations (residual " +
                         r.str(6) + ")");
  return {u, r, it};
}

Real from_q(const mpq_class& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

mpq_class to_q(const Real& r) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), r.backend().data());
  return q;
}

// Continued-fraction convergents of r with denominators up to 10^6 that
// agree with r to high accuracy.
std::optional<mpq_class> rationalize(const Real& r) {
  mpq_class x = to_q(r);
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  mpq_class rest = x;
  for (int k = 0; k < 64; ++k) {
    mpz_class a = rest.get_num() / rest.get_den();
    if (rest < 0 && a * rest.get_den() != rest.get_num()) a -= 1;
    mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > 1000000) break;
    mpq_class c(p2, q2);
    c.canonicalize();
    mpq_class err = c - x;
    if (abs(err) < mpq_class(1, mpz_class(1) << 120)) return c;
    mpq_class frac = rest - mpq_class(a);
    if (frac == 0) return c;
    rest = 1 / frac;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
  }
  return std::nullopt;
}

}  // namespace

HodographResult hodograph_solve(const HydroSystem& V, const std::vector<Expr>& w, const mpq_class& x,
                                const mpq_class& t, const std::vector<mpq_class>& guess,
                                const HodographOptions& opt) {
  PrecisionScope scope(opt.precision);
  Problem P(V, w);
  std::size_t n = V.n();
  if (guess.size() != n) throw std::invalid_argument("the initial guess needs one value per Riemann invariant");
  Vec u0(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) u0[static_cast<Eigen::Index>(i)] = from_q(guess[i]);
  Real X = from_q(x), T = from_q(t);

  HodographResult res;
  res.x = X;
  res.t = T;
  NewtonOut c = newton(P, u0, X, T, opt);
  res.u.assign(c.u.data(), c.u.data() + c.u.size());
  res.residual = c.residual;
  res.iterations = c.iterations;

  // Exact polishing: keep a rational root only if it solves the system exactly.
  std::vector<mpq_class> q;
  for (auto& ui : res.u) {
    auto r = rationalize(ui);
    if (!r) break;
    q.push_back(*r);
  }
  if (q.size() == n) {
    Assignment a{{kX, x}, {kT, t}};
    for (std::size_t i = 0; i < n; ++i) a[V.vars[i]] = q[i];
    try {
      bool ok = true;
      for (auto& f : P.F) ok = ok && eval_exact(f, a) == 0;
      if (ok) res.exact = q;
    } catch (const std::exception&) {
      // not in the rational fragment, or a pole at the candidate
    }
  }

  {
    auto a = P.point(c.u, X, T);
    Real eps = pow(Real(2), -static_cast<int>(opt.precision) / 4);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (abs(eval_real(V.v[i] - V.v[j], a)) < eps) {
          res.strongly_hyperbolic = false;
          res.warnings.push_back("v" + std::to_string(i + 1) + " = v" + std::to_string(j + 1) +
                                 " at the solution; the system is not strongly hyperbolic there");
        }
  }

  res.max_pde_residual = 0;
  if (opt.grid) {
    Real h(opt.grid_step), d(opt.fd_step);
    for (int ia = -2; ia <= 2; ++ia)
      for (int ib = -2; ib <= 2; ++ib) {
        HodographPoint pt;
        pt.x = X + ia * h;
        pt.t = T + ib * h;
        NewtonOut s = newton(P, c.u, pt.x, pt.t, opt);
        Vec up = newton(P, s.u, pt.x + d, pt.t, opt).u, um = newton(P, s.u, pt.x - d, pt.t, opt).u;
        Vec tp = newton(P, s.u, pt.x, pt.t + d, opt).u, tm = newton(P, s.u, pt.x, pt.t - d, opt).u;
        auto a = P.point(s.u, pt.x, pt.t);
        Real worst = 0;
        for (std::size_t i = 0; i < n; ++i) {
          auto k = static_cast<Eigen::Index>(i);
          Real ux = (up[k] - um[k]) / (2 * d), ut = (tp[k] - tm[k]) / (2 * d);
          worst = std::max(worst, Real(abs(ut - eval_real(V.v[i], a) * ux)));
        }
        pt.u.assign(s.u.data(), s.u.data() + s.u.size());
        pt.residual = s.residual;
        pt.pde_residual = worst;
        res.max_pde_residual = std::max(res.max_pde_residual, worst);
        res.grid.push_back(std::move(pt));
      }
    if (res.max_pde_residual > Real(opt.fd_tolerance))
      res.warnings.push_back("finite-difference PDE residual " + res.max_pde_residual.str(6) + " exceeds tolerance");
  }
  return res;
}

std::string to_csv(const HydroSystem& V, const HodographResult& r, bool with_grid) {
  std::ostringstream os;
  os << "x,t";
  for (std::size_t i = 0; i < V.n(); ++i) os << ",u" << i + 1;
  os << ",residual\n";
  auto row = [&](const Real& x, const Real& t, const std::vector<Real>& u, const Real& res) {
    os << x.str(17) << ',' << t.str(17);
    for (auto& ui : u) os << ',' << ui.str(20);
    os << ',' << res.str(6, std::ios_base::scientific) << '\n';
  };
  if (with_grid && !r.grid.empty())
    for (auto& p : r.grid) row(p.x, p.t, p.u, p.pde_residual);
  else
    row(r.x, r.t, r.u, r.residual);
  return os.str();
}

}  // namespace dmzkit
