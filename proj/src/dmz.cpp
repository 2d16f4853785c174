#include "dmzkit/dmz.hpp"

#include <sstream>

namespace dmzkit {

void DmzSystem::check(int i) const {
  if (i < 0 || static_cast<std::size_t>(i) >= coords_.size()) throw std::out_of_range("index out of range");
}

Expr DmzSystem::gamma(int k, int i, int j) const {
  check(k), check(i), check(j);
  auto it = g_.find({k, std::min(i, j), std::max(i, j)});
  return it == g_.end() ? Expr(0) : it->second;
}

void DmzSystem::set_gamma(int k, int i, int j, const Expr& e) {
  check(k), check(i), check(j);
  if (i == j) throw std::invalid_argument("Gamma^k_ii is not part of a DMZ system");
  g_[{k, std::min(i, j), std::max(i, j)}] = e;
}

Expr DmzSystem::c(int i, int j) const {
  check(i), check(j);
  auto it = c_.find({std::min(i, j), std::max(i, j)});
  return it == c_.end() ? Expr(0) : it->second;
}

void DmzSystem::set_c(int i, int j, const Expr& e) {
  check(i), check(j);
  if (i == j) throw std::invalid_argument("C_ii is not part of a DMZ system");
  c_[{std::min(i, j), std::max(i, j)}] = e;
}

bool DmzSystem::has_c() const {
  for (auto& [k, e] : c_)
    if (!normal_form(e).is_zero()) return true;
  return false;
}

std::vector<std::array<int, 3>> DmzSystem::off_index() const {
  std::vector<std::array<int, 3>> out;
  for (auto& [key, e] : g_)
    if (key[0] != key[1] && key[0] != key[2] && !is_zero(e).zero()) out.push_back(key);
  return out;
}

namespace {

// Coefficient tables as rational functions in the coordinate symbols.
struct Tables {
  std::size_t n;
  std::vector<Var> x;
  std::vector<RatFunc> g;  // g[(k*n + i)*n + j]
  std::vector<RatFunc> c;  // c[i*n + j]

  explicit Tables(const DmzSystem& S) : n(S.n()), g(n * n * n), c(n * n) {
    for (auto& name : S.coords()) x.push_back(symbol_var(name));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) G(k, i, j) = to_rat(canonicalize(S.gamma(k, i, j)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) C(i, j) = to_rat(canonicalize(S.c(i, j)));
  }
  RatFunc& G(std::size_t k, std::size_t i, std::size_t j) { return g[(k * n + i) * n + j]; }
  RatFunc& C(std::size_t i, std::size_t j) { return c[i * n + j]; }
  RatFunc d(const RatFunc& r, std::size_t i) const { return r.diff(x[i]); }
};

}  // namespace

std::vector<Residual> integrability_residuals(const DmzSystem& S) {
  std::vector<Residual> out;
  std::size_t n = S.n();
  if (n < 3) return out;
  Tables t(S);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        int I = static_cast<int>(i), J = static_cast<int>(j), K = static_cast<int>(k);
        RatFunc dG = t.d(t.G(j, i, j), k);
        RatFunc f1 = dG - t.G(k, i, k) * t.G(j, k, j) - t.G(i, k, i) * t.G(j, i, j) +
                     t.G(j, i, j) * t.G(j, k, j) + t.C(i, k);
        out.push_back({index_label("gamma", {I, J, K}), to_expr(f1)});
        RatFunc f2 = dG - t.d(t.G(j, k, j), i);
        out.push_back({index_label("curl", {I, J, K}), to_expr(f2)});
        RatFunc f3 = t.d(t.C(i, j), k) - t.d(t.C(i, k), j) + t.C(k, j) * (t.G(j, i, j) - t.G(k, i, k)) +
                     t.G(i, i, j) * t.C(i, k) - t.G(i, i, k) * t.C(i, j);
        out.push_back({index_label("C", {I, J, K}), to_expr(f3)});
      }
  return out;
}

std::string InvolutivityReport::describe() const {
  std::ostringstream os;
  os << (ok ? "involutive" : "not involutive") << "\n  " << residuals.describe();
  for (auto& s : off_index) os << "\n  nonzero off-index coefficient " << s;
  if (ok) os << "\n  general solution depends on " << functions << " functions of one variable";
  return os.str();
}

InvolutivityReport is_involutive(const DmzSystem& S) {
  InvolutivityReport rep;
  for (auto& k : S.off_index())
    rep.off_index.push_back("Gamma^" + std::to_string(k[0] + 1) + "_" + std::to_string(k[1] + 1) +
                            std::to_string(k[2] + 1));
  rep.residuals = summarize(integrability_residuals(S));
  rep.ok = rep.residuals.ok && rep.off_index.empty();
  rep.functions = S.n();
  return rep;
}

// ---------------------------------------------------------------------------

Expr GdmzSystem::rhs(int i, int j) const {
  auto it = f.find({std::min(i, j), std::max(i, j)});
  return it == f.end() ? Expr(0) : it->second;
}

std::vector<Residual> gdmz_compatibility_residuals(const GdmzSystem& S) {
  std::vector<Residual> out;
  std::size_t n = S.coords.size();
  if (n < 3) return out;
  std::vector<Var> x, u1;
  for (std::size_t i = 0; i < n; ++i) {
    x.push_back(symbol_var(S.coords[i]));
    u1.push_back(symbol_var(S.d1(static_cast<int>(i))));
  }
  Var u = symbol_var(S.dep);
  std::vector<RatFunc> f(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      f[i * n + j] = i == j ? RatFunc::var(symbol_var(S.d2(static_cast<int>(i), static_cast<int>(i))))
                            : to_rat(canonicalize(S.rhs(static_cast<int>(i), static_cast<int>(j))));
  auto D = [&](const RatFunc& F, std::size_t k) {
    RatFunc r = F.diff(x[k]) + RatFunc::var(u1[k]) * F.diff(u);
    for (std::size_t l = 0; l < n; ++l) {
      RatFunc d = F.diff(u1[l]);
      if (!d.is_zero()) r += f[k * n + l] * d;
    }
    return r;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        RatFunc r = D(f[i * n + j], k) - D(f[i * n + k], j);
        out.push_back({index_label("compat", {static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)}),
                       to_expr(r)});
      }
  return out;
}

DmzSystem gdmz_to_dmz(const GdmzSystem& S) {
  std::size_t n = S.coords.size();
  DmzSystem D(S.coords);
  std::vector<Var> w{symbol_var(S.dep)};
  for (std::size_t i = 0; i < n; ++i) w.push_back(symbol_var(S.d1(static_cast<int>(i))));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      int I = static_cast<int>(i), J = static_cast<int>(j);
      RatFunc F = to_rat(canonicalize(S.rhs(I, J)));
      std::string lab = "f_" + std::to_string(i + 1) + std::to_string(j + 1);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (F.depends_on(symbol_var(S.d2(static_cast<int>(a), static_cast<int>(b)))))
            throw NonlinearError(lab + " contains a second derivative");
      std::vector<RatFunc> lin;
      RatFunc rest = F;
      for (std::size_t a = 0; a < w.size(); ++a) {
        RatFunc da = F.diff(w[a]);
        for (std::size_t b = a; b < w.size(); ++b) {
          RatFunc dab = da.diff(w[b]);
          if (!dab.is_zero())
            throw NonlinearError(lab + " is not affine: second derivative in " + var_name(w[a]) + ", " +
                                 var_name(w[b]) + " is " + to_string(to_expr(dab)));
        }
        lin.push_back(da);
        rest -= da * RatFunc::var(w[a]);
      }
      if (!rest.is_zero()) throw NonlinearError(lab + " has an inhomogeneous term " + to_string(to_expr(rest)));
      D.set_c(I, J, to_expr(-lin[0]));
      for (std::size_t k = 0; k < n; ++k)
        if (!lin[k + 1].is_zero() || k == i || k == j) D.set_gamma(static_cast<int>(k), I, J, to_expr(lin[k + 1]));
    }
  return D;
}

GdmzSystem dmz_to_gdmz(const DmzSystem& S, const std::string& dep) {
  GdmzSystem G;
  G.coords = S.coords();
  G.dep = dep;
  int n = static_cast<int>(S.n());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Expr f = -S.c(i, j) * Expr::sym(dep);
      for (int k = 0; k < n; ++k) f += S.gamma(k, i, j) * Expr::sym(G.d1(k));
      G.f[{i, j}] = normal_form(f);
    }
  return G;
}

// ---------------------------------------------------------------------------

Expr integrate_log(const Expr& r, const std::string& var) {
  using R = IntegrationError::Reason;
  RatFunc q = to_rat(canonicalize(r));
  if (q.is_zero()) return Expr(1);
  for (Var v : q.vars())
    if (is_kernel(v)) throw IntegrationError(R::NonRationalIntegrand, "integrand is not rational: " + to_string(r));
  Var t = symbol_var(var);
  const Poly& N = q.num();
  const Poly& D = q.den();
  if (!D.has_var(t))
    throw IntegrationError(R::NonElementaryAntiderivative,
                           "antiderivative in " + var + " of " + to_string(r) + " is not logarithmic");
  Poly Dt = D.diff(t);
  RatFunc acc(1);
  for (long c = 1; c <= 12; ++c)
    for (long s : {c, -c}) {
      Poly g = gcd(D, N - Dt * mpz_class(s));
      if (g.has_var(t)) acc *= RatFunc::from_poly(g).pow(s);
    }
  if (!(acc.diff(t) - q * acc).is_zero())
    throw IntegrationError(R::NonElementaryAntiderivative,
                           "no rational potential in " + var + " for " + to_string(r));
  return to_expr(acc);
}

LamePotentials lame_potentials(const DmzSystem& S) {
  if (S.has_c()) throw std::invalid_argument("Lame potentials need a system with C = 0");
  std::size_t n = S.n();
  std::vector<Var> x;
  for (auto& c : S.coords()) x.push_back(symbol_var(c));
  LamePotentials out;
  for (std::size_t j = 0; j < n; ++j) {
    RatFunc h(1);
    std::vector<std::size_t> done;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      RatFunc g = to_rat(canonicalize(S.gamma(static_cast<int>(j), static_cast<int>(i), static_cast<int>(j))));
      RatFunc rest = g - h.diff(x[i]) / h;
      for (auto d : done)
        if (rest.depends_on(x[d]))
          throw IntegrationError(IntegrationError::Reason::NotClosed,
                                 "Gamma^" + std::to_string(j + 1) + "_i" + std::to_string(j + 1) +
                                     " dx_i is not closed");
      h *= to_rat(integrate_log(to_expr(rest), S.coords()[i]));
      done.push_back(i);
    }
    Poly num = h.num(), den = h.den();
    mpz_class cn = num.content(), cd = den.content();
    out.h.push_back(normal_form(to_expr(RatFunc(num.div_exact(cn), den.div_exact(cd)))));
  }
  return out;
}

std::vector<Residual> lame_residuals(const DmzSystem& S, const LamePotentials& h) {
  std::vector<Residual> out;
  int n = static_cast<int>(S.n());
  if (h.h.size() != S.n()) throw std::invalid_argument("one potential per coordinate");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        out.push_back({index_label("lame", {i, j}), h.h[j] * S.gamma(j, i, j) - diff(h.h[j], S.coords()[i])});
  return out;
}

bool verify_lame(const DmzSystem& S, const LamePotentials& h) { return summarize(lame_residuals(S, h)).ok; }

std::vector<Residual> lame_residuals_squared(const DmzSystem& S, const std::vector<Expr>& g) {
  std::vector<Residual> out;
  int n = static_cast<int>(S.n());
  if (g.size() != S.n()) throw std::invalid_argument("one potential per coordinate");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        out.push_back({index_label("lame2", {i, j}), Expr(2) * g[j] * S.gamma(j, i, j) - diff(g[j], S.coords()[i])});
  return out;
}

bool potentials_equivalent(const std::vector<std::string>& coords, const LamePotentials& a, const LamePotentials& b) {
  if (a.h.size() != coords.size() || b.h.size() != coords.size()) return false;
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if (is_zero(b.h[j]).zero()) return false;
    Expr q = a.h[j] / b.h[j];
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (i != j && !is_zero(diff(q, coords[i])).zero()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

ConstructResult construct_gdmz(const std::vector<Distribution>& parts, const std::vector<std::string>& xs,
                               const Expr& p, const std::map<std::string, Expr>& inverse, const std::string& dep) {
  ConstructResult res;
  std::size_t n = parts.size();
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    res.checks.push_back({std::move(name), ok, std::move(detail)});
  };
  auto done = [&]() {
    res.ok = true;
    for (auto& c : res.checks) res.ok = res.ok && c.ok;
    return res;
  };
  if (xs.size() != n) throw std::invalid_argument("one independent coordinate per part");
  const ChartPtr& chart = parts.at(0).chart();
  GdmzSystem& G = res.system;
  G.coords = xs;
  G.dep = dep;
  for (int i = 0; i < static_cast<int>(n); ++i)
    if (chart->index(G.d1(i)) >= 0) throw std::invalid_argument("jet symbol " + G.d1(i) + " clashes with a chart coordinate");
  if (chart->index(dep) >= 0) throw std::invalid_argument("dependent name " + dep + " clashes with a chart coordinate");

  res.hyperbolic = check_n_hyperbolic(parts);
  add("n-hyperbolic", res.hyperbolic.ok);
  if (!res.hyperbolic.ok) return done();

  bool shape = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Expr xj = Expr::sym(xs[j]);
      shape = shape && parts[i].fields()[0].apply(xj) == Expr(i == j ? 1 : 0) &&
              parts[i].fields()[1].apply(xj).is_zero();
    }
  add("adapted basis: X_i(x_j) = delta_ij, V_i(x_j) = 0", shape);

  std::vector<Expr> inv_fns;
  for (auto& x : xs) inv_fns.push_back(Expr::sym(x));
  inv_fns.push_back(p);
  auto ir = verify_invariants_report(adapted_A(parts), inv_fns);
  std::string why;
  for (auto& c : ir.checks)
    if (!c.ok) why += c.name + " " + c.detail + "; ";
  add("x_i and p are the invariants of A", ir.ok, why);
  res.notes.push_back("moving-frame equivariance: assumed");

  for (std::size_t i = 0; i < n; ++i) res.p1.push_back(parts[i].fields()[0].apply(p));
  bool vert = true;
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k) vert = vert && is_zero(parts[l].fields()[1].apply(res.p1[k])).zero();
  add("d p_k / d u_l = 0", vert);

  bool sym = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Expr fij = parts[j].fields()[0].apply(res.p1[i]);
      Expr fji = parts[i].fields()[0].apply(res.p1[j]);
      sym = sym && is_zero(fij - fji).zero();
      res.p2[{static_cast<int>(i), static_cast<int>(j)}] = fij;
    }
  add("f_ij = f_ji", sym);

  bool rt = is_zero(substitute(p, inverse) - Expr::sym(dep)).zero();
  for (std::size_t i = 0; i < n; ++i)
    rt = rt && is_zero(substitute(res.p1[i], inverse) - Expr::sym(G.d1(static_cast<int>(i)))).zero();
  add("inverse substitution round trip", rt);

  std::set<std::string> allowed(xs.begin(), xs.end());
  allowed.insert(dep);
  for (int i = 0; i < static_cast<int>(n); ++i) allowed.insert(G.d1(i));
  std::string stray;
  for (auto& [ij, fij] : res.p2) {
    Expr f = canonicalize(substitute(fij, inverse));
    G.f[ij] = f;
    for (auto& s : free_symbols(f))
      if (!allowed.count(s)) stray += s + " ";
  }
  add("f_ij depend only on x, " + dep + " and first derivatives", stray.empty(), stray);

  auto cs = summarize(gdmz_compatibility_residuals(G));
  add("compatibility residuals vanish", cs.ok, cs.describe());
  return done();
}

}  // namespace dmzkit
