#include "dmzkit/gauge.hpp"

namespace dmzkit {

Expr op_gamma(const DmzSystem& D, int i, int j) { return D.gamma(j, i, j); }
void set_op_gamma(DmzSystem& D, int i, int j, const Expr& e) { D.set_gamma(j, i, j, e); }

namespace {

int dim(const DmzSystem& D) { return static_cast<int>(D.n()); }

// Copies D and replaces the in-index coefficients and C by the given ones.
DmzSystem rebuild(const DmzSystem& D, const std::map<std::pair<int, int>, Expr>& g,
                  const std::map<std::pair<int, int>, Expr>& c) {
  DmzSystem out(D.coords());
  for (auto& [key, e] : D.gammas())
    if (key[0] != key[1] && key[0] != key[2]) out.set_gamma(key[0], key[1], key[2], e);
  for (auto& [ij, e] : g) set_op_gamma(out, ij.first, ij.second, e);
  for (auto& [ij, e] : c) out.set_c(ij.first, ij.second, e);
  return out;
}

// Shared by both gauge forms: a_i stands for d_i log(m), b_ij for d_i d_j m / m.
template <class A, class B>
DmzSystem conjugate(const DmzSystem& D, A a, B b) {
  std::map<std::pair<int, int>, Expr> g, c;
  int n = dim(D);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) g[{i, j}] = canonicalize(op_gamma(D, i, j) - a(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      c[{i, j}] = canonicalize(b(i, j) - op_gamma(D, j, i) * a(i) - op_gamma(D, i, j) * a(j) + D.c(i, j));
  return rebuild(D, g, c);
}

}  // namespace

DmzSystem gauge_by_multiplier(const DmzSystem& D, const Expr& m) {
  if (vanishes(m)) throw GaugeError("gauge multiplier is identically zero");
  const auto& x = D.coords();
  return conjugate(
      D, [&](int i) { return diff(m, x[i]) / m; },
      [&](int i, int j) { return diff(diff(m, x[i]), x[j]) / m; });
}

DmzSystem gauge_transform(const DmzSystem& D, const Expr& lambda) {
  const auto& x = D.coords();
  return conjugate(
      D, [&](int i) { return -diff(lambda, x[i]); },
      [&](int i, int j) { return diff(lambda, x[i]) * diff(lambda, x[j]) - diff(diff(lambda, x[i]), x[j]); });
}

std::map<std::pair<int, int>, Expr> gauge_invariants(const DmzSystem& D) {
  std::map<std::pair<int, int>, Expr> h;
  int n = dim(D);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        h[{i, j}] = canonicalize(diff(op_gamma(D, i, j), D.coords()[j]) - op_gamma(D, i, j) * op_gamma(D, j, i) +
                                 D.c(i, j));
  return h;
}

std::vector<Residual> residual_operator_apply(const DmzSystem& D, const Expr& u) {
  std::vector<Residual> out;
  int n = dim(D);
  const auto& x = D.coords();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Expr r = diff(diff(u, x[i]), x[j]) + D.c(i, j) * u;
      for (int k = 0; k < n; ++k) r -= D.gamma(k, i, j) * diff(u, x[k]);
      out.push_back({index_label("L", {i, j}), r});
    }
  return out;
}

DmzSystem to_threewave_gauge(const DmzSystem& D, const Expr& u) {
  if (vanishes(u)) throw GaugeError("the solution u must be nonzero");
  auto s = summarize(residual_operator_apply(D, u));
  if (!s.ok) throw GaugeError("u does not solve D u = 0: " + s.describe());
  DmzSystem out = gauge_by_multiplier(D, u);
  if (out.has_c()) {
    // Only reachable through a false positive in the sampled zero test.
    for (auto& [ij, c] : out.cs())
      if (!vanishes(c)) throw GaugeError("gauged C_" + std::to_string(ij.first + 1) + std::to_string(ij.second + 1) + " is nonzero");
    for (auto& [ij, c] : out.cs()) out.set_c(ij.first, ij.second, Expr(0));
  }
  return out;
}

DmzSystem to_m3wri_gauge(const DmzSystem& D0, const Expr& lambda) {
  if (D0.has_c()) throw GaugeError("the operator must have C = 0");
  int n = dim(D0);
  const auto& x = D0.coords();
  auto prod = [&](int i, int j) { return op_gamma(D0, i, j) * op_gamma(D0, j, i); };
  std::vector<Residual> sc;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (i != j && j != k && i != k)
          sc.push_back({index_label("solvability", {i, j, k}), diff(prod(i, j), x[k]) - diff(prod(i, k), x[j])});
  auto s = summarize(sc);
  if (!s.ok) throw GaugeError("lambda_ij = Gamma_ij Gamma_ji is not solvable: " + s.describe());
  std::vector<Residual> eq;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      eq.push_back({index_label("lambda", {i, j}), diff(diff(lambda, x[i]), x[j]) - prod(i, j)});
  s = summarize(eq);
  if (!s.ok) throw GaugeError("lambda fails lambda_ij = Gamma_ij Gamma_ji: " + s.describe());
  return gauge_transform(D0, -lambda);
}

std::vector<Residual> m3wri_constraint_residuals(const DmzSystem& D) {
  std::vector<Residual> out;
  int n = dim(D);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      out.push_back({index_label("constraint", {i, j}), D.c(i, j) - op_gamma(D, i, j) * op_gamma(D, j, i)});
  return out;
}

}  // namespace dmzkit
