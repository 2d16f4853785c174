#include "dmzkit/waves.hpp"

namespace dmzkit {

Expr WaveMatrix::at(int i, int j) const {
  auto it = a.find({i, j});
  return it == a.end() ? Expr(0) : it->second;
}

void WaveMatrix::set(int i, int j, const Expr& e) {
  if (i == j) throw std::invalid_argument("wave matrices have no diagonal");
  if (i < 0 || j < 0 || static_cast<std::size_t>(std::max(i, j)) >= coords.size())
    throw std::out_of_range("wave matrix index out of range");
  a[{i, j}] = e;
}

namespace {

template <class F>
void for_triples(std::size_t n, F f) {
  int m = static_cast<int>(n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        if (i != j && j != k && i != k) f(i, j, k);
}

}  // namespace

std::vector<Residual> nwave_residuals(const WaveMatrix& A) {
  std::vector<Residual> out;
  for_triples(A.n(), [&](int i, int j, int k) {
    out.push_back({index_label("nwave", {i, j, k}), diff(A.at(j, k), A.coords[i]) - A.at(j, i) * A.at(i, k)});
  });
  return out;
}

std::vector<Residual> m3wri_residuals(const WaveMatrix& G) {
  std::vector<Residual> out;
  for_triples(G.n(), [&](int i, int j, int k) {
    out.push_back({index_label("m3wri", {i, j, k}),
                   diff(G.at(j, k), G.coords[i]) - (G.at(i, j) - G.at(i, k)) * (G.at(j, k) - G.at(j, i))});
  });
  return out;
}

WaveMatrix gamma_matrix(const DmzSystem& S) {
  WaveMatrix G{S.coords(), {}};
  int n = static_cast<int>(S.n());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) G.set(i, j, S.gamma(j, i, j));
  return G;
}

WaveMatrix wave_from_lame(const std::vector<std::string>& coords, const LamePotentials& h) {
  if (h.h.size() != coords.size()) throw std::invalid_argument("one potential per coordinate");
  WaveMatrix A{coords, {}};
  int n = static_cast<int>(coords.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) A.set(i, j, normal_form(diff(h.h[j], coords[i]) / h.h[i]));
  return A;
}

std::vector<Residual> linear_problem_residuals(const WaveMatrix& A, const std::vector<Expr>& psi) {
  if (psi.size() != A.n()) throw std::invalid_argument("one psi per coordinate");
  std::vector<Residual> out;
  int n = static_cast<int>(A.n());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) out.push_back({index_label("linear", {i, j}), diff(psi[j], A.coords[i]) - A.at(j, i) * psi[i]});
  return out;
}

std::vector<Residual> half_lame_residuals(const std::vector<std::string>& x, const LamePotentials& hp, LameVariant v) {
  const auto& h = hp.h;
  if (h.size() != x.size()) throw std::invalid_argument("one potential per coordinate");
  std::vector<Residual> out;
  for_triples(x.size(), [&](int i, int j, int k) {
    Expr r = diff(diff(h[i], x[j]), x[k]) - diff(h[j], x[k]) / h[j] * diff(h[i], x[j]);
    if (v == LameVariant::Literal) r -= diff(h[k], x[k]) / h[k] * diff(h[i], x[j]);
    else r -= diff(h[k], x[j]) / h[k] * diff(h[i], x[k]);
    out.push_back({index_label("halfLame", {i, j, k}), r});
  });
  return out;
}

std::vector<Residual> full_lame_residuals(const std::vector<std::string>& x, const LamePotentials& hp, LameVariant v) {
  const auto& h = hp.h;
  std::vector<Residual> out = half_lame_residuals(x, hp, v);
  for (auto& r : out) r.label = "first" + r.label.substr(r.label.find('('));
  int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      if (i == l) continue;
      Expr r = diff(diff(h[i], x[l]) / h[l], x[l]) + diff(diff(h[l], x[i]) / h[i], x[i]);
      for (int k = 0; k < n; ++k)
        if (k != i && k != l) r += diff(h[i], x[k]) * diff(h[l], x[k]) / pow(h[k], 2);
      out.push_back({index_label("second", {i, l}), r});
    }
  return out;
}

std::vector<Residual> full_lame_residuals_squared(const std::vector<std::string>& x, const std::vector<Expr>& g,
                                                  LameVariant v) {
  if (g.size() != x.size()) throw std::invalid_argument("one potential per coordinate");
  int n = static_cast<int>(x.size());
  // r(i,l) = d_l h_i / h_i, s(i,l,m) = d_l d_m h_i / h_i with h_i = sqrt(g_i)
  auto r = [&](int i, int l) { return diff(g[i], x[l]) / (Expr(2) * g[i]); };
  auto s = [&](int i, int l, int m) {
    return diff(diff(g[i], x[l]), x[m]) / (Expr(2) * g[i]) -
           diff(g[i], x[l]) * diff(g[i], x[m]) / (Expr(4) * pow(g[i], 2));
  };
  std::vector<Residual> out;
  for_triples(x.size(), [&](int i, int l, int m) {
    Expr e = s(i, l, m) - r(l, m) * r(i, l);
    e -= v == LameVariant::Literal ? r(m, m) * r(i, l) : r(m, l) * r(i, m);
    out.push_back({index_label("first", {i, l, m}), e});
  });
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      if (i == l) continue;
      Expr e = s(i, l, l) - r(i, l) * r(l, l) + g[l] / g[i] * (s(l, i, i) - r(l, i) * r(i, i));
      for (int k = 0; k < n; ++k)
        if (k != i && k != l) e += g[l] / g[k] * r(i, k) * r(l, k);
      out.push_back({index_label("second", {i, l}), e});
    }
  return out;
}

}  // namespace dmzkit
