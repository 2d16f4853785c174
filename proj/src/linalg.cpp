#include "dmzkit/linalg.hpp"

#include <stdexcept>

namespace dmzkit {

bool is_zero_vec(const RVec& v) {
  for (auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

RVec Span::reduce(RVec v) const {
  if (v.size() != dim_) throw std::invalid_argument("Span: dimension mismatch");
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const RatFunc c = v[piv_[r]];
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j < dim_; ++j)
      if (!rows_[r][j].is_zero()) v[j] -= c * rows_[r][j];
  }
  return v;
}

bool Span::insert(const RVec& v0) {
  RVec v = reduce(v0);
  std::size_t p = 0;
  while (p < dim_ && v[p].is_zero()) ++p;
  if (p == dim_) return false;
  RatFunc inv = v[p].inverse();
  for (auto& x : v)
    if (!x.is_zero()) x *= inv;
  for (auto& row : rows_) {
    RatFunc c = row[p];
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j < dim_; ++j)
      if (!v[j].is_zero()) row[j] -= c * v[j];
  }
  rows_.push_back(std::move(v));
  piv_.push_back(p);
  return true;
}

std::vector<RVec> nullspace(const std::vector<RVec>& m, std::size_t cols) {
  Span s(cols);
  for (auto& r : m) s.insert(r);
  std::vector<bool> is_piv(cols, false);
  for (auto p : s.pivots()) is_piv[p] = true;
  std::vector<RVec> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    RVec a(cols, RatFunc(0));
    a[f] = RatFunc(1);
    for (std::size_t r = 0; r < s.rank(); ++r) a[s.pivots()[r]] = -s.rows()[r][f];
    out.push_back(std::move(a));
  }
  return out;
}

BareissRank bareiss_rank(const std::vector<RVec>& rows) {
  BareissRank out;
  if (rows.empty()) return out;
  std::size_t n = rows[0].size();
  std::vector<std::vector<Poly>> a;
  for (auto& r : rows) {
    Poly d(1);
    for (auto& x : r)
      if (!x.is_zero()) d = lcm(d, x.den());
    std::vector<Poly> pr;
    for (auto& x : r) {
      if (x.is_zero()) {
        pr.emplace_back();
        continue;
      }
      auto q = divide(d, x.den());
      if (!q) throw std::logic_error("bareiss: denominator does not divide the row lcm");
      pr.push_back(x.num() * *q);
    }
    a.push_back(std::move(pr));
  }
  std::size_t m = a.size();
  std::vector<std::size_t> colperm(n);
  for (std::size_t j = 0; j < n; ++j) colperm[j] = j;
  Poly prev(1);
  std::size_t k = 0;
  for (; k < m && k < n; ++k) {
    // smallest nonzero entry as pivot keeps the intermediate sizes down
    std::size_t pi = m, pj = n, best = 0;
    for (std::size_t i = k; i < m; ++i)
      for (std::size_t j = k; j < n; ++j) {
        const Poly& e = a[i][colperm[j]];
        if (e.is_zero()) continue;
        if (pi == m || e.size() < best) pi = i, pj = j, best = e.size();
      }
    if (pi == m) break;
    std::swap(a[k], a[pi]);
    std::swap(colperm[k], colperm[pj]);
    const Poly piv = a[k][colperm[k]];
    for (std::size_t i = k + 1; i < m; ++i) {
      const Poly aik = a[i][colperm[k]];
      for (std::size_t j = k + 1; j < n; ++j) {
        std::size_t c = colperm[j];
        Poly t = piv * a[i][c] - aik * a[k][c];
        if (!t.is_zero()) {
          auto q = divide(t, prev);
          if (!q) throw std::logic_error("bareiss: inexact division");
          t = std::move(*q);
        }
        a[i][c] = std::move(t);
      }
      a[i][colperm[k]] = Poly();
    }
    prev = piv;
    out.locus = piv;
  }
  out.rank = k;
  return out;
}

}  // namespace dmzkit
