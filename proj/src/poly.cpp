#include "dmzkit/poly.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace dmzkit {

Mono Mono::single(Var v, std::uint32_t e) {
  Mono m;
  if (e) m.f_.emplace_back(v, e);
  return m;
}

std::uint32_t Mono::degree(Var v) const {
  for (auto& [w, e] : f_)
    if (w == v) return e;
  return 0;
}

std::uint32_t Mono::total_degree() const {
  std::uint32_t d = 0;
  for (auto& p : f_) d += p.second;
  return d;
}

Mono Mono::operator*(const Mono& o) const {
  Mono r;
  r.f_.reserve(f_.size() + o.f_.size());
  std::size_t i = 0, j = 0;
  while (i < f_.size() || j < o.f_.size()) {
    if (j == o.f_.size() || (i < f_.size() && f_[i].first < o.f_[j].first)) {
      r.f_.push_back(f_[i++]);
    } else if (i == f_.size() || o.f_[j].first < f_[i].first) {
      r.f_.push_back(o.f_[j++]);
    } else {
      r.f_.emplace_back(f_[i].first, f_[i].second + o.f_[j].second);
      ++i;
      ++j;
    }
  }
  return r;
}

std::optional<Mono> Mono::divide(const Mono& o) const {
  Mono r;
  std::size_t i = 0;
  for (auto& [v, e] : o.f_) {
    while (i < f_.size() && f_[i].first < v) r.f_.push_back(f_[i++]);
    if (i == f_.size() || f_[i].first != v || f_[i].second < e) return std::nullopt;
    if (f_[i].second > e) r.f_.emplace_back(v, f_[i].second - e);
    ++i;
  }
  while (i < f_.size()) r.f_.push_back(f_[i++]);
  return r;
}

Mono Mono::without(Var v) const {
  Mono r;
  for (auto& p : f_)
    if (p.first != v) r.f_.push_back(p);
  return r;
}

Mono Mono::gcd(const Mono& a, const Mono& b) {
  Mono r;
  std::size_t i = 0, j = 0;
  while (i < a.f_.size() && j < b.f_.size()) {
    if (a.f_[i].first < b.f_[j].first) {
      ++i;
    } else if (b.f_[j].first < a.f_[i].first) {
      ++j;
    } else {
      r.f_.emplace_back(a.f_[i].first, std::min(a.f_[i].second, b.f_[j].second));
      ++i;
      ++j;
    }
  }
  return r;
}

int mono_cmp(const Mono& a, const Mono& b) {
  auto& x = a.factors();
  auto& y = b.factors();
  std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].first != y[i].first) return x[i].first < y[i].first ? 1 : -1;
    if (x[i].second != y[i].second) return x[i].second > y[i].second ? 1 : -1;
  }
  if (x.size() == y.size()) return 0;
  return x.size() > y.size() ? 1 : -1;
}

// ---------------------------------------------------------------------------

Poly::Poly(long c) {
  if (c) t_.push_back({Mono(), mpz_class(c)});
}

Poly::Poly(const mpz_class& c) {
  if (c != 0) t_.push_back({Mono(), c});
}

Poly Poly::var(Var v) {
  Poly p;
  p.t_.push_back({Mono::single(v), mpz_class(1)});
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  Poly p;
  p.t_ = std::move(terms);
  p.normalize();
  return p;
}

Poly Poly::from_sorted(std::vector<Term> terms) {
  Poly p;
  p.t_ = std::move(terms);
  return p;
}

void Poly::normalize() {
  std::sort(t_.begin(), t_.end(),
            [](const Term& a, const Term& b) { return mono_cmp(a.m, b.m) > 0; });
  std::vector<Term> out;
  out.reserve(t_.size());
  for (auto& t : t_) {
    if (!out.empty() && out.back().m == t.m) {
      out.back().c += t.c;
    } else {
      if (!out.empty() && out.back().c == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().c == 0) out.pop_back();
  t_ = std::move(out);
}

mpz_class Poly::const_value() const {
  if (t_.empty()) return 0;
  if (!is_const()) throw std::logic_error("const_value of nonconstant polynomial");
  return t_[0].c;
}

std::vector<Var> Poly::vars() const {
  std::set<Var> s;
  for (auto& t : t_)
    for (auto& p : t.m.factors()) s.insert(p.first);
  return {s.begin(), s.end()};
}

bool Poly::has_var(Var v) const {
  for (auto& t : t_)
    if (t.m.degree(v)) return true;
  return false;
}

std::uint32_t Poly::degree(Var v) const {
  std::uint32_t d = 0;
  for (auto& t : t_) d = std::max(d, t.m.degree(v));
  return d;
}

std::uint32_t Poly::total_degree() const {
  std::uint32_t d = 0;
  for (auto& t : t_) d = std::max(d, t.m.total_degree());
  return d;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.t_) t.c = -t.c;
  return r;
}

namespace {

Poly merge(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c;
    if (i == a.size()) c = -1;
    else if (j == b.size()) c = 1;
    else c = mono_cmp(a[i].m, b[j].m);
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back(b[j++]);
      if (subtract) out.back().c = -out.back().c;
    } else {
      mpz_class s = subtract ? mpz_class(a[i].c - b[j].c) : mpz_class(a[i].c + b[j].c);
      if (s != 0) out.push_back({a[i].m, std::move(s)});
      ++i;
      ++j;
    }
  }
  return Poly::from_sorted(std::move(out));
}

}  // namespace

Poly Poly::operator+(const Poly& o) const {
  if (o.t_.empty()) return *this;
  if (t_.empty()) return o;
  return merge(t_, o.t_, false);
}

Poly Poly::operator-(const Poly& o) const {
  if (o.t_.empty()) return *this;
  return merge(t_, o.t_, true);
}

Poly Poly::operator*(const Poly& o) const {
  if (t_.empty() || o.t_.empty()) return Poly();
  if (o.t_.size() == 1) return mul_mono(o.t_[0].m, o.t_[0].c);
  if (t_.size() == 1) return o.mul_mono(t_[0].m, t_[0].c);
  std::vector<Term> out;
  out.reserve(t_.size() * o.t_.size());
  for (auto& a : t_)
    for (auto& b : o.t_) out.push_back({a.m * b.m, a.c * b.c});
  return from_terms(std::move(out));
}

Poly Poly::operator*(const mpz_class& c) const {
  if (c == 0) return Poly();
  Poly r = *this;
  for (auto& t : r.t_) t.c *= c;
  return r;
}

Poly Poly::mul_mono(const Mono& m, const mpz_class& c) const {
  if (c == 0) return Poly();
  Poly r;
  r.t_.reserve(t_.size());
  for (auto& t : t_) r.t_.push_back({t.m * m, t.c * c});
  return r;  // multiplication by a monomial preserves lex order
}

Poly Poly::pow(unsigned e) const {
  Poly r(1), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Poly Poly::div_exact(const mpz_class& c) const {
  Poly r = *this;
  for (auto& t : r.t_) mpz_divexact(t.c.get_mpz_t(), t.c.get_mpz_t(), c.get_mpz_t());
  return r;
}

bool Poly::operator==(const Poly& o) const {
  if (t_.size() != o.t_.size()) return false;
  for (std::size_t i = 0; i < t_.size(); ++i)
    if (t_[i].c != o.t_[i].c || t_[i].m != o.t_[i].m) return false;
  return true;
}

mpz_class Poly::content() const {
  mpz_class g = 0;
  for (auto& t : t_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

Poly Poly::primitive() const {
  if (t_.empty()) return *this;
  mpz_class g = content();
  if (t_[0].c < 0) g = -g;
  return g == 1 ? *this : div_exact(g);
}

Mono Poly::mono_content() const {
  if (t_.empty()) return Mono();
  Mono g = t_[0].m;
  for (auto& t : t_) {
    if (g.is_one()) break;
    g = Mono::gcd(g, t.m);
  }
  return g;
}

Poly Poly::diff(Var v) const {
  std::vector<Term> out;
  for (auto& t : t_) {
    auto e = t.m.degree(v);
    if (!e) continue;
    auto m = t.m.divide(Mono::single(v)).value();
    out.push_back({std::move(m), t.c * e});
  }
  return from_terms(std::move(out));
}

std::vector<Poly> Poly::coeffs_in(Var v) const {
  std::vector<std::vector<Term>> buckets(degree(v) + 1);
  for (auto& t : t_) buckets[t.m.degree(v)].push_back({t.m.without(v), t.c});
  std::vector<Poly> r;
  r.reserve(buckets.size());
  for (auto& b : buckets) r.push_back(from_terms(std::move(b)));
  return r;
}

Poly Poly::from_coeffs(const std::vector<Poly>& c, Var v) {
  std::vector<Term> out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    Mono m = Mono::single(v, static_cast<std::uint32_t>(k));
    for (auto& t : c[k].t_) out.push_back({t.m * m, t.c});
  }
  return from_terms(std::move(out));
}

Poly Poly::eval(Var v, const mpz_class& value) const {
  std::vector<Term> out;
  out.reserve(t_.size());
  mpz_class pw;
  for (auto& t : t_) {
    auto e = t.m.degree(v);
    if (!e) {
      out.push_back(t);
      continue;
    }
    mpz_pow_ui(pw.get_mpz_t(), value.get_mpz_t(), e);
    out.push_back({t.m.without(v), t.c * pw});
  }
  return from_terms(std::move(out));
}

Poly Poly::substitute(const std::map<Var, Poly>& m) const {
  Poly r;
  std::map<std::pair<Var, std::uint32_t>, Poly> powers;
  for (auto& t : t_) {
    Poly term(t.c);
    Mono rest;
    for (auto& [v, e] : t.m.factors()) {
      auto it = m.find(v);
      if (it == m.end()) {
        rest = rest * Mono::single(v, e);
        continue;
      }
      auto key = std::make_pair(v, e);
      auto pit = powers.find(key);
      if (pit == powers.end()) pit = powers.emplace(key, it->second.pow(e)).first;
      term = term * pit->second;
    }
    r += term.mul_mono(rest, 1);
  }
  return r;
}

std::size_t Poly::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (auto& t : t_) {
    for (auto& [v, e] : t.m.factors()) {
      mix(v);
      mix(e);
    }
    mix(mpz_get_ui(t.c.get_mpz_t()));
    mix(static_cast<std::size_t>(mpz_sgn(t.c.get_mpz_t()) + 1));
  }
  return h;
}

// ---------------------------------------------------------------------------
// Division and gcd

std::optional<Poly> divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.is_zero()) return Poly();
  if (b.is_const()) {
    mpz_class c = b.const_value();
    std::vector<Term> out;
    for (auto& t : a.terms()) {
      if (!mpz_divisible_p(t.c.get_mpz_t(), c.get_mpz_t())) return std::nullopt;
      mpz_class q;
      mpz_divexact(q.get_mpz_t(), t.c.get_mpz_t(), c.get_mpz_t());
      out.push_back({t.m, q});
    }
    return Poly::from_terms(std::move(out));
  }
  for (auto v : b.vars())
    if (b.degree(v) > a.degree(v)) return std::nullopt;
  const Term& lb = b.lead();
  std::vector<Term> q;
  Poly r = a;
  while (!r.is_zero()) {
    const Term& lr = r.lead();
    auto m = lr.m.divide(lb.m);
    if (!m || !mpz_divisible_p(lr.c.get_mpz_t(), lb.c.get_mpz_t())) return std::nullopt;
    mpz_class c;
    mpz_divexact(c.get_mpz_t(), lr.c.get_mpz_t(), lb.c.get_mpz_t());
    r -= b.mul_mono(*m, c);
    q.push_back({std::move(*m), std::move(c)});
  }
  return Poly::from_terms(std::move(q));
}

namespace {

using Univ = std::vector<Poly>;  // dense in the main variable, index = degree

void trim(Univ& u) {
  while (!u.empty() && u.back().is_zero()) u.pop_back();
}

Poly gcd_rec(const Poly& a, const Poly& b);

Poly content_of(const Univ& u) {
  Poly g;
  for (auto& c : u) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c.primitive() : gcd_rec(g, c);
    if (g.is_const()) return Poly(1);
  }
  return g;
}

Univ prem(Univ a, const Univ& b) {
  std::size_t db = b.size() - 1;
  const Poly& lb = b.back();
  if (a.size() < b.size()) return a;
  std::size_t steps = a.size() - b.size() + 1;
  while (!a.empty() && a.size() >= b.size()) {
    Poly la = a.back();
    std::size_t shift = a.size() - 1 - db;
    for (auto& c : a) c = c * lb;
    for (std::size_t k = 0; k <= db; ++k) a[k + shift] -= la * b[k];
    a.pop_back();
    trim(a);
    --steps;
  }
  if (steps) {
    Poly f = lb.pow(static_cast<unsigned>(steps));
    for (auto& c : a) c = c * f;
  }
  return a;
}

// Primitive PRS in the main variable v; a, b primitive in v.
Poly prs_gcd(const Poly& a, const Poly& b, Var v) {
  Univ A = a.coeffs_in(v), B = b.coeffs_in(v);
  if (A.size() < B.size()) std::swap(A, B);
  while (true) {
    Univ R = prem(A, B);
    trim(R);
    if (R.empty()) break;
    if (R.size() == 1) return Poly(1);
    Poly c = content_of(R);
    for (auto& r : R) r = divide(r, c).value();
    A = std::move(B);
    B = std::move(R);
  }
  Poly c = content_of(B);
  for (auto& r : B) r = divide(r, c).value();
  return Poly::from_coeffs(B, v).primitive();
}

mpz_class max_norm(const Poly& p) {
  mpz_class m = 0;
  for (auto& t : p.terms())
    if (abs(t.c) > m) m = abs(t.c);
  return m;
}

mpz_class sym_mod(const mpz_class& c, const mpz_class& x) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), x.get_mpz_t());
  if (2 * r > x) r -= x;
  return r;
}

// Recover a polynomial in v from its image at v = x (x-adic expansion).
Poly interpolate(Poly h, const mpz_class& x, Var v) {
  std::vector<Poly> coeffs;
  while (!h.is_zero()) {
    std::vector<Term> g;
    for (auto& t : h.terms()) {
      mpz_class r = sym_mod(t.c, x);
      if (r != 0) g.push_back({t.m, r});
    }
    Poly gp = Poly::from_terms(std::move(g));
    coeffs.push_back(gp);
    h = (h - gp).div_exact(x);
  }
  return Poly::from_coeffs(coeffs, v);
}

// Heuristic gcd (Char, Geddes, Gonnet). a, b have unit integer content.
std::optional<Poly> heu_gcd(const Poly& a, const Poly& b, const std::vector<Var>& vars,
                            std::size_t depth) {
  if (a.is_const() || b.is_const()) return Poly(1);
  if (depth == vars.size()) return Poly(1);
  Var v = vars[depth];
  if (!a.has_var(v) && !b.has_var(v)) return heu_gcd(a, b, vars, depth + 1);
  mpz_class na = max_norm(a), nb = max_norm(b);
  mpz_class B = 2 * std::min(na, nb) + 29;
  mpz_class s = sqrt(B);
  mpz_class x = std::min(B, mpz_class(99 * s));
  mpz_class la = abs(a.lead().c), lb = abs(b.lead().c);
  mpz_class alt = 2 * std::min(mpz_class(na / la), mpz_class(nb / lb)) + 4;
  if (alt > x) x = alt;
  for (int it = 0; it < 6; ++it) {
    Poly fa = a.eval(v, x), fb = b.eval(v, x);
    if (!fa.is_zero() && !fb.is_zero()) {
      mpz_class ca = fa.content(), cb = fb.content(), cg;
      mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
      auto h = heu_gcd(fa.div_exact(ca), fb.div_exact(cb), vars, depth + 1);
      if (h) {
        Poly hh = interpolate(*h * cg, x, v).primitive();
        if (!hh.is_zero() && divide(a, hh) && divide(b, hh)) return hh;
      }
    }
    mpz_class r = sqrt(sqrt(x));
    x = 73794 * x * r / 27011;
  }
  return std::nullopt;
}

Poly gcd_rec(const Poly& a0, const Poly& b0) {
  if (a0.is_zero()) return b0.primitive();
  if (b0.is_zero()) return a0.primitive();
  if (a0 == b0) return a0.primitive();
  mpz_class ca = a0.content(), cb = b0.content(), cg;
  mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  if (a0.is_const() || b0.is_const()) return Poly(cg);
  Mono ma = a0.mono_content(), mb = b0.mono_content();
  Mono mg = Mono::gcd(ma, mb);
  Poly a = divide(a0, Poly::from_terms({{ma, ca}})).value();
  Poly b = divide(b0, Poly::from_terms({{mb, cb}})).value();
  Poly core;
  if (a.is_const() || b.is_const()) {
    core = Poly(1);
  } else if (a.size() <= b.size() ? divide(b, a).has_value() : divide(a, b).has_value()) {
    core = (a.size() <= b.size() ? a : b).primitive();
  } else {
    auto va = a.vars(), vb = b.vars();
    std::vector<Var> both;
    std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(both));
    if (both.empty()) {
      core = Poly(1);
    } else if (va.size() != both.size() || vb.size() != both.size()) {
      // A variable private to one side cannot occur in the gcd.
      core = Poly();
      for (Var v : va)
        if (!b.has_var(v)) {
          core = gcd_rec(content_of(a.coeffs_in(v)), b);
          break;
        }
      if (core.is_zero())
        for (Var v : vb)
          if (!a.has_var(v)) {
            core = gcd_rec(a, content_of(b.coeffs_in(v)));
            break;
          }
    } else {
      std::vector<Var> order = both;
      std::sort(order.begin(), order.end(), [&](Var x, Var y) {
        return std::max(a.degree(x), b.degree(x)) < std::max(a.degree(y), b.degree(y));
      });
      auto h = heu_gcd(a.primitive(), b.primitive(), order, 0);
      if (h) {
        core = *h;
      } else {
        Var v = order.front();
        Poly cA = content_of(a.coeffs_in(v)), cB = content_of(b.coeffs_in(v));
        Poly pa = divide(a, cA).value(), pb = divide(b, cB).value();
        core = gcd_rec(cA, cB) * prs_gcd(pa, pb, v);
      }
    }
  }
  return core.primitive().mul_mono(mg, cg);
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) { return gcd_rec(a, b); }

Poly lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  return divide(a, gcd(a, b)).value() * b;
}

}  // namespace dmzkit
