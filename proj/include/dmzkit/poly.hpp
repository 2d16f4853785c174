#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace dmzkit {

// Indices into the global variable table (see vars.hpp).
using Var = std::uint32_t;

// Sparse monomial: (var, exponent) pairs sorted by var, exponents > 0.
class Mono {
 public:
  Mono() = default;
  static Mono single(Var v, std::uint32_t e = 1);

  const std::vector<std::pair<Var, std::uint32_t>>& factors() const { return f_; }
  bool is_one() const { return f_.empty(); }
  std::uint32_t degree(Var v) const;
  std::uint32_t total_degree() const;

  Mono operator*(const Mono& o) const;
  // Exact quotient if o divides *this.
  std::optional<Mono> divide(const Mono& o) const;
  Mono without(Var v) const;
  static Mono gcd(const Mono& a, const Mono& b);

  bool operator==(const Mono& o) const { return f_ == o.f_; }
  bool operator!=(const Mono& o) const { return f_ != o.f_; }

 private:
  std::vector<std::pair<Var, std::uint32_t>> f_;
};

// Lex order with the smaller Var id more significant. >0 when a > b.
int mono_cmp(const Mono& a, const Mono& b);

struct Term {
  Mono m;
  mpz_class c;
};

// Sparse multivariate polynomial over Z, terms sorted by decreasing mono_cmp.
class Poly {
 public:
  Poly() = default;
  Poly(long c);
  Poly(const mpz_class& c);
  static Poly var(Var v);
  static Poly from_terms(std::vector<Term> terms);
  // Terms already in decreasing order, no duplicates, no zeros.
  static Poly from_sorted(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_const() const { return t_.empty() || (t_.size() == 1 && t_[0].m.is_one()); }
  mpz_class const_value() const;
  const Term& lead() const { return t_.front(); }
  std::size_t size() const { return t_.size(); }

  std::vector<Var> vars() const;
  bool has_var(Var v) const;
  std::uint32_t degree(Var v) const;
  std::uint32_t total_degree() const;

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const mpz_class& c) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly mul_mono(const Mono& m, const mpz_class& c) const;
  Poly pow(unsigned e) const;
  // Divides every coefficient by c; c must divide all of them.
  Poly div_exact(const mpz_class& c) const;

  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  mpz_class content() const;  // nonnegative gcd of the coefficients
  Poly primitive() const;     // divided by content, leading coefficient positive
  Mono mono_content() const;  // gcd of all monomials

  Poly diff(Var v) const;
  // Coefficients with respect to v: index = power of v.
  std::vector<Poly> coeffs_in(Var v) const;
  static Poly from_coeffs(const std::vector<Poly>& c, Var v);
  Poly eval(Var v, const mpz_class& value) const;
  Poly substitute(const std::map<Var, Poly>& m) const;
  std::size_t hash() const;

 private:
  std::vector<Term> t_;
  void normalize();
};

// Exact division; nullopt if b does not divide a.
std::optional<Poly> divide(const Poly& a, const Poly& b);
// Greatest common divisor with positive leading coefficient.
Poly gcd(const Poly& a, const Poly& b);
// a*b/gcd(a,b)
Poly lcm(const Poly& a, const Poly& b);

}  // namespace dmzkit
