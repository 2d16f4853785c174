#pragma once

#include "dmzkit/expr.hpp"
#include "dmzkit/poly.hpp"

#include <string>

namespace dmzkit {

// Global variable table: symbols by name and function-application kernels.
Var symbol_var(const std::string& name);
Var kernel_var(const Expr& k);
bool is_kernel(Var v);
Expr var_expr(Var v);
const std::string& var_name(Var v);

// Element of Q(symbols, kernels): num/den coprime over Z, den with positive
// leading coefficient, joint integer content 1.
class RatFunc {
 public:
  RatFunc() : den_(1) {}
  RatFunc(long c) : num_(c), den_(1) {}
  RatFunc(const mpq_class& q);
  RatFunc(Poly num, Poly den);
  static RatFunc from_poly(Poly p);
  static RatFunc var(Var v) { return from_poly(Poly::var(v)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_const() const { return num_.is_const() && den_.is_const(); }
  mpq_class const_value() const;

  RatFunc operator-() const;
  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc inverse() const;
  RatFunc pow(long e) const;
  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RatFunc& o) const { return !(*this == o); }

  // Partial derivative in the symbol variable x (chain rule through kernels).
  RatFunc diff(Var x) const;
  bool depends_on(Var x) const;
  std::vector<Var> vars() const;

 private:
  Poly num_, den_;
  struct Raw {};
  RatFunc(Poly num, Poly den, Raw) : num_(std::move(num)), den_(std::move(den)) {}
  void normalize();
};

// Derivative of a polynomial in a symbol, through kernels.
RatFunc poly_diff(const Poly& p, Var x);

RatFunc to_rat(const Expr& e);
Expr to_expr(const RatFunc& r);

}  // namespace dmzkit
