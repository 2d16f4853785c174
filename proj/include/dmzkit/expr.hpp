#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace dmzkit {

enum class Kind : unsigned char { Num, Sym, Add, Mul, Pow, Fn };

// Opaque is an undeclared univariate function f with a derivative order.
enum class Func : unsigned char { Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Ln, Opaque };

class RatFunc;
struct Node;

// Immutable expression. Construction applies the automatic simplification
// rules (flattening, collection of like terms and powers, sorting); the full
// rational normal form is produced by canonicalize().
class Expr {
 public:
  Expr();  // zero
  Expr(long v);
  Expr(int v) : Expr(static_cast<long>(v)) {}
  Expr(const mpq_class& q);
  Expr(const mpz_class& z) : Expr(mpq_class(z)) {}

  static Expr sym(const std::string& name);
  static Expr fn(Func f, const Expr& arg);
  static Expr opaque(const std::string& name, int order, const Expr& arg);
  static Expr add(std::vector<Expr> terms);
  static Expr mul(std::vector<Expr> factors);
  static Expr pow(const Expr& base, long e);

  Kind kind() const;
  const mpq_class& num() const;       // Num
  const std::string& name() const;    // Sym, Opaque
  Func func() const;                  // Fn
  int order() const;                  // Opaque derivative order
  long exponent() const;              // Pow
  const std::vector<Expr>& args() const;  // Add/Mul children, Pow base, Fn argument

  bool is_num() const { return kind() == Kind::Num; }
  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;  // no function applications anywhere
  bool has_opaque() const;
  std::size_t hash() const;
  const Node* node() const { return p_.get(); }

  // Cached rational form (set by canonicalize / to_expr).
  std::shared_ptr<const RatFunc> cached_rat() const;
  void set_cached_rat(std::shared_ptr<const RatFunc> r) const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  explicit Expr(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
  std::shared_ptr<const Node> p_;
  friend struct Builder;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }
Expr pow(const Expr& base, long e);

// Total order used for sorting sums and products; <0 when a sorts first.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};
struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

std::string func_name(Func f);
std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

// Symbol names occurring in e (including inside function arguments).
std::set<std::string> free_symbols(const Expr& e);
// Opaque function names occurring in e.
std::set<std::string> opaque_names(const Expr& e);

}  // namespace dmzkit
