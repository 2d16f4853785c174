#include "dmzkit/ratfunc.hpp"

#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace dmzkit {

namespace {

struct VarInfo {
  bool kernel = false;
  std::string name;
  Expr expr;
  std::set<Var> symbols;  // symbol vars a kernel depends on
};

struct VarTable {
  std::mutex mu;
  std::vector<VarInfo> info;
  std::unordered_map<std::string, Var> syms;
  std::unordered_map<Expr, Var, ExprHash> kernels;
  std::map<std::pair<Var, Var>, RatFunc> kernel_diff;
};

VarTable& table() {
  static VarTable t;
  return t;
}

}  // namespace

Var symbol_var(const std::string& name) {
  auto& t = table();
  std::lock_guard<std::mutex> lk(t.mu);
  auto it = t.syms.find(name);
  if (it != t.syms.end()) return it->second;
  Var v = static_cast<Var>(t.info.size());
  VarInfo vi;
  vi.name = name;
  vi.expr = Expr::sym(name);
  vi.symbols.insert(v);
  t.info.push_back(std::move(vi));
  t.syms.emplace(name, v);
  return v;
}

Var kernel_var(const Expr& k) {
  if (k.kind() != Kind::Fn) throw std::logic_error("kernel must be a function application");
  std::set<Var> deps;
  for (auto& s : free_symbols(k)) deps.insert(symbol_var(s));
  auto& t = table();
  std::lock_guard<std::mutex> lk(t.mu);
  auto it = t.kernels.find(k);
  if (it != t.kernels.end()) return it->second;
  Var v = static_cast<Var>(t.info.size());
  VarInfo vi;
  vi.kernel = true;
  vi.name = to_string(k);
  vi.expr = k;
  vi.symbols = std::move(deps);
  t.info.push_back(std::move(vi));
  t.kernels.emplace(k, v);
  return v;
}

bool is_kernel(Var v) {
  auto& t = table();
  std::lock_guard<std::mutex> lk(t.mu);
  return t.info.at(v).kernel;
}

Expr var_expr(Var v) {
  auto& t = table();
  std::lock_guard<std::mutex> lk(t.mu);
  return t.info.at(v).expr;
}

const std::string& var_name(Var v) {
  auto& t = table();
  std::lock_guard<std::mutex> lk(t.mu);
  return t.info.at(v).name;
}

namespace {

bool var_depends(Var v, Var x) {
  auto& t = table();
  std::lock_guard<std::mutex> lk(t.mu);
  return t.info.at(v).symbols.count(x) > 0;
}

RatFunc kernel_derivative(Var k, Var x) {
  {
    auto& t = table();
    std::lock_guard<std::mutex> lk(t.mu);
    auto it = t.kernel_diff.find({k, x});
    if (it != t.kernel_diff.end()) return it->second;
  }
  Expr ke = var_expr(k);
  const Expr& arg = ke.args()[0];
  RatFunc darg = to_rat(arg).diff(x);
  RatFunc outer;
  if (!darg.is_zero()) {
    switch (ke.func()) {
      case Func::Sin: outer = to_rat(Expr::fn(Func::Cos, arg)); break;
      case Func::Cos: outer = -to_rat(Expr::fn(Func::Sin, arg)); break;
      case Func::Tan: outer = to_rat(Expr(1) + pow(ke, 2)); break;
      case Func::Sinh: outer = to_rat(Expr::fn(Func::Cosh, arg)); break;
      case Func::Cosh: outer = to_rat(Expr::fn(Func::Sinh, arg)); break;
      case Func::Tanh: outer = to_rat(Expr(1) - pow(ke, 2)); break;
      case Func::Exp: outer = RatFunc::var(k); break;
      case Func::Ln: outer = to_rat(arg).inverse(); break;
      case Func::Opaque: outer = to_rat(Expr::opaque(ke.name(), ke.order() + 1, arg)); break;
    }
  }
  RatFunc r = outer * darg;
  auto& t = table();
  std::lock_guard<std::mutex> lk(t.mu);
  t.kernel_diff.emplace(std::make_pair(k, x), r);
  return r;
}

mpz_class gcd_z(const mpz_class& a, const mpz_class& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------

RatFunc::RatFunc(const mpq_class& q) : num_(q.get_num()), den_(q.get_den()) {}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("division by zero");
  normalize();
}

RatFunc RatFunc::from_poly(Poly p) {
  mpz_class one = 1;
  return RatFunc(std::move(p), Poly(one), Raw{});
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = Poly(1);
    return;
  }
  if (!den_.is_const()) {
    Poly g = gcd(num_, den_);
    if (!g.is_const()) {
      num_ = divide(num_, g).value();
      den_ = divide(den_, g).value();
    }
  }
  mpz_class c = gcd_z(num_.content(), den_.content());
  if (den_.lead().c < 0) c = -c;
  if (c != 1) {
    num_ = num_.div_exact(c);
    den_ = den_.div_exact(c);
  }
}

mpq_class RatFunc::const_value() const {
  if (!is_const()) throw std::logic_error("const_value of nonconstant rational function");
  mpq_class q(num_.const_value(), den_.const_value());
  q.canonicalize();
  return q;
}

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_, Raw{}); }

RatFunc RatFunc::operator+(const RatFunc& o) const {
  if (o.is_zero()) return *this;
  if (is_zero()) return o;
  if (den_ == o.den_) return RatFunc(num_ + o.num_, den_);
  if (den_.is_const() && o.den_.is_const()) {
    mpz_class a = den_.const_value(), b = o.den_.const_value();
    return RatFunc(num_ * b + o.num_ * a, Poly(mpz_class(a * b)));
  }
  Poly g = gcd(den_, o.den_);
  Poly a = divide(den_, g).value(), b = divide(o.den_, g).value();
  Poly n = num_ * b + o.num_ * a;
  if (n.is_zero()) return RatFunc();
  // Only factors of g can cancel.
  Poly d = den_ * b;
  if (g.is_const()) {
    RatFunc r(std::move(n), std::move(d), Raw{});
    mpz_class c = gcd_z(r.num_.content(), r.den_.content());
    if (r.den_.lead().c < 0) c = -c;
    if (c != 1) {
      r.num_ = r.num_.div_exact(c);
      r.den_ = r.den_.div_exact(c);
    }
    return r;
  }
  return RatFunc(std::move(n), std::move(d));
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const {
  if (is_zero() || o.is_zero()) return RatFunc();
  if (den_.is_const() && o.den_.is_const())
    return RatFunc(num_ * o.num_, den_ * o.den_);
  Poly g1 = gcd(num_, o.den_), g2 = gcd(o.num_, den_);
  Poly a = g1.is_const() ? num_ : divide(num_, g1).value();
  Poly d2 = g1.is_const() ? o.den_ : divide(o.den_, g1).value();
  Poly b = g2.is_const() ? o.num_ : divide(o.num_, g2).value();
  Poly d1 = g2.is_const() ? den_ : divide(den_, g2).value();
  RatFunc r(a * b, d1 * d2, Raw{});
  mpz_class c = gcd_z(r.num_.content(), r.den_.content());
  if (r.den_.lead().c < 0) c = -c;
  if (c != 1) {
    r.num_ = r.num_.div_exact(c);
    r.den_ = r.den_.div_exact(c);
  }
  return r;
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero");
  RatFunc r(den_, num_, Raw{});
  if (r.den_.lead().c < 0) {
    r.num_ = -r.num_;
    r.den_ = -r.den_;
  }
  return r;
}

RatFunc RatFunc::operator/(const RatFunc& o) const { return *this * o.inverse(); }

RatFunc RatFunc::pow(long e) const {
  if (e == 0) return RatFunc(1);
  if (e < 0) return inverse().pow(-e);
  RatFunc r(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)), Raw{});
  return r;
}

RatFunc poly_diff(const Poly& p, Var x) {
  RatFunc r = RatFunc::from_poly(p.diff(x));
  for (Var v : p.vars()) {
    if (v == x || !is_kernel(v) || !var_depends(v, x)) continue;
    RatFunc dk = kernel_derivative(v, x);
    if (!dk.is_zero()) r += RatFunc::from_poly(p.diff(v)) * dk;
  }
  return r;
}

bool RatFunc::depends_on(Var x) const {
  for (const Poly* p : {&num_, &den_})
    for (Var v : p->vars())
      if (v == x || (is_kernel(v) && var_depends(v, x))) return true;
  return false;
}

std::vector<Var> RatFunc::vars() const {
  std::set<Var> s;
  for (Var v : num_.vars()) s.insert(v);
  for (Var v : den_.vars()) s.insert(v);
  return {s.begin(), s.end()};
}

RatFunc RatFunc::diff(Var x) const {
  if (!depends_on(x)) return RatFunc();
  RatFunc dn = poly_diff(num_, x);
  if (den_.is_const()) return dn * RatFunc(mpq_class(1, den_.const_value()));
  RatFunc dd = poly_diff(den_, x);
  if (dn.den().is_const() && dd.den().is_const()) {
    // (n' d - n d') / d^2 with n', d' polynomial
    mpz_class cn = dn.den().const_value(), cd = dd.den().const_value();
    Poly top = dn.num() * den_ * cd - num_ * dd.num() * cn;
    return RatFunc(std::move(top), den_ * den_ * mpz_class(cn * cd));
  }
  RatFunc d = RatFunc::from_poly(den_);
  return (dn * d - RatFunc::from_poly(num_) * dd) / (d * d);
}

// ---------------------------------------------------------------------------

RatFunc to_rat(const Expr& e) {
  if (auto c = e.cached_rat()) return *c;
  switch (e.kind()) {
    case Kind::Num: return RatFunc(e.num());
    case Kind::Sym: return RatFunc::var(symbol_var(e.name()));
    case Kind::Fn: {
      Expr a = to_expr(to_rat(e.args()[0]));
      Expr k = e.func() == Func::Opaque ? Expr::opaque(e.name(), e.order(), a) : Expr::fn(e.func(), a);
      if (k.kind() != Kind::Fn) return to_rat(k);
      return RatFunc::var(kernel_var(k));
    }
    case Kind::Add: {
      // Group terms by their denominators before adding fractions.
      RatFunc poly_part;
      std::vector<RatFunc> fracs;
      for (auto& t : e.args()) {
        RatFunc r = to_rat(t);
        if (r.den().is_const()) poly_part += r;
        else fracs.push_back(std::move(r));
      }
      for (auto& f : fracs) poly_part += f;
      return poly_part;
    }
    case Kind::Mul: {
      RatFunc r(1);
      for (auto& f : e.args()) r *= to_rat(f);
      return r;
    }
    case Kind::Pow: return to_rat(e.args()[0]).pow(e.exponent());
  }
  return RatFunc();
}

namespace {

Expr poly_to_expr(const Poly& p) {
  std::vector<Expr> terms;
  terms.reserve(p.size());
  for (auto& t : p.terms()) {
    std::vector<Expr> fs;
    fs.reserve(t.m.factors().size() + 1);
    fs.emplace_back(t.c);
    for (auto& [v, e] : t.m.factors()) fs.push_back(pow(var_expr(v), static_cast<long>(e)));
    terms.push_back(Expr::mul(std::move(fs)));
  }
  return Expr::add(std::move(terms));
}

// Sign of the first term in display order.
int display_sign(const Expr& e) {
  const Expr& t = e.kind() == Kind::Add ? e.args()[0] : e;
  if (t.is_num()) return t.num() < 0 ? -1 : 1;
  if (t.kind() == Kind::Mul && t.args()[0].is_num()) return t.args()[0].num() < 0 ? -1 : 1;
  return 1;
}

}  // namespace

Expr to_expr(const RatFunc& r) {
  Expr out;
  if (r.is_zero()) {
    out = Expr(0);
  } else if (r.den().is_const()) {
    mpz_class cn = r.num().content(), d = r.den().const_value();
    Poly n = r.num().div_exact(cn);
    Expr ne = poly_to_expr(n);
    if (display_sign(ne) < 0) {
      ne = poly_to_expr(-n);
      cn = -cn;
    }
    out = Expr::mul({Expr(mpq_class(cn, d)), ne});
  } else {
    mpz_class cn = r.num().content(), cd = r.den().content();
    Poly n = r.num().div_exact(cn), d = r.den().div_exact(cd);
    Expr de = poly_to_expr(d);
    if (display_sign(de) < 0) {
      d = -d;
      de = poly_to_expr(d);
      cn = -cn;
    }
    Expr ne = poly_to_expr(n);
    if (display_sign(ne) < 0) {
      ne = poly_to_expr(-n);
      cn = -cn;
    }
    out = Expr::mul({Expr(mpq_class(cn, cd)), ne, pow(de, -1)});
  }
  out.set_cached_rat(std::make_shared<const RatFunc>(r));
  return out;
}

}  // namespace dmzkit
