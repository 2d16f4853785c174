#include "dmzkit/symkernel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace dmzkit {

// ---------------------------------------------------------------------------
// Rewrite pass

namespace {

Expr reduce_power(const Expr& b, long n) {
  if (b.kind() == Kind::Fn && (n >= 2 || n <= -2)) {
    long s = n > 0 ? 1 : -1, m = n > 0 ? n : -n;
    const Expr& a = b.args()[0];
    if (b.func() == Func::Sin) {
      Expr c2 = pow(Expr::fn(Func::Cos, a), 2);
      return pow(b, s * (m % 2)) * pow(Expr(1) - c2, s * (m / 2));
    }
    if (b.func() == Func::Cosh) {
      Expr s2 = pow(Expr::fn(Func::Sinh, a), 2);
      return pow(b, s * (m % 2)) * pow(Expr(1) + s2, s * (m / 2));
    }
  }
  if (b.kind() == Kind::Fn && b.func() == Func::Exp) return Expr::fn(Func::Exp, Expr(n) * b.args()[0]);
  return pow(b, n);
}

Expr rewrite(const Expr& e) {
  switch (e.kind()) {
    case Kind::Num:
    case Kind::Sym: return e;
    case Kind::Fn: {
      Expr a = rewrite(e.args()[0]);
      switch (e.func()) {
        case Func::Tan: return Expr::fn(Func::Sin, a) / Expr::fn(Func::Cos, a);
        case Func::Tanh: return Expr::fn(Func::Sinh, a) / Expr::fn(Func::Cosh, a);
        case Func::Ln:
          if (a.kind() == Kind::Fn && a.func() == Func::Exp) return a.args()[0];
          return Expr::fn(Func::Ln, a);
        case Func::Exp:
          if (a.kind() == Kind::Fn && a.func() == Func::Ln) return a.args()[0];
          return Expr::fn(Func::Exp, a);
        case Func::Opaque: return Expr::opaque(e.name(), e.order(), a);
        default: return Expr::fn(e.func(), a);
      }
    }
    case Kind::Add: {
      std::vector<Expr> ts;
      for (auto& t : e.args()) ts.push_back(rewrite(t));
      return Expr::add(std::move(ts));
    }
    case Kind::Pow: return reduce_power(rewrite(e.args()[0]), e.exponent());
    case Kind::Mul: {
      std::vector<Expr> fs;
      for (auto& f : e.args()) fs.push_back(rewrite(f));
      Expr m = Expr::mul(std::move(fs));
      if (m.kind() != Kind::Mul) return m.kind() == Kind::Pow ? reduce_power(m.args()[0], m.exponent()) : m;
      std::vector<Expr> out;
      Expr exp_arg(0);
      bool any_exp = false;
      for (auto& f : m.args()) {
        const Expr& b = f.kind() == Kind::Pow ? f.args()[0] : f;
        long n = f.kind() == Kind::Pow ? f.exponent() : 1;
        if (b.kind() == Kind::Fn && b.func() == Func::Exp) {
          exp_arg += Expr(n) * b.args()[0];
          any_exp = true;
        } else {
          out.push_back(f.kind() == Kind::Pow ? reduce_power(b, n) : f);
        }
      }
      if (any_exp) out.push_back(Expr::fn(Func::Exp, normal_form(exp_arg)));
      return Expr::mul(std::move(out));
    }
  }
  return e;
}

// Polynomial-level Pythagorean reduction and exp merging on kernels.
Poly reduce_kernels(const Poly& p) {
  std::map<Var, Poly> sq;  // kernel var -> replacement of its square
  std::vector<Var> exps;
  for (Var v : p.vars()) {
    if (!is_kernel(v)) continue;
    Expr k = var_expr(v);
    if (k.func() == Func::Sin && p.degree(v) >= 2)
      sq[v] = Poly(1) - Poly::var(kernel_var(Expr::fn(Func::Cos, k.args()[0]))).pow(2);
    else if (k.func() == Func::Cosh && p.degree(v) >= 2)
      sq[v] = Poly(1) + Poly::var(kernel_var(Expr::fn(Func::Sinh, k.args()[0]))).pow(2);
    else if (k.func() == Func::Exp)
      exps.push_back(v);
  }
  if (sq.empty() && exps.empty()) return p;
  Poly out;
  for (auto& t : p.terms()) {
    Poly term(t.c);
    Mono rest;
    Expr exp_arg(0);
    int exp_count = 0;
    for (auto& [v, e] : t.m.factors()) {
      auto it = sq.find(v);
      if (it != sq.end()) {
        term *= it->second.pow(e / 2);
        if (e % 2) rest = rest * Mono::single(v);
      } else if (std::find(exps.begin(), exps.end(), v) != exps.end()) {
        exp_arg += Expr(static_cast<long>(e)) * var_expr(v).args()[0];
        exp_count += static_cast<int>(e);
      } else {
        rest = rest * Mono::single(v, e);
      }
    }
    if (exp_count) {
      Expr k = Expr::fn(Func::Exp, normal_form(exp_arg));
      if (k.kind() == Kind::Fn) term *= Poly::var(kernel_var(k));
    }
    out += term.mul_mono(rest, 1);
  }
  return out;
}

}  // namespace

Expr rewrite_transcendental(const Expr& e) { return e.is_rational() ? e : rewrite(e); }

Expr normal_form(const Expr& e) {
  if (e.cached_rat()) return e;
  return to_expr(to_rat(e));
}

Expr canonicalize(const Expr& e) {
  if (e.is_rational()) return normal_form(e);
  RatFunc r = to_rat(rewrite(e));
  for (int pass = 0; pass < 4; ++pass) {
    Poly n = reduce_kernels(r.num()), d = reduce_kernels(r.den());
    if (n == r.num() && d == r.den()) break;
    r = RatFunc(n, d);
  }
  return to_expr(r);
}

Expr diff(const Expr& e, const std::string& var) { return to_expr(to_rat(e).diff(symbol_var(var))); }

namespace {

Expr subst_raw(const Expr& e, const std::map<std::string, Expr>& b) {
  switch (e.kind()) {
    case Kind::Num: return e;
    case Kind::Sym: {
      auto it = b.find(e.name());
      return it == b.end() ? e : it->second;
    }
    case Kind::Fn: {
      Expr a = subst_raw(e.args()[0], b);
      return e.func() == Func::Opaque ? Expr::opaque(e.name(), e.order(), a) : Expr::fn(e.func(), a);
    }
    case Kind::Pow: return pow(subst_raw(e.args()[0], b), e.exponent());
    case Kind::Add:
    case Kind::Mul: {
      std::vector<Expr> ch;
      for (auto& c : e.args()) ch.push_back(subst_raw(c, b));
      return e.kind() == Kind::Add ? Expr::add(std::move(ch)) : Expr::mul(std::move(ch));
    }
  }
  return e;
}

Expr inst_raw(const Expr& e, const std::map<std::string, Expr>& fns, const std::string& s) {
  switch (e.kind()) {
    case Kind::Num:
    case Kind::Sym: return e;
    case Kind::Fn: {
      Expr a = inst_raw(e.args()[0], fns, s);
      if (e.func() != Func::Opaque) return Expr::fn(e.func(), a);
      auto it = fns.find(e.name());
      if (it == fns.end()) return Expr::opaque(e.name(), e.order(), a);
      Expr f = it->second;
      for (int k = 0; k < e.order(); ++k) f = diff(f, s);
      return subst_raw(f, {{s, a}});
    }
    case Kind::Pow: return pow(inst_raw(e.args()[0], fns, s), e.exponent());
    case Kind::Add:
    case Kind::Mul: {
      std::vector<Expr> ch;
      for (auto& c : e.args()) ch.push_back(inst_raw(c, fns, s));
      return e.kind() == Kind::Add ? Expr::add(std::move(ch)) : Expr::mul(std::move(ch));
    }
  }
  return e;
}

}  // namespace

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
  return normal_form(subst_raw(e, bindings));
}

Expr instantiate_functions(const Expr& e, const std::map<std::string, Expr>& fns, const std::string& s) {
  return normal_form(inst_raw(e, fns, s));
}

// ---------------------------------------------------------------------------
// Evaluation

mpq_class eval_exact(const Expr& e, const Assignment& a) {
  switch (e.kind()) {
    case Kind::Num: return e.num();
    case Kind::Sym: {
      auto it = a.find(e.name());
      if (it == a.end()) throw std::out_of_range("unassigned variable '" + e.name() + "'");
      return it->second;
    }
    case Kind::Add: {
      mpq_class s = 0;
      for (auto& t : e.args()) s += eval_exact(t, a);
      return s;
    }
    case Kind::Mul: {
      mpq_class p = 1;
      for (auto& f : e.args()) p *= eval_exact(f, a);
      return p;
    }
    case Kind::Pow: {
      mpq_class b = eval_exact(e.args()[0], a);
      long n = e.exponent();
      if (b == 0 && n < 0) throw PoleError("pole at the assigned point");
      mpz_class num, den;
      unsigned long m = static_cast<unsigned long>(n < 0 ? -n : n);
      mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), m);
      mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), m);
      mpq_class r = n > 0 ? mpq_class(num, den) : mpq_class(den, num);
      r.canonicalize();
      return r;
    }
    case Kind::Fn: throw std::domain_error("exact evaluation of a transcendental expression");
  }
  return 0;
}

namespace {

using PrecisionGuard = PrecisionScope;

Real to_real(const mpq_class& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

const Real& to_real(const Real& r) { return r; }

template <class Values>
Real eval_real(const Expr& e, const Values& a, const Real& pole_eps) {
  using boost::multiprecision::abs;
  switch (e.kind()) {
    case Kind::Num: return to_real(e.num());
    case Kind::Sym: {
      auto it = a.find(e.name());
      if (it == a.end()) throw std::out_of_range("unassigned variable '" + e.name() + "'");
      return to_real(it->second);
    }
    case Kind::Add: {
      Real s = 0;
      for (auto& t : e.args()) s += eval_real(t, a, pole_eps);
      return s;
    }
    case Kind::Mul: {
      Real p = 1;
      for (auto& f : e.args()) p *= eval_real(f, a, pole_eps);
      return p;
    }
    case Kind::Pow: {
      Real b = eval_real(e.args()[0], a, pole_eps);
      long n = e.exponent();
      if (n < 0 && abs(b) <= pole_eps) throw PoleError("pole at the sample point");
      Real r = 1;
      Real x = n < 0 ? Real(1 / b) : b;
      unsigned long m = static_cast<unsigned long>(n < 0 ? -n : n);
      while (m) {
        if (m & 1) r *= x;
        m >>= 1;
        if (m) x *= x;
      }
      return r;
    }
    case Kind::Fn: {
      Real x = eval_real(e.args()[0], a, pole_eps);
      switch (e.func()) {
        case Func::Sin: return sin(x);
        case Func::Cos: return cos(x);
        case Func::Tan: {
          Real c = cos(x);
          if (abs(c) <= pole_eps) throw PoleError("pole of tan");
          return sin(x) / c;
        }
        case Func::Sinh: return sinh(x);
        case Func::Cosh: return cosh(x);
        case Func::Tanh: return tanh(x);
        case Func::Exp: return exp(x);
        case Func::Ln:
          if (x <= 0) throw PoleError("ln of a nonpositive value");
          return log(x);
        case Func::Opaque: throw std::domain_error("cannot evaluate undeclared function " + e.name());
      }
    }
  }
  return Real(0);
}

}  // namespace

PrecisionScope::PrecisionScope(unsigned bits) : saved_(Real::default_precision()) {
  Real::default_precision(static_cast<unsigned>(std::ceil(bits * 0.30103)) + 1);
}
PrecisionScope::~PrecisionScope() { Real::default_precision(saved_); }

Real eval_real(const Expr& e, const RealAssignment& a) { return eval_real(e, a, Real(0)); }

Approx eval_approx(const Expr& e, const Assignment& a, unsigned precision_bits) {
  Approx out;
  Real lo, hi;
  {
    PrecisionGuard g(precision_bits);
    Real eps = boost::multiprecision::ldexp(Real(1), -static_cast<int>(precision_bits / 2));
    lo = eval_real(e, a, eps);
  }
  {
    PrecisionGuard g(2 * precision_bits);
    Real eps = boost::multiprecision::ldexp(Real(1), -static_cast<int>(precision_bits / 2));
    hi = eval_real(e, a, eps);
    out.mid = hi;
    out.radius = boost::multiprecision::abs(hi - lo);
  }
  return out;
}

EvalResult eval(const Expr& e, const Assignment& a, unsigned precision_bits) {
  EvalResult r;
  if (e.is_rational()) {
    r.exact = true;
    r.value = eval_exact(e, a);
    PrecisionGuard g(precision_bits);
    r.approx.mid = to_real(r.value);
    r.approx.radius = 0;
    return r;
  }
  r.approx = eval_approx(e, a, precision_bits);
  return r;
}

// ---------------------------------------------------------------------------
// Zero test

ZeroTestConfig& zero_test_defaults() {
  static ZeroTestConfig cfg;
  return cfg;
}

SamplePoints::SamplePoints(std::uint64_t seed) : state_(seed) {}

mpq_class SamplePoints::next() {
  std::mt19937_64 gen(state_);
  state_ = gen();
  std::uint64_t r1 = gen(), r2 = gen();
  long den = 1 + static_cast<long>(r1 % 97);
  long num = static_cast<long>(r2 % static_cast<std::uint64_t>(20 * den + 1)) - 10 * den;
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

Assignment SamplePoints::point(const std::set<std::string>& vars) {
  Assignment a;
  for (auto& v : vars) a[v] = next();
  return a;
}

std::string to_string(ZeroKind k) {
  switch (k) {
    case ZeroKind::ProvablyZero: return "ProvablyZero";
    case ZeroKind::ProvablyNonzero: return "ProvablyNonzero";
    case ZeroKind::ProbablyZero: return "ProbablyZero";
    case ZeroKind::ProbablyNonzero: return "ProbablyNonzero";
    case ZeroKind::Indeterminate: return "Indeterminate";
  }
  return "?";
}

std::string witness_string(const Assignment& a) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (auto& [k, v] : a) {
    if (!first) os << ", ";
    first = false;
    os << k << '=' << v.get_str();
  }
  os << '}';
  return os.str();
}

std::string Verdict::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  if (kind == ZeroKind::ProbablyZero) os << '(' << samples << ')';
  if (!witness.empty()) os << " at " << witness_string(witness) << " value " << witness_value;
  if (!note.empty()) os << " [" << note << ']';
  return os.str();
}

namespace {

std::string real_str(const Real& r) {
  std::ostringstream os;
  os.precision(12);
  os << r;
  return os.str();
}

Verdict rational_witness(const Expr& c, const ZeroTestConfig& cfg) {
  Verdict v;
  v.kind = ZeroKind::ProvablyNonzero;
  SamplePoints pts(cfg.seed);
  auto vars = free_symbols(c);
  for (int i = 0; i < 200; ++i) {
    Assignment a = pts.point(vars);
    try {
      mpq_class q = eval_exact(c, a);
      if (q != 0) {
        v.witness = a;
        v.witness_value = q.get_str();
        return v;
      }
    } catch (const PoleError&) {
    }
  }
  return v;
}

Verdict sample_transcendental(const Expr& c, const ZeroTestConfig& cfg) {
  Verdict v;
  SamplePoints pts(cfg.seed);
  auto vars = free_symbols(c);
  Real tol;
  int valid = 0;
  for (int attempt = 0; attempt < 4 * cfg.samples && valid < cfg.samples; ++attempt) {
    Assignment a = pts.point(vars);
    Approx x;
    try {
      x = eval_approx(c, a, cfg.precision);
    } catch (const PoleError&) {
      continue;
    }
    ++valid;
    PrecisionGuard g(2 * cfg.precision);
    tol = boost::multiprecision::ldexp(Real(1), cfg.tolerance_log2);
    if (boost::multiprecision::abs(x.mid) >= tol + x.radius) {
      v.kind = ZeroKind::ProbablyNonzero;
      v.samples = valid;
      v.witness = a;
      v.witness_value = real_str(x.mid);
      return v;
    }
  }
  if (valid == 0) {
    v.kind = ZeroKind::Indeterminate;
    v.note = "all sample points hit poles";
    return v;
  }
  v.kind = ZeroKind::ProbablyZero;
  v.samples = valid;
  return v;
}

}  // namespace

Expr random_polynomial(std::mt19937_64& gen, const std::string& s, int max_degree) {
  int deg = 1 + static_cast<int>(gen() % static_cast<unsigned>(std::max(1, max_degree)));
  Expr p(0);
  for (int k = 0; k < deg; ++k) {
    long n = static_cast<long>(gen() % 19) - 9, d = 1 + static_cast<long>(gen() % 5);
    p += Expr(mpq_class(n, d)) * pow(Expr::sym(s), k);
  }
  long lead = 1 + static_cast<long>(gen() % 5);
  return normal_form(p + Expr(gen() % 2 ? lead : -lead) * pow(Expr::sym(s), deg));
}

Verdict is_zero(const Expr& e, const ZeroTestConfig& cfg) {
  if (e.has_opaque()) {
    Expr c = canonicalize(e);
    Verdict v;
    if (c.is_zero()) {
      v.kind = ZeroKind::ProvablyZero;
      v.note = "formal identity in opaque functions";
      return v;
    }
    std::mt19937_64 gen(cfg.seed ^ 0x5bd1e995ULL);
    auto names = opaque_names(e);
    for (int k = 0; k < cfg.instantiations; ++k) {
      std::map<std::string, Expr> fns;
      for (auto& n : names) fns[n] = random_polynomial(gen, "s_", 3);
      Verdict w = is_zero(instantiate_functions(e, fns, "s_"), cfg);
      if (!w.zero()) {
        w.kind = ZeroKind::ProbablyNonzero;
        std::ostringstream os;
        for (auto& [n, p] : fns) os << n << "(s_)=" << p << ' ';
        w.note = os.str();
        return w;
      }
    }
    v.kind = ZeroKind::ProbablyZero;
    v.samples = cfg.instantiations;
    v.note = "random polynomial instances of opaque functions";
    return v;
  }
  Expr c = canonicalize(e);
  if (c.is_zero()) {
    Verdict v;
    v.kind = ZeroKind::ProvablyZero;
    return v;
  }
  if (c.is_rational()) return rational_witness(c, cfg);
  return sample_transcendental(c, cfg);
}

Verdict is_zero(const Expr& e) { return is_zero(e, zero_test_defaults()); }

bool vanishes(const Expr& e) { return is_zero(e).zero(); }

}  // namespace dmzkit
