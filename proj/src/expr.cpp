#include "dmzkit/expr.hpp"

#include <algorithm>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dmzkit {

struct Node {
  Kind kind = Kind::Num;
  Func func = Func::Sin;
  int order = 0;
  long exp = 0;
  mpq_class q;
  std::string name;
  std::vector<Expr> ch;
  std::size_t hash = 0;
  bool rational = true;
  bool opaque = false;
  mutable std::shared_ptr<const RatFunc> rat;
};

namespace {

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_q(const mpq_class& q) {
  std::size_t h = mpz_get_ui(q.get_num_mpz_t());
  h = mix(h, mpz_get_ui(q.get_den_mpz_t()));
  return mix(h, static_cast<std::size_t>(mpq_sgn(q.get_mpq_t()) + 1));
}

}  // namespace

struct Builder {
  static Expr make(Node n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 1000003u;
    switch (n.kind) {
      case Kind::Num: h = mix(h, hash_q(n.q)); break;
      case Kind::Sym: h = mix(h, std::hash<std::string>()(n.name)); break;
      case Kind::Fn:
        h = mix(h, static_cast<std::size_t>(n.func));
        h = mix(h, std::hash<std::string>()(n.name));
        h = mix(h, static_cast<std::size_t>(n.order));
        n.rational = false;
        if (n.func == Func::Opaque) n.opaque = true;
        break;
      case Kind::Pow: h = mix(h, static_cast<std::size_t>(n.exp)); break;
      default: break;
    }
    for (auto& c : n.ch) {
      h = mix(h, c.hash());
      n.rational = n.rational && c.p_->rational;
      n.opaque = n.opaque || c.p_->opaque;
    }
    n.hash = h;
    return Expr(std::make_shared<const Node>(std::move(n)));
  }
  static Expr num(const mpq_class& q) {
    Node n;
    n.kind = Kind::Num;
    n.q = q;
    n.q.canonicalize();
    return make(std::move(n));
  }
  static Expr raw(Kind k, std::vector<Expr> ch, long exp = 0) {
    Node n;
    n.kind = k;
    n.ch = std::move(ch);
    n.exp = exp;
    return make(std::move(n));
  }
};

namespace {

const Expr& zero_expr() {
  static const Expr z = Builder::num(0);
  return z;
}

// Split a term into numeric coefficient and factor list of (base, exponent).
struct Parts {
  mpq_class coeff = 1;
  std::vector<std::pair<Expr, long>> factors;
};

Parts parts_of(const Expr& e) {
  Parts p;
  switch (e.kind()) {
    case Kind::Num: p.coeff = e.num(); break;
    case Kind::Pow: p.factors.emplace_back(e.args()[0], e.exponent()); break;
    case Kind::Mul:
      for (auto& c : e.args()) {
        if (c.is_num()) p.coeff *= c.num();
        else if (c.kind() == Kind::Pow) p.factors.emplace_back(c.args()[0], c.exponent());
        else p.factors.emplace_back(c, 1);
      }
      break;
    default: p.factors.emplace_back(e, 1);
  }
  return p;
}

int kind_rank(Kind k) {
  switch (k) {
    case Kind::Sym: return 0;
    case Kind::Fn: return 1;
    case Kind::Add: return 2;
    case Kind::Num: return 3;
    case Kind::Mul: return 4;
    case Kind::Pow: return 5;
  }
  return 6;
}

int base_cmp(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return 0;
  int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.kind()) {
    case Kind::Sym: {
      int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::Fn: {
      if (a.func() != b.func()) return a.func() < b.func() ? -1 : 1;
      if (a.func() == Func::Opaque) {
        int c = a.name().compare(b.name());
        if (c) return c < 0 ? -1 : 1;
        if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
      }
      return compare(a.args()[0], b.args()[0]);
    }
    default: {
      auto& x = a.args();
      auto& y = b.args();
      std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i)
        if (int c = compare(x[i], y[i])) return c;
      if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
      if (a.kind() == Kind::Num) return cmp(a.num(), b.num()) < 0 ? -1 : (a.num() == b.num() ? 0 : 1);
      if (a.kind() == Kind::Pow && a.exponent() != b.exponent())
        return a.exponent() > b.exponent() ? -1 : 1;
      return 0;
    }
  }
}

// Lex order on factor lists, larger exponents first; numbers last.
int parts_cmp(const Parts& pa, const Parts& pb, bool with_coeff) {
  auto& x = pa.factors;
  auto& y = pb.factors;
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (i == x.size()) return y[j].second > 0 ? 1 : -1;
    if (j == y.size()) return x[i].second > 0 ? -1 : 1;
    int c = base_cmp(x[i].first, y[j].first);
    if (c < 0) return x[i].second > 0 ? -1 : 1;
    if (c > 0) return y[j].second > 0 ? 1 : -1;
    if (x[i].second != y[j].second) return x[i].second > y[j].second ? -1 : 1;
    ++i;
    ++j;
  }
  if (!with_coeff) return 0;
  int c = cmp(pa.coeff, pb.coeff);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

Expr build_mul(const mpq_class& coeff, std::vector<std::pair<Expr, long>> fs);

Expr make_pow_raw(const Expr& b, long e) {
  if (e == 1) return b;
  return Builder::raw(Kind::Pow, {b}, e);
}

Expr build_mul(const mpq_class& coeff, std::vector<std::pair<Expr, long>> fs) {
  if (coeff == 0) return zero_expr();
  if (fs.empty()) return Builder::num(coeff);
  if (fs.size() == 1 && coeff == 1) return make_pow_raw(fs[0].first, fs[0].second);
  std::vector<Expr> ch;
  ch.reserve(fs.size() + 1);
  if (coeff != 1) ch.push_back(Builder::num(coeff));
  for (auto& [b, e] : fs) ch.push_back(make_pow_raw(b, e));
  return Builder::raw(Kind::Mul, std::move(ch));
}

}  // namespace

// ---------------------------------------------------------------------------

Expr::Expr() : p_(zero_expr().p_) {}
Expr::Expr(long v) : p_(Builder::num(mpq_class(v)).p_) {}
Expr::Expr(const mpq_class& q) : p_(Builder::num(q).p_) {}

Expr Expr::sym(const std::string& name) {
  if (name.empty()) throw std::invalid_argument("empty symbol name");
  Node n;
  n.kind = Kind::Sym;
  n.name = name;
  return Builder::make(std::move(n));
}

Expr Expr::fn(Func f, const Expr& arg) {
  if (f == Func::Opaque) throw std::invalid_argument("use Expr::opaque for undeclared functions");
  if (arg.is_zero()) {
    switch (f) {
      case Func::Cos:
      case Func::Cosh:
      case Func::Exp: return Expr(1);
      case Func::Ln: break;
      default: return Expr(0);
    }
  }
  if (f == Func::Ln && arg.is_one()) return Expr(0);
  Node n;
  n.kind = Kind::Fn;
  n.func = f;
  n.ch = {arg};
  return Builder::make(std::move(n));
}

Expr Expr::opaque(const std::string& name, int order, const Expr& arg) {
  Node n;
  n.kind = Kind::Fn;
  n.func = Func::Opaque;
  n.name = name;
  n.order = order;
  n.ch = {arg};
  return Builder::make(std::move(n));
}

Expr Expr::add(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  flat.reserve(terms.size());
  for (auto& t : terms) {
    if (t.kind() == Kind::Add)
      for (auto& c : t.args()) flat.push_back(c);
    else if (!t.is_zero())
      flat.push_back(t);
  }
  if (flat.empty()) return zero_expr();
  if (flat.size() == 1) return flat[0];
  mpq_class constant = 0;
  std::vector<Parts> ps;
  ps.reserve(flat.size());
  for (auto& t : flat) {
    if (t.is_num()) {
      constant += t.num();
      continue;
    }
    ps.push_back(parts_of(t));
  }
  std::sort(ps.begin(), ps.end(),
            [](const Parts& a, const Parts& b) { return parts_cmp(a, b, false) < 0; });
  std::vector<Expr> out;
  for (std::size_t i = 0; i < ps.size();) {
    std::size_t j = i + 1;
    mpq_class c = ps[i].coeff;
    while (j < ps.size() && parts_cmp(ps[i], ps[j], false) == 0) c += ps[j++].coeff;
    if (c != 0) out.push_back(build_mul(c, ps[i].factors));
    i = j;
  }
  if (constant != 0) out.push_back(Builder::num(constant));
  if (out.empty()) return zero_expr();
  if (out.size() == 1) return out[0];
  return Builder::raw(Kind::Add, std::move(out));
}

Expr Expr::mul(std::vector<Expr> factors) {
  mpq_class coeff = 1;
  std::vector<std::pair<Expr, long>> fs;
  for (auto& f : factors) {
    if (f.is_num()) {
      coeff *= f.num();
      continue;
    }
    Parts p = parts_of(f);
    coeff *= p.coeff;
    for (auto& x : p.factors) fs.push_back(std::move(x));
  }
  if (coeff == 0) return zero_expr();
  std::stable_sort(fs.begin(), fs.end(),
                   [](const auto& a, const auto& b) { return base_cmp(a.first, b.first) < 0; });
  std::vector<std::pair<Expr, long>> merged;
  for (auto& f : fs) {
    if (!merged.empty() && base_cmp(merged.back().first, f.first) == 0)
      merged.back().second += f.second;
    else
      merged.push_back(std::move(f));
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](auto& f) { return f.second == 0; }),
               merged.end());
  return build_mul(coeff, std::move(merged));
}

Expr Expr::pow(const Expr& b, long e) {
  if (e == 0) return Expr(1);
  if (e == 1) return b;
  switch (b.kind()) {
    case Kind::Num: {
      const mpq_class& q = b.num();
      if (q == 0) {
        if (e < 0) throw std::domain_error("division by zero");
        return zero_expr();
      }
      mpz_class n, d;
      unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
      mpz_pow_ui(n.get_mpz_t(), q.get_num_mpz_t(), a);
      mpz_pow_ui(d.get_mpz_t(), q.get_den_mpz_t(), a);
      mpq_class r = e > 0 ? mpq_class(n, d) : mpq_class(d, n);
      r.canonicalize();
      return Expr(r);
    }
    case Kind::Pow: return Expr::pow(b.args()[0], b.exponent() * e);
    case Kind::Mul: {
      std::vector<Expr> fs;
      for (auto& c : b.args()) fs.push_back(Expr::pow(c, e));
      return Expr::mul(std::move(fs));
    }
    default: return Builder::raw(Kind::Pow, {b}, e);
  }
}

Kind Expr::kind() const { return p_->kind; }
const mpq_class& Expr::num() const { return p_->q; }
const std::string& Expr::name() const { return p_->name; }
Func Expr::func() const { return p_->func; }
int Expr::order() const { return p_->order; }
long Expr::exponent() const { return p_->exp; }
const std::vector<Expr>& Expr::args() const { return p_->ch; }
bool Expr::is_zero() const { return p_->kind == Kind::Num && p_->q == 0; }
bool Expr::is_one() const { return p_->kind == Kind::Num && p_->q == 1; }
bool Expr::is_rational() const { return p_->rational; }
bool Expr::has_opaque() const { return p_->opaque; }
std::size_t Expr::hash() const { return p_->hash; }

std::shared_ptr<const RatFunc> Expr::cached_rat() const {
  std::lock_guard<std::mutex> lk(cache_mutex());
  return p_->rat;
}

void Expr::set_cached_rat(std::shared_ptr<const RatFunc> r) const {
  std::lock_guard<std::mutex> lk(cache_mutex());
  p_->rat = std::move(r);
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.p_ == b.p_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return 0;
  Parts pa = parts_of(a), pb = parts_of(b);
  return parts_cmp(pa, pb, true);
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::add({a, Expr::mul({Expr(-1), b})}); }
Expr operator-(const Expr& a) { return Expr::mul({Expr(-1), a}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::mul({a, Expr::pow(b, -1)}); }
Expr pow(const Expr& b, long e) { return Expr::pow(b, e); }

// ---------------------------------------------------------------------------
// Rendering

std::string func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Tanh: return "tanh";
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
    case Func::Opaque: return "";
  }
  return "";
}

namespace {

void render(std::ostream& os, const Expr& e);

void render_factor(std::ostream& os, const Expr& b, long e) {
  bool paren = b.kind() == Kind::Add;
  if (paren) os << '(';
  render(os, b);
  if (paren) os << ')';
  if (e != 1) os << '^' << e;
}

bool is_negative_term(const Expr& t) {
  if (t.is_num()) return t.num() < 0;
  if (t.kind() == Kind::Mul && t.args()[0].is_num()) return t.args()[0].num() < 0;
  return false;
}

void render(std::ostream& os, const Expr& e) {
  switch (e.kind()) {
    case Kind::Num: os << e.num().get_str(); return;
    case Kind::Sym: os << e.name(); return;
    case Kind::Fn:
      if (e.func() == Func::Opaque) os << e.name() << std::string(static_cast<std::size_t>(e.order()), '\'');
      else os << func_name(e.func());
      os << '(';
      render(os, e.args()[0]);
      os << ')';
      return;
    case Kind::Add: {
      bool first = true;
      for (auto& t : e.args()) {
        if (!first) {
          if (is_negative_term(t)) {
            os << '-';
            render(os, -t);
            continue;
          }
          os << '+';
        }
        first = false;
        render(os, t);
      }
      return;
    }
    case Kind::Pow:
    case Kind::Mul: {
      Parts p = parts_of(e);
      mpz_class n = p.coeff.get_num(), d = p.coeff.get_den();
      if (n < 0) {
        os << '-';
        n = -n;
      }
      std::vector<std::pair<Expr, long>> up, down;
      for (auto& f : p.factors) (f.second > 0 ? up : down).emplace_back(f.first, f.second > 0 ? f.second : -f.second);
      std::size_t nparts = 0;
      if (n != 1 || up.empty()) {
        os << n.get_str();
        ++nparts;
      }
      for (auto& [b, x] : up) {
        if (nparts++) os << '*';
        render_factor(os, b, x);
      }
      std::size_t dparts = (d != 1 ? 1 : 0) + down.size();
      if (!dparts) return;
      os << '/';
      if (dparts > 1) os << '(';
      std::size_t k = 0;
      if (d != 1) {
        os << d.get_str();
        ++k;
      }
      for (auto& [b, x] : down) {
        if (k++) os << '*';
        render_factor(os, b, x);
      }
      if (dparts > 1) os << ')';
      return;
    }
  }
}

void collect_symbols(const Expr& e, std::set<std::string>& out, bool opaque) {
  if (e.kind() == Kind::Sym) {
    if (!opaque) out.insert(e.name());
    return;
  }
  if (opaque && e.kind() == Kind::Fn && e.func() == Func::Opaque) out.insert(e.name());
  for (auto& c : e.args()) collect_symbols(c, out, opaque);
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  render(os, e);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) {
  render(os, e);
  return os;
}

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> s;
  collect_symbols(e, s, false);
  return s;
}

std::set<std::string> opaque_names(const Expr& e) {
  std::set<std::string> s;
  if (!e.has_opaque()) return s;
  collect_symbols(e, s, true);
  return s;
}

}  // namespace dmzkit
