#include "dmzkit/geometry.hpp"

#include <sstream>
#include <stdexcept>

namespace dmzkit {

Chart::Chart(std::vector<std::string> names) : coords(std::move(names)) {
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i].empty()) throw std::invalid_argument("empty coordinate name");
    if (!idx_.emplace(coords[i], i).second)
      throw std::invalid_argument("duplicate coordinate '" + coords[i] + "'");
  }
}

int Chart::index(const std::string& name) const {
  auto it = idx_.find(name);
  return it == idx_.end() ? -1 : static_cast<int>(it->second);
}

ChartPtr make_chart(std::vector<std::string> names) { return std::make_shared<const Chart>(std::move(names)); }

// ---------------------------------------------------------------------------

VectorField::VectorField(ChartPtr chart, std::vector<Expr> coeffs) : chart_(std::move(chart)) {
  if (coeffs.size() != chart_->dim()) throw std::invalid_argument("coefficient count differs from chart dimension");
  c_.reserve(coeffs.size());
  for (auto& e : coeffs) c_.push_back(canonicalize(e));
  for (auto& n : chart_->coords) vars_.push_back(symbol_var(n));
}

VectorField VectorField::from_map(ChartPtr chart, const std::map<std::string, Expr>& c) {
  std::vector<Expr> v(chart->dim(), Expr(0));
  for (auto& [name, e] : c) {
    int i = chart->index(name);
    if (i < 0) throw std::invalid_argument("unknown coordinate '" + name + "'");
    v[i] = e;
  }
  return VectorField(std::move(chart), std::move(v));
}

VectorField VectorField::basis(ChartPtr chart, const std::string& coord) {
  return from_map(std::move(chart), {{coord, Expr(1)}});
}

const Expr& VectorField::coeff(const std::string& name) const {
  int i = chart_->index(name);
  if (i < 0) throw std::invalid_argument("unknown coordinate '" + name + "'");
  return c_[i];
}

RatFunc VectorField::apply(const RatFunc& f) const {
  RatFunc s;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k].is_zero()) continue;
    RatFunc d = f.diff(vars_[k]);
    if (!d.is_zero()) s += to_rat(c_[k]) * d;
  }
  return s;
}

Expr VectorField::apply(const Expr& f) const { return canonicalize(to_expr(apply(to_rat(f)))); }

RVec VectorField::rat() const {
  RVec v;
  v.reserve(c_.size());
  for (auto& e : c_) v.push_back(to_rat(e));
  return v;
}

bool VectorField::is_zero() const {
  for (auto& e : c_)
    if (!e.is_zero()) return false;
  return true;
}

static void same_chart(const VectorField& a, const VectorField& b) {
  if (!(a.chart() == b.chart() || *a.chart() == *b.chart()))
    throw std::invalid_argument("vector fields live on different charts");
}

VectorField VectorField::operator+(const VectorField& o) const {
  same_chart(*this, o);
  std::vector<Expr> v;
  for (std::size_t i = 0; i < c_.size(); ++i) v.push_back(c_[i] + o.c_[i]);
  return VectorField(chart_, std::move(v));
}

VectorField VectorField::operator-(const VectorField& o) const {
  same_chart(*this, o);
  std::vector<Expr> v;
  for (std::size_t i = 0; i < c_.size(); ++i) v.push_back(c_[i] - o.c_[i]);
  return VectorField(chart_, std::move(v));
}

VectorField VectorField::scaled(const Expr& f) const {
  std::vector<Expr> v;
  for (auto& e : c_) v.push_back(e * f);
  return VectorField(chart_, std::move(v));
}

std::string to_string(const VectorField& X) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < X.coeffs().size(); ++i) {
    if (X[i].is_zero()) continue;
    if (!first) os << ", ";
    first = false;
    os << X.chart()->coords[i] << ": " << to_string(X[i]);
  }
  if (first) os << "0";
  return os.str();
}

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
  same_chart(X, Y);
  std::vector<Expr> v;
  for (std::size_t k = 0; k < X.coeffs().size(); ++k) {
    RatFunc r = X.apply(to_rat(Y[k])) - Y.apply(to_rat(X[k]));
    v.push_back(to_expr(r));
  }
  return VectorField(X.chart(), std::move(v));
}

// ---------------------------------------------------------------------------

Distribution::Distribution(ChartPtr chart, std::vector<VectorField> fields)
    : chart_(std::move(chart)), fields_(std::move(fields)) {
  std::vector<RVec> rows;
  for (auto& f : fields_) {
    if (!(*f.chart() == *chart_)) throw std::invalid_argument("field on a different chart");
    rows.push_back(f.rat());
  }
  auto b = bareiss_rank(rows);
  rank_ = b.rank;
  locus_ = normal_form(to_expr(RatFunc::from_poly(b.locus.primitive())));
}

Span Distribution::span() const {
  Span s(chart_->dim());
  for (auto& f : fields_) s.insert(f.rat());
  return s;
}

std::vector<VectorField> Distribution::basis() const {
  Span s(chart_->dim());
  std::vector<VectorField> out;
  for (auto& f : fields_)
    if (s.insert(f.rat())) out.push_back(f);
  return out;
}

bool Distribution::contains(const VectorField& X) const { return span().contains(X.rat()); }

bool Distribution::contains(const Distribution& D) const {
  Span s = span();
  for (auto& f : D.fields())
    if (!s.contains(f.rat())) return false;
  return true;
}

bool same_span(const Distribution& a, const Distribution& b) {
  return a.rank() == b.rank() && a.contains(b) && b.contains(a);
}

Distribution derive(const Distribution& D) {
  auto B = D.basis();
  Span s(D.chart()->dim());
  std::vector<VectorField> out;
  for (auto& f : B)
    if (s.insert(f.rat())) out.push_back(f);
  for (std::size_t i = 0; i < B.size(); ++i)
    for (std::size_t j = i + 1; j < B.size(); ++j) {
      if (s.rank() == s.dim()) break;
      VectorField z = lie_bracket(B[i], B[j]);
      if (s.insert(z.rat())) out.push_back(z);
    }
  return Distribution(D.chart(), std::move(out));
}

std::vector<Distribution> derived_flag(const Distribution& D) {
  std::vector<Distribution> flag{Distribution(D.chart(), D.basis())};
  while (true) {
    Distribution next = derive(flag.back());
    if (next.rank() == flag.back().rank()) break;
    flag.push_back(std::move(next));
  }
  return flag;
}

Distribution cauchy_characteristic(const Distribution& D) {
  auto B = D.basis();
  std::size_t r = B.size(), N = D.chart()->dim();
  Span s(N);
  for (auto& f : B) s.insert(f.rat());
  // rem[i][j] = [X_i, X_j] modulo D
  std::vector<std::vector<RVec>> rem(r, std::vector<RVec>(r, RVec(N, RatFunc(0))));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      rem[i][j] = s.reduce(lie_bracket(B[i], B[j]).rat());
      for (std::size_t c = 0; c < N; ++c) rem[j][i][c] = -rem[i][j][c];
    }
  std::vector<RVec> M;
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t c = 0; c < N; ++c) {
      RVec row(r, RatFunc(0));
      bool nz = false;
      for (std::size_t i = 0; i < r; ++i) {
        row[i] = rem[i][j][c];
        nz = nz || !row[i].is_zero();
      }
      if (nz) M.push_back(std::move(row));
    }
  std::vector<VectorField> out;
  for (auto& a : nullspace(M, r)) {
    std::vector<Expr> v(N, Expr(0));
    for (std::size_t c = 0; c < N; ++c) {
      RatFunc acc;
      for (std::size_t i = 0; i < r; ++i)
        if (!a[i].is_zero()) acc += a[i] * to_rat(B[i][c]);
      v[c] = to_expr(acc);
    }
    out.emplace_back(D.chart(), std::move(v));
  }
  return Distribution(D.chart(), std::move(out));
}

bool is_frobenius(const Distribution& D) {
  auto B = D.basis();
  Span s(D.chart()->dim());
  for (auto& f : B) s.insert(f.rat());
  for (std::size_t i = 0; i < B.size(); ++i)
    for (std::size_t j = i + 1; j < B.size(); ++j)
      if (!s.contains(lie_bracket(B[i], B[j]).rat())) return false;
  return true;
}

DerivedType derived_type(const Distribution& D) {
  DerivedType t;
  for (auto& E : derived_flag(D)) t.emplace_back(E.rank(), cauchy_characteristic(E).rank());
  return t;
}

std::string to_string(const DerivedType& t) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << '[' << t[i].first << ',' << t[i].second << ']';
  os << ']';
  return os.str();
}

// ---------------------------------------------------------------------------

Distribution direct_sum(const std::vector<Distribution>& parts) {
  if (parts.empty()) throw std::invalid_argument("no parts");
  std::vector<VectorField> f;
  for (auto& p : parts) {
    if (!(*p.chart() == *parts[0].chart())) throw std::invalid_argument("parts on different charts");
    for (auto& X : p.fields()) f.push_back(X);
  }
  return Distribution(parts[0].chart(), std::move(f));
}

static void warn_locus(const Distribution& D, const std::string& what, std::vector<std::string>& w) {
  if (!D.degenerate_locus().is_num())
    w.push_back(what + ": rank drops where " + to_string(D.degenerate_locus()) + " = 0");
}

HyperbolicReport check_n_hyperbolic(const std::vector<Distribution>& parts) {
  HyperbolicReport rep;
  std::size_t n = parts.size();
  if (n == 0) throw std::invalid_argument("no parts");
  std::size_t dim = parts[0].chart()->dim();
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    rep.checks.push_back({std::move(name), ok, std::move(detail)});
  };
  bool ranks = true;
  for (auto& p : parts) ranks = ranks && p.fields().size() == 2 && p.rank() == 2;
  add("each part has rank 2", ranks);
  if (dim != 3 * n + 1) {
    add("ambient dimension 3n+1", false,
        "wrong ambient dimension: " + std::to_string(dim) + " != " + std::to_string(3 * n + 1));
    rep.ok = false;
    return rep;
  }
  add("ambient dimension 3n+1", true);
  if (!ranks) return rep;

  rep.H = direct_sum(parts);
  add("rank H = 2n", rep.H.rank() == 2 * n, "rank " + std::to_string(rep.H.rank()));
  warn_locus(rep.H, "H", rep.warnings);
  Span sH = rep.H.span();

  std::string bad;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (auto& X : parts[i].fields())
        for (auto& Y : parts[j].fields())
          if (bad.empty() && !sH.contains(lie_bracket(X, Y).rat()))
            bad = "[H_" + std::to_string(i + 1) + ",H_" + std::to_string(j + 1) + "] = " +
                  to_string(lie_bracket(X, Y));
  add("[H_i,H_j] = 0 mod H (i != j)", bad.empty(), bad);

  Span sZ = sH;
  bool zi_out = true, indep = true;
  for (std::size_t i = 0; i < n; ++i) {
    RVec z = lie_bracket(parts[i].fields()[0], parts[i].fields()[1]).rat();
    if (sH.contains(z)) zi_out = false;
    if (!sZ.insert(z)) indep = false;
  }
  add("[H_i,H_i] = Z_i outside H", zi_out);
  add("Z_1 ^ ... ^ Z_n != 0 mod H", indep, "rank H + Z = " + std::to_string(sZ.rank()));

  auto flag = derived_flag(rep.H);
  for (auto& E : flag) rep.type.emplace_back(E.rank(), cauchy_characteristic(E).rank());
  DerivedType want{{2 * n, 0}, {3 * n, n}, {3 * n + 1, 3 * n + 1}};
  add("derived type " + to_string(want), rep.type == want, "got " + to_string(rep.type));
  if (flag.size() >= 2) {
    rep.H1 = flag[1];
    warn_locus(rep.H1, "H^(1)", rep.warnings);
    rep.chH1 = cauchy_characteristic(rep.H1);
    add("ch H^(1) inside H", rep.H.contains(rep.chH1));
  }
  rep.ok = true;
  for (auto& c : rep.checks) rep.ok = rep.ok && c.ok;
  return rep;
}

// ---------------------------------------------------------------------------

std::size_t jacobian_rank(const ChartPtr& chart, const std::vector<Expr>& fns) {
  std::vector<RVec> rows;
  for (auto& f : fns) {
    RatFunc r = to_rat(canonicalize(f));
    RVec row;
    for (auto& c : chart->coords) row.push_back(r.diff(symbol_var(c)));
    rows.push_back(std::move(row));
  }
  return bareiss_rank(rows).rank;
}

InvariantsReport verify_invariants_report(const Distribution& D, const std::vector<Expr>& fns) {
  InvariantsReport rep;
  std::string bad;
  for (auto& X : D.fields())
    for (auto& f : fns) {
      if (!bad.empty()) break;
      Verdict v = is_zero(X.apply(f));
      if (!v.zero()) bad = "field (" + to_string(X) + ") moves " + to_string(f);
    }
  rep.checks.push_back({"fields annihilate the functions", bad.empty(), bad});
  std::size_t want = D.chart()->dim() - D.rank();
  rep.checks.push_back({"count = dim - rank", fns.size() == want,
                        std::to_string(fns.size()) + " vs " + std::to_string(want)});
  std::size_t jr = jacobian_rank(D.chart(), fns);
  rep.checks.push_back({"independent (Jacobian rank)", jr == fns.size(), "rank " + std::to_string(jr)});
  rep.ok = true;
  for (auto& c : rep.checks) rep.ok = rep.ok && c.ok;
  return rep;
}

bool verify_invariants(const Distribution& D, const std::vector<Expr>& fns) {
  return verify_invariants_report(D, fns).ok;
}

Distribution adapted_A(const std::vector<Distribution>& parts) {
  std::vector<VectorField> f;
  for (auto& p : parts) {
    const auto& X = p.fields().at(0);
    const auto& V = p.fields().at(1);
    f.push_back(V);
    f.push_back(lie_bracket(V, X));
  }
  return Distribution(parts.at(0).chart(), std::move(f));
}

}  // namespace dmzkit
