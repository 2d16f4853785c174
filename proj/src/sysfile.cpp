#include "dmzkit/sysfile.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace dmzkit {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  return out;
}

bool is_name(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

SystemFile SystemFile::parse_text(const std::string& text, const std::string& origin) {
  SystemFile f;
  f.origin_ = origin;
  std::istringstream in(text);
  std::string section;
  int lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') f.fail(lineno, "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) f.fail(lineno, "expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    bool quoted = false;
    if (!value.empty() && value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') f.fail(lineno, "unterminated string");
      value = value.substr(1, value.size() - 2);
      quoted = true;
    }
    auto br = key.find('[');
    if (br == std::string::npos) {
      if (!is_name(key)) f.fail(lineno, "bad key '" + key + "'");
      if (f.scalars_.count(key)) f.fail(lineno, "duplicate key '" + key + "'");
      f.scalars_[key] = {value, lineno};
      continue;
    }
    FileEntry e;
    e.name = trim(std::string_view(key).substr(0, br));
    if (!is_name(e.name)) f.fail(lineno, "bad key '" + key + "'");
    std::size_t pos = br;
    while (pos < key.size()) {
      if (key[pos] != '[') f.fail(lineno, "bad index syntax in '" + key + "'");
      auto close = key.find(']', pos);
      if (close == std::string::npos) f.fail(lineno, "unterminated index in '" + key + "'");
      e.index.push_back(trim(std::string_view(key).substr(pos + 1, close - pos - 1)));
      pos = close + 1;
      while (pos < key.size() && key[pos] == ' ') ++pos;
    }
    if (!quoted) f.fail(lineno, "expression values must be quoted");
    e.value = value;
    e.quoted = quoted;
    e.line = lineno;
    e.section = section;
    for (auto& other : f.entries_)
      if (other.name == e.name && other.index == e.index) f.fail(lineno, "duplicate entry '" + key + "'");
    f.entries_.push_back(std::move(e));
  }
  return f;
}

SystemFile SystemFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

void SystemFile::fail(int line, const std::string& msg) const {
  throw InputError(origin_ + (line > 0 ? ":" + std::to_string(line) : "") + ": " + msg);
}

std::optional<std::string> SystemFile::get(const std::string& key) const {
  auto it = scalars_.find(key);
  if (it == scalars_.end()) return std::nullopt;
  return it->second.first;
}

std::string SystemFile::require(const std::string& key) const {
  auto v = get(key);
  if (!v) fail(0, "missing key '" + key + "'");
  return *v;
}

std::vector<std::string> SystemFile::list(const std::string& key) const {
  auto v = get(key);
  return v ? split_list(*v) : std::vector<std::string>{};
}

std::string SystemFile::kind() const { return require("kind"); }

std::vector<std::string> SystemFile::coords() const {
  auto c = list("coords");
  if (c.empty()) fail(0, "missing key 'coords'");
  for (auto& n : c)
    if (!is_name(n)) fail(scalars_.at("coords").second, "bad coordinate name '" + n + "'");
  return c;
}

std::vector<const FileEntry*> SystemFile::indexed(const std::string& name) const {
  std::vector<const FileEntry*> out;
  for (auto& e : entries_)
    if (e.name == name) out.push_back(&e);
  return out;
}

ParseOptions SystemFile::parse_options() const {
  ParseOptions o;
  for (auto& n : list("functions")) o.functions.insert(n);
  return o;
}

Expr SystemFile::expr(const std::string& text, const std::set<std::string>& allowed, int line) const {
  Expr e;
  try {
    e = parse(text, parse_options());
  } catch (const ParseError& err) {
    fail(line, err.what());
  }
  for (auto& s : free_symbols(e))
    if (!allowed.count(s)) fail(line, "undeclared symbol '" + s + "'");
  return e;
}

Expr SystemFile::expr(const FileEntry& e, const std::set<std::string>& allowed) const {
  return expr(e.value, allowed, e.line);
}

namespace {

int index_of(const SystemFile& f, const FileEntry& e, std::size_t pos, std::size_t n) {
  const std::string& s = e.index.at(pos);
  int k = 0;
  try {
    std::size_t used = 0;
    k = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    f.fail(e.line, "index '" + s + "' is not an integer");
  }
  if (k < 1 || k > static_cast<int>(n)) f.fail(e.line, "index " + s + " out of range 1.." + std::to_string(n));
  return k - 1;
}

void arity(const SystemFile& f, const FileEntry& e, std::size_t want) {
  if (e.index.size() != want)
    f.fail(e.line, e.name + " takes " + std::to_string(want) + " index" + (want == 1 ? "" : "es"));
}

void expect_kind(const SystemFile& f, std::initializer_list<const char*> kinds) {
  std::string k = f.kind();
  for (auto* want : kinds)
    if (k == want) return;
  f.fail(0, "unexpected kind '" + k + "'");
}

void reject_unknown(const SystemFile& f, std::initializer_list<const char*> names) {
  for (auto& e : f.entries()) {
    bool known = false;
    for (auto* n : names) known = known || e.name == n;
    if (!known) f.fail(e.line, "unknown entry '" + e.name + "' for kind " + f.kind());
  }
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

}  // namespace

DmzSystem read_dmz(const SystemFile& f) {
  expect_kind(f, {"dmz"});
  reject_unknown(f, {"Gamma", "C", "h"});
  auto coords = f.coords();
  auto allowed = as_set(coords);
  DmzSystem S(coords);
  std::size_t n = coords.size();
  for (auto* e : f.indexed("Gamma")) {
    arity(f, *e, 3);
    int i = index_of(f, *e, 0, n), j = index_of(f, *e, 1, n), k = index_of(f, *e, 2, n);
    if (i == j) f.fail(e->line, "Gamma[i][j][k] needs i != j");
    S.set_gamma(k, i, j, f.expr(*e, allowed));
  }
  for (auto* e : f.indexed("C")) {
    arity(f, *e, 2);
    int i = index_of(f, *e, 0, n), j = index_of(f, *e, 1, n);
    if (i == j) f.fail(e->line, "C[i][j] needs i != j");
    S.set_c(i, j, f.expr(*e, allowed));
  }
  return S;
}

std::optional<LamePotentials> read_potentials(const SystemFile& f) {
  auto hs = f.indexed("h");
  if (hs.empty()) return std::nullopt;
  auto coords = f.coords();
  LamePotentials h{std::vector<Expr>(coords.size())};
  std::vector<bool> seen(coords.size());
  for (auto* e : hs) {
    arity(f, *e, 1);
    int i = index_of(f, *e, 0, coords.size());
    h.h[i] = f.expr(*e, as_set(coords));
    seen[i] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) f.fail(0, "missing h[" + std::to_string(i + 1) + "]");
  return h;
}

GdmzSystem read_gdmz(const SystemFile& f) {
  expect_kind(f, {"gdmz"});
  reject_unknown(f, {"f"});
  GdmzSystem S;
  S.coords = f.coords();
  S.dep = f.get("dep").value_or("u");
  auto allowed = as_set(S.coords);
  allowed.insert(S.dep);
  for (std::size_t i = 0; i < S.coords.size(); ++i) allowed.insert(S.d1(static_cast<int>(i)));
  std::size_t n = S.coords.size();
  for (auto* e : f.indexed("f")) {
    arity(f, *e, 2);
    int i = index_of(f, *e, 0, n), j = index_of(f, *e, 1, n);
    if (i == j) f.fail(e->line, "f[i][j] needs i != j");
    S.f[{std::min(i, j), std::max(i, j)}] = f.expr(*e, allowed);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!S.f.count({static_cast<int>(i), static_cast<int>(j)}))
        f.fail(0, "missing f[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]");
  return S;
}

WaveMatrix read_wave(const SystemFile& f) {
  expect_kind(f, {"wave"});
  reject_unknown(f, {"A"});
  WaveMatrix A{f.coords(), {}};
  auto allowed = as_set(A.coords);
  for (auto* e : f.indexed("A")) {
    arity(f, *e, 2);
    int i = index_of(f, *e, 0, A.n()), j = index_of(f, *e, 1, A.n());
    if (i == j) f.fail(e->line, "A[i][j] needs i != j");
    A.set(i, j, f.expr(*e, allowed));
  }
  return A;
}

HydroSystem read_hydro(const SystemFile& f, std::vector<Expr>* flow) {
  expect_kind(f, {"hydro"});
  reject_unknown(f, {"v", "w"});
  HydroSystem V;
  V.vars = f.coords();
  auto allowed = as_set(V.vars);
  auto fill = [&](const char* name, std::vector<Expr>& out) {
    auto es = f.indexed(name);
    if (es.empty()) return false;
    out.assign(V.n(), Expr());
    std::vector<bool> seen(V.n());
    for (auto* e : es) {
      arity(f, *e, 1);
      int i = index_of(f, *e, 0, V.n());
      out[i] = f.expr(*e, allowed);
      seen[i] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i]) f.fail(0, std::string("missing ") + name + "[" + std::to_string(i + 1) + "]");
    return true;
  };
  if (!fill("v", V.v)) f.fail(0, "hydro files need v[i] entries");
  std::vector<Expr> w;
  if (fill("w", w) && flow) *flow = w;
  return V;
}

ConstructInput read_construct(const SystemFile& f) {
  expect_kind(f, {"distribution"});
  reject_unknown(f, {"X", "inverse", "invariant"});
  auto coords = f.coords();
  auto chart = make_chart(coords);
  auto allowed = as_set(coords);
  ConstructInput in;
  in.xs = f.list("independents");
  in.dep = f.get("dep").value_or("u");
  auto verticals = f.list("verticals");
  if (in.xs.empty()) f.fail(0, "missing key 'independents'");
  if (verticals.size() != in.xs.size()) f.fail(0, "one vertical coordinate per independent variable");
  for (auto& v : verticals)
    if (!allowed.count(v)) f.fail(0, "vertical '" + v + "' is not a coordinate");
  in.p = f.expr(f.require("p"), allowed);

  std::vector<std::map<std::string, Expr>> X(in.xs.size());
  for (auto* e : f.indexed("X")) {
    arity(f, *e, 2);
    int i = index_of(f, *e, 0, in.xs.size());
    if (!allowed.count(e->index[1])) f.fail(e->line, "'" + e->index[1] + "' is not a coordinate");
    X[i][e->index[1]] = f.expr(*e, allowed);
  }
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i].empty()) f.fail(0, "missing field X[" + std::to_string(i + 1) + "]");
    in.parts.emplace_back(chart, std::vector<VectorField>{VectorField::from_map(chart, X[i]),
                                                          VectorField::basis(chart, verticals[i])});
  }

  std::set<std::string> jets{in.dep};
  for (auto& x : in.xs) jets.insert(in.dep + "_" + x);
  std::set<std::string> jet_allowed = jets;
  for (auto& x : in.xs) jet_allowed.insert(x);
  for (auto* e : f.indexed("inverse")) {
    arity(f, *e, 1);
    if (!allowed.count(e->index[0])) f.fail(e->line, "'" + e->index[0] + "' is not a coordinate");
    in.inverse[e->index[0]] = f.expr(*e, jet_allowed);
  }
  for (auto* e : f.indexed("invariant")) in.invariants.push_back(f.expr(*e, allowed));
  return in;
}

namespace {

void write_meta(std::ostringstream& os, const std::vector<std::pair<std::string, std::string>>& meta) {
  for (auto& [k, v] : meta) os << k << " = " << v << "\n";
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

}  // namespace

std::string write_dmz(const DmzSystem& S, const std::vector<std::pair<std::string, std::string>>& meta) {
  std::ostringstream os;
  os << "kind = dmz\ncoords = " << join(S.coords()) << "\n";
  write_meta(os, meta);
  os << "\n[gamma]\n";
  for (auto& [k, e] : S.gammas()) {
    Expr c = canonicalize(e);
    if (c.is_zero()) continue;
    os << "Gamma[" << k[1] + 1 << "][" << k[2] + 1 << "][" << k[0] + 1 << "] = \"" << to_string(c) << "\"\n";
  }
  if (S.has_c()) {
    os << "\n[c]\n";
    for (auto& [ij, e] : S.cs()) {
      Expr c = canonicalize(e);
      if (!c.is_zero()) os << "C[" << ij.first + 1 << "][" << ij.second + 1 << "] = \"" << to_string(c) << "\"\n";
    }
  }
  return os.str();
}

std::string write_gdmz(const GdmzSystem& S, const std::vector<std::pair<std::string, std::string>>& meta) {
  std::ostringstream os;
  os << "kind = gdmz\ncoords = " << join(S.coords) << "\ndep = " << S.dep << "\n";
  write_meta(os, meta);
  os << "\n[rhs]\n";
  for (auto& [ij, e] : S.f)
    os << "f[" << ij.first + 1 << "][" << ij.second + 1 << "] = \"" << to_string(canonicalize(e)) << "\"\n";
  return os.str();
}

}  // namespace dmzkit
