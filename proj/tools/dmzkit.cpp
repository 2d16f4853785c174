// Command-line front end: verification reports over system files.
//
// Exit status: 0 pass, 1 verification failure, 2 input error.

#include <CLI11.hpp>

#include "dmzkit/gauge.hpp"
#include "dmzkit/sysfile.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace dmzkit;
namespace fs = std::filesystem;

namespace {

constexpr int kPass = 0, kFail = 1, kInput = 2;

int verdict(std::ostream& os, bool ok) {
  os << "verdict: " << (ok ? "pass" : "fail") << "\n";
  return ok ? kPass : kFail;
}

std::string pair_label(const std::string& name, std::pair<int, int> ij) {
  return name + std::to_string(ij.first + 1) + std::to_string(ij.second + 1);
}

std::set<std::string> coord_set(const std::vector<std::string>& c) { return {c.begin(), c.end()}; }

// Splits a comma list at top-level commas only.
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

mpq_class rational_arg(const std::string& s, const char* what) {
  Expr e;
  try {
    e = parse(s);
  } catch (const ParseError& err) {
    throw InputError(std::string(what) + ": " + err.what());
  }
  if (!e.is_num()) throw InputError(std::string(what) + " must be a rational number");
  return eval_exact(e, {});
}

// ---------------------------------------------------------------------------

int cmd_check_involutive(const SystemFile& f, std::ostream& os) {
  DmzSystem S = read_dmz(f);
  auto rep = is_involutive(S);
  os << "check-involutive " << f.origin() << "\n  " << rep.describe() << "\n";
  return verdict(os, rep.ok);
}

int cmd_compat(const SystemFile& f, std::ostream& os) {
  GdmzSystem G = f.kind() == "dmz" ? dmz_to_gdmz(read_dmz(f)) : read_gdmz(f);
  auto s = summarize(gdmz_compatibility_residuals(G));
  os << "compat " << f.origin() << "\n  " << s.describe() << "\n";
  try {
    DmzSystem D = gdmz_to_dmz(G);
    os << "  linear: yes (" << (D.has_c() ? "C != 0" : "C = 0") << ")\n";
  } catch (const NonlinearError& e) {
    os << "  linear: no (" << e.what() << ")\n";
  }
  return verdict(os, s.ok);
}

struct GaugeArgs {
  std::string lambda, to3, tom3;
};

int cmd_gauge(const SystemFile& f, const GaugeArgs& a, std::ostream& os) {
  DmzSystem S = read_dmz(f);
  int given = !a.lambda.empty() + !a.to3.empty() + !a.tom3.empty();
  if (given != 1) throw InputError("gauge: give exactly one of --lambda, --to-3wri, --to-m3wri");
  auto allowed = coord_set(S.coords());
  DmzSystem out;
  std::vector<std::pair<std::string, std::string>> meta;
  try {
    if (!a.lambda.empty()) {
      out = gauge_transform(S, f.expr(a.lambda, allowed));
      meta.push_back({"lambda", "\"" + a.lambda + "\""});
    } else if (!a.to3.empty()) {
      out = to_threewave_gauge(S, f.expr(a.to3, allowed));
      meta.push_back({"multiplier", "\"" + a.to3 + "\""});
    } else {
      out = to_m3wri_gauge(S, f.expr(a.tom3, allowed));
      meta.push_back({"lambda", "\"" + a.tom3 + "\""});
    }
  } catch (const GaugeError& e) {
    os << "gauge " << f.origin() << "\n  " << e.what() << "\n";
    return verdict(os, false);
  }
  os << write_dmz(out, meta);
  return kPass;
}

int cmd_invariants(const SystemFile& f, std::ostream& os) {
  DmzSystem S = read_dmz(f);
  os << "invariants " << f.origin() << "\n";
  for (auto& [ij, h] : gauge_invariants(S)) os << "  " << pair_label("h", ij) << " = " << to_string(canonicalize(h)) << "\n";
  return kPass;
}

int cmd_lame(const SystemFile& f, const std::string& verify, const std::string& variant, std::ostream& os) {
  DmzSystem S = read_dmz(f);
  LameVariant v = variant == "literal" ? LameVariant::Literal : LameVariant::Classical;
  if (variant != "literal" && variant != "classical") throw InputError("--variant is literal or classical");
  std::optional<LamePotentials> h;
  if (!verify.empty()) {
    auto parts = split_top(verify);
    if (parts.size() != S.n()) throw InputError("--verify needs one potential per coordinate");
    h.emplace();
    for (auto& p : parts) h->h.push_back(f.expr(p, coord_set(S.coords())));
  } else {
    h = read_potentials(f);
  }
  os << "lame " << f.origin() << "\n";
  if (!h) {
    try {
      auto got = lame_potentials(S);
      for (std::size_t i = 0; i < got.h.size(); ++i) os << "h[" << i + 1 << "] = \"" << to_string(got.h[i]) << "\"\n";
      return kPass;
    } catch (const IntegrationError& e) {
      os << "  " << e.what() << "\n";
      return verdict(os, false);
    }
  }
  auto s = summarize(lame_residuals(S, *h));
  os << "  potentials: " << s.describe() << "\n";
  auto half = summarize(half_lame_residuals(S.coords(), *h, v));
  os << "  half Lame (" << variant << "): " << half.describe() << "\n";
  return verdict(os, s.ok && half.ok);
}

WaveMatrix wave_of(const SystemFile& f, std::ostream& os) {
  if (f.kind() == "wave") return read_wave(f);
  DmzSystem S = read_dmz(f);
  auto h = read_potentials(f);
  if (!h) h = lame_potentials(S);
  os << "  potentials:";
  for (auto& e : h->h) os << " " << to_string(e);
  os << "\n";
  return wave_from_lame(S.coords(), *h);
}

int cmd_threewave(const SystemFile& f, std::ostream& os) {
  os << "threewave " << f.origin() << "\n";
  WaveMatrix A = wave_of(f, os);
  for (auto& [ij, e] : A.a) os << "  " << pair_label("A", ij) << " = " << to_string(canonicalize(e)) << "\n";
  auto s = summarize(nwave_residuals(A));
  os << "  " << s.describe() << "\n";
  return verdict(os, s.ok);
}

int cmd_m3wave(const SystemFile& f, std::ostream& os) {
  os << "m3wave " << f.origin() << "\n";
  bool ok = true;
  WaveMatrix G;
  if (f.kind() == "wave") {
    G = read_wave(f);
  } else {
    DmzSystem S = read_dmz(f);
    G = gamma_matrix(S);
    auto c = summarize(m3wri_constraint_residuals(S));
    os << "  constraint C_ij = Gamma_ij Gamma_ji: " << c.describe() << "\n";
    ok = c.ok;
  }
  auto s = summarize(m3wri_residuals(G));
  os << "  " << s.describe() << "\n";
  return verdict(os, ok && s.ok);
}

int cmd_construct(const SystemFile& f, std::ostream& os) {
  auto in = read_construct(f);
  os << "construct " << f.origin() << "\n";
  auto r = construct_gdmz(in.parts, in.xs, in.p, in.inverse, in.dep);
  os << "  derived type " << to_string(r.hyperbolic.type) << "\n";
  for (auto& w : r.hyperbolic.warnings) os << "  warning: " << w << "\n";
  for (auto& c : r.checks) os << "  [" << (c.ok ? "ok" : "FAIL") << "] " << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
  bool ok = r.ok;
  if (!in.invariants.empty()) {
    auto inv = verify_invariants_report(adapted_A(in.parts), in.invariants);
    for (auto& c : inv.checks) os << "  [" << (c.ok ? "ok" : "FAIL") << "] " << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    ok = ok && inv.ok;
  }
  for (auto& n : r.notes) os << "  note: " << n << "\n";
  if (r.ok) {
    os << write_gdmz(r.system);
    try {
      DmzSystem D = gdmz_to_dmz(r.system);
      os << "\n# linear form\n" << write_dmz(D);
    } catch (const NonlinearError&) {
    }
  }
  return verdict(os, ok);
}

int cmd_semiham(const SystemFile& f, std::ostream& os) {
  HydroSystem V = read_hydro(f);
  os << "semiham " << f.origin() << "\n";
  Connection G = diagonal_connection(V);
  for (auto& w : G.warnings) os << "  warning: " << w << "\n";
  auto s = summarize(semihamiltonian_residuals(V));
  os << "  " << s.describe() << "\n";
  auto t = is_involutive(induced_dmz(V.vars, G));
  os << "  induced DMZ system: " << (t.ok ? "involutive" : "not involutive") << "\n";
  if (t.ok != s.ok) os << "  warning: the two criteria disagree\n";
  return verdict(os, s.ok);
}

int cmd_commute(const SystemFile& f, const SystemFile& g, std::ostream& os) {
  HydroSystem V = read_hydro(f), W = read_hydro(g);
  if (V.vars != W.vars) throw InputError("commute: both systems must use the same Riemann invariants");
  os << "commute " << f.origin() << " " << g.origin() << "\n";
  auto a = summarize(commuting_flow_residuals(V, W.v));
  auto b = summarize(commuting_flow_residuals(W, V.v));
  os << "  first by second: " << a.describe() << "\n  second by first: " << b.describe() << "\n";
  return verdict(os, a.ok && b.ok);
}

struct HodographArgs {
  std::string x, t, guess, flow;
  bool no_grid = false;
};

int cmd_hodograph(const SystemFile& f, const HodographArgs& a, std::ostream& os, std::ostream& log) {
  std::vector<Expr> w;
  HydroSystem V = read_hydro(f, &w);
  if (!a.flow.empty()) w = read_hydro(SystemFile::load(a.flow)).v;
  if (w.empty()) throw InputError("hodograph: the file has no w[i] entries and no --flow was given");
  std::vector<mpq_class> guess;
  for (auto& s : split_top(a.guess)) guess.push_back(rational_arg(s, "--guess"));
  if (guess.size() != V.n()) throw InputError("--guess needs one value per Riemann invariant");
  HodographOptions opt;
  opt.precision = zero_test_defaults().precision;
  opt.grid = !a.no_grid;
  try {
    auto r = hodograph_solve(V, w, rational_arg(a.x, "--x"), rational_arg(a.t, "--t"), guess, opt);
    os << to_csv(V, r, opt.grid);
    for (auto& msg : r.warnings) log << "warning: " << msg << "\n";
    bool ok = r.residual < Real(opt.tolerance) && (!opt.grid || r.max_pde_residual < Real(opt.fd_tolerance));
    return ok ? kPass : kFail;
  } catch (const HodographError& e) {
    log << "hodograph: " << e.what() << "\n";
    return kFail;
  }
}

// ---------------------------------------------------------------------------
// Golden corpus

std::string check_of(const SystemFile& f) {
  if (auto c = f.get("check")) return *c;
  std::string kind = f.kind();
  if (kind == "dmz") return "check-involutive";
  if (kind == "gdmz") return "compat";
  if (kind == "wave") return "threewave";
  if (kind == "hydro") return "semiham";
  if (kind == "distribution") return "construct";
  throw InputError(f.origin() + ": no default check for kind " + kind);
}

int run_by_check(const SystemFile& f, const fs::path& dir, std::ostream& os) {
  std::string check = check_of(f);
  if (check == "check-involutive") return cmd_check_involutive(f, os);
  if (check == "compat") return cmd_compat(f, os);
  if (check == "threewave") return cmd_threewave(f, os);
  if (check == "m3wave") return cmd_m3wave(f, os);
  if (check == "lame") return cmd_lame(f, "", f.get("variant").value_or("classical"), os);
  if (check == "construct") return cmd_construct(f, os);
  if (check == "semiham") return cmd_semiham(f, os);
  if (check == "commute") return cmd_commute(f, SystemFile::load((dir / f.require("partner")).string()), os);
  if (check == "hodograph") {
    HodographArgs a{f.require("x"), f.require("t"), f.require("guess"), "", false};
    if (auto p = f.get("partner")) a.flow = (dir / *p).string();
    return cmd_hodograph(f, a, os, os);
  }
  throw InputError(f.origin() + ": unknown check '" + check + "'");
}

int cmd_corpus(const std::string& dir, bool verbose, std::ostream& os) {
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) throw InputError("corpus: no directory " + dir);
  for (auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() != ".md") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  int bad = 0;
  os << std::left << std::setw(28) << "file" << std::setw(18) << "check" << std::setw(10) << "expect" << std::setw(10)
     << "got" << "\n";
  for (auto& p : files) {
    std::string expect = "?", got = "error", check = "?";
    std::ostringstream detail;
    try {
      SystemFile f = SystemFile::load(p.string());
      expect = f.require("expect");
      check = check_of(f);
      int rc = run_by_check(f, p.parent_path(), detail);
      got = rc == kPass ? "pass" : rc == kFail ? "fail" : "error";
    } catch (const std::exception& e) {
      detail << e.what() << "\n";
    }
    bool match = got == expect;
    bad += !match;
    os << std::setw(28) << p.filename().string() << std::setw(18) << check << std::setw(10) << expect << std::setw(10) << got
       << (match ? "ok" : "MISMATCH") << "\n";
    if (verbose || !match) {
      std::istringstream in(detail.str());
      for (std::string line; std::getline(in, line);) os << "    " << line << "\n";
    }
  }
  os << files.size() - bad << "/" << files.size() << " golden files match\n";
  return bad == 0 ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dmzkit: verification of DMZ systems, gauge orbits, wave systems and hydrodynamic flows"};
  app.require_subcommand(1);
  auto& cfg = zero_test_defaults();
  app.add_option("--seed", cfg.seed, "random seed for sampling")->capture_default_str();
  app.add_option("--samples", cfg.samples, "sample points per zero test")->capture_default_str();
  app.add_option("--precision", cfg.precision, "working precision in bits")->capture_default_str();

  std::string file, file2, dir, verify, variant = "classical", out;
  GaugeArgs ga;
  HodographArgs ha;
  bool verbose = false;
  std::function<int(std::ostream&)> run;

  auto one_file = [&](const char* name, const char* help, auto fn) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("FILE", file, "system file")->required();
    sc->callback([&, fn] { run = [&, fn](std::ostream& os) { return fn(SystemFile::load(file), os); }; });
    return sc;
  };
  one_file("check-involutive", "integrability conditions of a DMZ system", cmd_check_involutive);
  one_file("compat", "cross-derivative compatibility of a GDMZ system", cmd_compat);
  one_file("invariants", "gauge invariants h_ij", cmd_invariants);
  one_file("threewave", "n-wave residuals of a wave matrix or of a DMZ system's potentials", cmd_threewave);
  one_file("m3wave", "modified wave residuals and the C_ij = Gamma_ij Gamma_ji constraint", cmd_m3wave);
  one_file("construct", "GDMZ system from an n-hyperbolic description", cmd_construct);
  one_file("semiham", "semi-Hamiltonian test of a diagonal hydrodynamic system", cmd_semiham);

  auto* g = app.add_subcommand("gauge", "gauge transformation; writes the transformed system");
  g->add_option("FILE", file)->required();
  g->add_option("--lambda", ga.lambda, "T_lambda (multiplier exp(-lambda))");
  g->add_option("--to-3wri", ga.to3, "multiply by a solution u of the system");
  g->add_option("--to-m3wri", ga.tom3, "lambda with lambda_ij = Gamma_ij Gamma_ji");
  g->callback([&] { run = [&](std::ostream& os) { return cmd_gauge(SystemFile::load(file), ga, os); }; });

  auto* l = app.add_subcommand("lame", "Lame potentials, or verification of given ones");
  l->add_option("FILE", file)->required();
  l->add_option("--verify", verify, "H1,H2,...");
  l->add_option("--variant", variant, "half-Lame variant: classical or literal")->capture_default_str();
  l->callback([&] { run = [&](std::ostream& os) { return cmd_lame(SystemFile::load(file), verify, variant, os); }; });

  auto* c = app.add_subcommand("commute", "commutativity of two hydrodynamic flows");
  c->add_option("FILE", file)->required();
  c->add_option("FILE2", file2)->required();
  c->callback([&] {
    run = [&](std::ostream& os) { return cmd_commute(SystemFile::load(file), SystemFile::load(file2), os); };
  });

  auto* h = app.add_subcommand("hodograph", "solve w(u) = v(u) t + x; CSV on stdout");
  h->add_option("FILE", file)->required();
  h->add_option("--x", ha.x)->required();
  h->add_option("--t", ha.t)->required();
  h->add_option("--guess", ha.guess, "comma-separated rationals")->required();
  h->add_option("--flow", ha.flow, "hydro file whose velocities are the flow w");
  h->add_flag("--no-grid", ha.no_grid, "skip the 5x5 finite-difference sweep");
  h->callback([&] { run = [&](std::ostream& os) { return cmd_hodograph(SystemFile::load(file), ha, os, std::cerr); }; });

  auto* k = app.add_subcommand("corpus", "run the golden files and print a pass matrix");
  k->add_option("--dir", dir, "corpus directory")->default_val(DMZKIT_CORPUS_DIR);
  k->add_flag("-v,--verbose", verbose, "print every report");
  k->callback([&] { run = [&](std::ostream& os) { return cmd_corpus(dir, verbose, os); }; });

  for (auto* sc : app.get_subcommands([](CLI::App*) { return true; }))
    sc->add_option("-o,--output", out, "write the report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInput;
  }
  try {
    if (out.empty()) return run(std::cout);
    std::ofstream os(out);
    if (!os) throw InputError("cannot write " + out);
    return run(os);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kInput;
}
