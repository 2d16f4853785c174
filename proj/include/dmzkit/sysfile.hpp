#pragma once

// Text format shared by the command line and the golden corpus:
//
//   # comment
//   kind = dmz
//   coords = x, y, z
//   [gamma]
//   Gamma[1][2][2] = "z^3/(y*z^3-1)"
//
// Scalar keys take bare words or comma lists; indexed keys take quoted
// expressions. Sections only group lines. Indices are 1-based.

#include "dmzkit/dmz.hpp"
#include "dmzkit/hydro.hpp"
#include "dmzkit/waves.hpp"

#include <optional>

namespace dmzkit {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FileEntry {
  std::string name;                // Gamma, C, X, inverse, ...
  std::vector<std::string> index;  // raw bracket contents
  std::string value;
  bool quoted = false;
  int line = 0;
  std::string section;
};

class SystemFile {
 public:
  static SystemFile parse_text(const std::string& text, const std::string& origin = "<input>");
  static SystemFile load(const std::string& path);

  const std::string& origin() const { return origin_; }
  std::string kind() const;
  std::vector<std::string> coords() const;
  std::optional<std::string> get(const std::string& key) const;
  std::string require(const std::string& key) const;
  std::vector<std::string> list(const std::string& key) const;
  const std::vector<FileEntry>& entries() const { return entries_; }
  std::vector<const FileEntry*> indexed(const std::string& name) const;

  ParseOptions parse_options() const;
  // Parses an entry value and checks that every symbol is declared.
  Expr expr(const FileEntry& e, const std::set<std::string>& allowed) const;
  Expr expr(const std::string& text, const std::set<std::string>& allowed, int line = 0) const;
  [[noreturn]] void fail(int line, const std::string& msg) const;

 private:
  std::string origin_;
  std::map<std::string, std::pair<std::string, int>> scalars_;
  std::vector<FileEntry> entries_;
};

DmzSystem read_dmz(const SystemFile& f);
GdmzSystem read_gdmz(const SystemFile& f);
WaveMatrix read_wave(const SystemFile& f);
// v[i] and, when present, the flow w[i].
HydroSystem read_hydro(const SystemFile& f, std::vector<Expr>* flow = nullptr);
// h[i] entries of a dmz file, if any.
std::optional<LamePotentials> read_potentials(const SystemFile& f);

struct ConstructInput {
  std::vector<Distribution> parts;
  std::vector<std::string> xs;
  Expr p;
  std::map<std::string, Expr> inverse;
  std::string dep = "u";
  std::vector<Expr> invariants;
};
// kind = distribution: X[i][coord] transversal fields, V[i] vertical
// coordinates, independents, p, inverse[coord], optional invariant[k].
ConstructInput read_construct(const SystemFile& f);

std::string write_dmz(const DmzSystem& S, const std::vector<std::pair<std::string, std::string>>& meta = {});
std::string write_gdmz(const GdmzSystem& S, const std::vector<std::pair<std::string, std::string>>& meta = {});

}  // namespace dmzkit
