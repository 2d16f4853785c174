#pragma once

#include "dmzkit/geometry.hpp"
#include "dmzkit/residual.hpp"

#include <array>
#include <stdexcept>

namespace dmzkit {

// u_{x_i x_j} - sum_k Gamma^k_ij u_{x_k} + C_ij u = 0 for i < j.
// Indices are 0-based; Gamma^k_ij and C_ij are symmetric in i, j.
class DmzSystem {
 public:
  DmzSystem() = default;
  explicit DmzSystem(std::vector<std::string> coords) : coords_(std::move(coords)) {}

  const std::vector<std::string>& coords() const { return coords_; }
  std::size_t n() const { return coords_.size(); }

  // Gamma^k_ij
  Expr gamma(int k, int i, int j) const;
  void set_gamma(int k, int i, int j, const Expr& e);
  Expr c(int i, int j) const;
  void set_c(int i, int j, const Expr& e);

  const std::map<std::array<int, 3>, Expr>& gammas() const { return g_; }
  const std::map<std::pair<int, int>, Expr>& cs() const { return c_; }
  bool has_c() const;
  // Gamma^k_ij with k outside {i, j} that are not identically zero.
  std::vector<std::array<int, 3>> off_index() const;

 private:
  std::vector<std::string> coords_;
  std::map<std::array<int, 3>, Expr> g_;  // key (k, min(i,j), max(i,j))
  std::map<std::pair<int, int>, Expr> c_;
  void check(int i) const;
};

std::vector<Residual> integrability_residuals(const DmzSystem& S);

struct InvolutivityReport {
  bool ok = false;
  ResidualSummary residuals;
  std::vector<std::string> off_index;  // offending Gamma^k_ij labels
  std::size_t functions = 0;           // general solution: n functions of one variable

  std::string describe() const;
};
InvolutivityReport is_involutive(const DmzSystem& S);

// u_{x_i x_j} = f_ij(x, u, u_{x_l}). The jet symbols are dep, dep_<x> and,
// formally, dep_<x><x>.
struct GdmzSystem {
  std::vector<std::string> coords;
  std::string dep = "u";
  std::map<std::pair<int, int>, Expr> f;  // i < j

  std::string d1(int i) const { return dep + "_" + coords[i]; }
  std::string d2(int i, int j) const { return dep + "_" + coords[i] + coords[j]; }
  Expr rhs(int i, int j) const;
};

std::vector<Residual> gdmz_compatibility_residuals(const GdmzSystem& S);

class NonlinearError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Extracts Gamma^k_ij = df_ij/du_k and C_ij = -df_ij/du; requires f affine
// and homogeneous in (u, u_{x_l}).
DmzSystem gdmz_to_dmz(const GdmzSystem& S);
GdmzSystem dmz_to_gdmz(const DmzSystem& S, const std::string& dep = "u");

// ---------------------------------------------------------------------------
// Lame potentials

struct LamePotentials {
  std::vector<Expr> h;
};

class IntegrationError : public std::runtime_error {
 public:
  enum class Reason { NonRationalIntegrand, NonElementaryAntiderivative, NotClosed };
  IntegrationError(Reason r, const std::string& msg) : std::runtime_error(msg), reason(r) {}
  Reason reason;
};

// exp of an antiderivative in `var`: returns H with dH/dvar / H = r.
// Supports rational r whose logarithmic part has integer residues.
Expr integrate_log(const Expr& r, const std::string& var);

// h_j with Gamma^j_ij = d_i h_j / h_j for i != j, integrated one coordinate
// at a time; integer content is dropped from numerator and denominator.
LamePotentials lame_potentials(const DmzSystem& S);
std::vector<Residual> lame_residuals(const DmzSystem& S, const LamePotentials& h);
bool verify_lame(const DmzSystem& S, const LamePotentials& h);
// Same check for squared potentials g_j = h_j^2: 2 g_j Gamma^j_ij - d_i g_j.
std::vector<Residual> lame_residuals_squared(const DmzSystem& S, const std::vector<Expr>& g);

// True when a_j / b_j depends on x_j alone for every j.
bool potentials_equivalent(const std::vector<std::string>& coords, const LamePotentials& a, const LamePotentials& b);

// ---------------------------------------------------------------------------
// Construction of the semilinear system from adapted data

struct ConstructResult {
  bool ok = false;
  GdmzSystem system;
  std::vector<Check> checks;
  std::vector<Expr> p1;                        // p_i = X_i p
  std::map<std::pair<int, int>, Expr> p2;      // f_ij before substitution
  HyperbolicReport hyperbolic;
  std::vector<std::string> notes;
};

// parts: ordered pairs (X_i, V_i); xs: the independent coordinates x_i;
// inverse: chart coordinates expressed through dep and dep_<x_i>.
ConstructResult construct_gdmz(const std::vector<Distribution>& parts, const std::vector<std::string>& xs,
                               const Expr& p, const std::map<std::string, Expr>& inverse,
                               const std::string& dep = "u");

}  // namespace dmzkit
