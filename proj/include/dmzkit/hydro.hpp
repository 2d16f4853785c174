#pragma once

#include "dmzkit/dmz.hpp"

#include <optional>

namespace dmzkit {

// u^i_t = v^i(u) u^i_x in Riemann invariants `vars`.
struct HydroSystem {
  std::vector<std::string> vars;
  std::vector<Expr> v;

  std::size_t n() const { return vars.size(); }
};

class HyperbolicityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Gamma^i_ij for i != j, keyed (i, j).
struct Connection {
  std::map<std::pair<int, int>, Expr> gamma;
  std::vector<std::string> warnings;  // loci where two velocities meet

  Expr at(int i, int j) const;
};

// Gamma^i_ij = d_j v^i / (v^j - v^i). Throws when two velocities coincide
// identically; non-constant differences are reported as degeneracy loci.
Connection diagonal_connection(const HydroSystem& V);
// The same connection read off a system of the form
// P_ij - Gamma^i_ij P_i - Gamma^j_ij P_j = 0.
Connection connection_of(const DmzSystem& S);
// The C = 0 system P_ij - Gamma^i_ij P_i - Gamma^j_ji P_j = 0 on the u-chart.
DmzSystem induced_dmz(const std::vector<std::string>& vars, const Connection& G);

// d_k Gamma^i_ij - d_j Gamma^i_ik over distinct (i, j, k).
std::vector<Residual> semihamiltonian_residuals(const HydroSystem& V);
// d_j w^i - Gamma^i_ij (w^j - w^i) for i != j.
std::vector<Residual> commuting_flow_residuals(const std::vector<std::string>& vars, const Connection& G,
                                               const std::vector<Expr>& w);
std::vector<Residual> commuting_flow_residuals(const HydroSystem& V, const std::vector<Expr>& w);
// P_ij - Gamma^i_ij P_i - Gamma^j_ji P_j for i < j.
std::vector<Residual> conserved_density_residuals(const HydroSystem& V, const Expr& P);

// Three-component commuting flows of the flat-hodograph family for
// univariate f_1, f_2, f_3 given as expressions in `s`. `coords` are the
// three coordinates and `ts` their images u^i = t_i(x_i).
std::vector<Expr> three_component_flow(const std::vector<std::string>& coords, const std::vector<Expr>& ts,
                                       const std::vector<Expr>& f, const std::string& s = "s");

class UnsupportedFamily : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Velocities of a semi-Hamiltonian system whose connection is that of S.
// Supported: the three-dimensional flat-hodograph family and its
// reparametrizations x_i -> t_i(x_i) (pass ts; identity if empty). The
// candidate is verified with commuting_flow_residuals before returning.
HydroSystem hydro_from_dmz(const DmzSystem& S, const std::vector<Expr>& f, const std::vector<Expr>& ts = {},
                           const std::string& s = "s");

// ---------------------------------------------------------------------------
// Generalized hodograph method

struct HodographOptions {
  unsigned precision = 256;
  int max_iterations = 100;
  double tolerance = 1e-12;
  bool grid = true;          // finite-difference PDE check on a 5x5 stencil
  double grid_step = 0.01;
  double fd_step = 1e-6;
  double fd_tolerance = 1e-6;
};

struct HodographPoint {
  Real x, t;
  std::vector<Real> u;
  Real residual;     // max |w^i - v^i t - x|
  Real pde_residual; // max |u^i_t - v^i u^i_x| by central differences
};

struct HodographResult {
  Real x, t;
  std::vector<Real> u;
  std::optional<std::vector<mpq_class>> exact;  // when a rational root checks exactly
  Real residual;
  int iterations = 0;
  std::vector<HodographPoint> grid;
  Real max_pde_residual;
  bool strongly_hyperbolic = true;  // velocities pairwise distinct at u
  std::vector<std::string> warnings;
};

class HodographError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solves w^i(u) = v^i(u) t + x by damped Newton with the exact Jacobian.
HodographResult hodograph_solve(const HydroSystem& V, const std::vector<Expr>& w, const mpq_class& x,
                                const mpq_class& t, const std::vector<mpq_class>& guess,
                                const HodographOptions& opt = {});

// Header x,t,u1,...,un,residual. Grid rows carry the finite-difference PDE
// residual; the single-point row carries the algebraic residual.
std::string to_csv(const HydroSystem& V, const HodographResult& r, bool with_grid);

}  // namespace dmzkit
