#pragma once

#include "dmzkit/dmz.hpp"

namespace dmzkit {

// Operator view of a DmzSystem: L_ij = d_i d_j - Gamma_ji d_i - Gamma_ij d_j + C_ij,
// so Gamma_ij (ordered, multiplying d_j) is the stored Gamma^j_ij.
Expr op_gamma(const DmzSystem& D, int i, int j);
void set_op_gamma(DmzSystem& D, int i, int j, const Expr& e);

class GaugeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Conjugation by a multiplier m: coefficients of m^{-1} L m.
//   Gamma_ij -> Gamma_ij - d_i m / m,  C_ij -> L_ij(m) / m.
DmzSystem gauge_by_multiplier(const DmzSystem& D, const Expr& m);

// T_lambda, multiplier exp(-lambda):
//   Gamma_ij -> Gamma_ij + d_i lambda,
//   C_ij -> C_ij + l_i l_j - l_ij + Gamma_ji l_i + Gamma_ij l_j.
// T_mu(T_lambda D) = T_{lambda+mu} D.
DmzSystem gauge_transform(const DmzSystem& D, const Expr& lambda);

// h_ij = d_j Gamma_ij - Gamma_ij Gamma_ji + C_ij for ordered i != j.
std::map<std::pair<int, int>, Expr> gauge_invariants(const DmzSystem& D);

// L_ij u for i < j.
std::vector<Residual> residual_operator_apply(const DmzSystem& D, const Expr& u);

// Multiplier u, a nonzero solution of D u = 0; the result has C = 0.
DmzSystem to_threewave_gauge(const DmzSystem& D, const Expr& u);

// D0 with C = 0 and lambda solving lambda_ij = Gamma_ij Gamma_ji; the
// result satisfies C_ij = Gamma_ij Gamma_ji. The solvability conditions
// d_k(Gamma_ij Gamma_ji) = d_j(Gamma_ik Gamma_ki) are checked first.
DmzSystem to_m3wri_gauge(const DmzSystem& D0, const Expr& lambda);

// C_ij - Gamma_ij Gamma_ji for i < j.
std::vector<Residual> m3wri_constraint_residuals(const DmzSystem& D);

}  // namespace dmzkit
