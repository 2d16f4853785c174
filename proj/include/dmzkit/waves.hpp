#pragma once

#include "dmzkit/dmz.hpp"

namespace dmzkit {

// Off-diagonal matrix of functions of the coordinates.
struct WaveMatrix {
  std::vector<std::string> coords;
  std::map<std::pair<int, int>, Expr> a;

  std::size_t n() const { return coords.size(); }
  Expr at(int i, int j) const;
  void set(int i, int j, const Expr& e);
};

// d_i A_jk - A_ji A_ik over distinct (i, j, k).
std::vector<Residual> nwave_residuals(const WaveMatrix& A);
// d_i G_jk - (G_ij - G_ik)(G_jk - G_ji) over distinct (i, j, k).
std::vector<Residual> m3wri_residuals(const WaveMatrix& G);
// Ordered Gamma_ij = Gamma^j_ij of a system.
WaveMatrix gamma_matrix(const DmzSystem& S);

// A_ij = (1/h_i) d_i h_j.
WaveMatrix wave_from_lame(const std::vector<std::string>& coords, const LamePotentials& h);
// d_i psi_j - A_ji psi_i for i != j.
std::vector<Residual> linear_problem_residuals(const WaveMatrix& A, const std::vector<Expr>& psi);

// The literal first-family term uses d_m h_m where the classical Lame
// system has d_l h_m; both are available.
enum class LameVariant { Literal, Classical };

// d_j d_k h_i - (d_k h_j / h_j) d_j h_i - (d_j h_k / h_k) d_k h_i over distinct
// (i, j, k); Literal reads the last term as (d_k h_k / h_k) d_j h_i.
std::vector<Residual> half_lame_residuals(const std::vector<std::string>& coords, const LamePotentials& h,
                                          LameVariant v = LameVariant::Classical);

// Both families of the Lame system on h.
std::vector<Residual> full_lame_residuals(const std::vector<std::string>& coords, const LamePotentials& h,
                                          LameVariant v = LameVariant::Classical);
// Both families rewritten for squared potentials g_i = h_i^2 (first family
// divided by h_i, second multiplied by h_l / h_i), so that metrics with
// non-square g stay in the rational/transcendental fragment.
std::vector<Residual> full_lame_residuals_squared(const std::vector<std::string>& coords, const std::vector<Expr>& g,
                                                  LameVariant v = LameVariant::Classical);

}  // namespace dmzkit
