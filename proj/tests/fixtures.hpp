#pragma once

// Reference data of the worked examples, shared by the unit and acceptance tests.

#include "dmzkit/dmz.hpp"
#include "dmzkit/jets.hpp"
#include "dmzkit/waves.hpp"

#include <random>

namespace fx {

using namespace dmzkit;

inline Expr P(const std::string& s) { return parse(s); }

VectorField field(const ChartPtr& c, const std::map<std::string, std::string>& m);

struct Adapted {
  std::vector<Distribution> parts;
  std::vector<std::string> xs;
  Expr p;
  std::map<std::string, Expr> inverse;
  std::string dep;
  std::vector<std::string> verticals;
};

// Example on J^2 x J^2 x J^2 modulo a diagonal action, already in the
// quotient chart (x, y, z, p1, p2, u1, u2, v1, w1, w2); p1, p2 stand for the
// two varpi coordinates.
Adapted affine_quotient();
// The flat-hodograph example in chart (x, y, z, p1, p2, w1, w2, u1, u2, v1).
Adapted hodograph_example();
// The R^4 example in chart (x, y, z, v1, v2, u, w1, w2, w3, w4).
Adapted r4_example();

// Reference second-order system of the affine quotient example.
std::map<std::pair<int, int>, Expr> affine_reference_system();

// Systems in the stored convention (reference "+" coefficients negated).
DmzSystem m3wri_sol();
DmzSystem kt_abv2();
DmzSystem oblate();
// Arbitrary functions g(z), h(x), k(y); `fns` instantiates them when given.
DmzSystem action_general(const std::map<std::string, Expr>& fns = {});

// Operator coefficients Gamma_ij (ordered) of the gauged operators.
DmzSystem new_dmz();
DmzSystem hat_dmz();
Expr gauge_lambda0();      // -ln(z(x - z))
Expr particular_lambda();  // the A = B = C = 1 solution
// The general solution with A(x), B(y), C(z) opaque.
Expr general_solution();

LamePotentials new_dmz_potentials();
LamePotentials hat_potentials();
WaveMatrix wave_sol0();
WaveMatrix wave_sol1();
// Reference nonzero gauge invariants h_32 and h_23 of the m3WRI operator.
Expr reference_h32();
Expr reference_h23();

// Random expressions over `vars`: sums and products of small powers,
// optionally divided by a second such polynomial.
Expr random_rational(std::mt19937_64& gen, const std::vector<std::string>& vars, bool allow_division = true);
// As random_rational with sin/cos/exp/tanh applied to some factors.
Expr random_transcendental(std::mt19937_64& gen, const std::vector<std::string>& vars);

}  // namespace fx
