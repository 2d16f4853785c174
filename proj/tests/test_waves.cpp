#include <doctest.h>

#include "fixtures.hpp"

#include "dmzkit/gauge.hpp"

#include <algorithm>

using namespace dmzkit;
using fx::P;

namespace {

const std::vector<std::string> kXYZ{"x", "y", "z"};

bool all_zero(const std::vector<Residual>& r) { return summarize(r).ok; }

WaveMatrix permuted(const WaveMatrix& A, const std::vector<int>& p) {
  // New coordinate p[i] is old coordinate i.
  std::vector<std::string> names(3);
  for (int i = 0; i < 3; ++i) names[p[i]] = A.coords[i];
  WaveMatrix B{names, {}};
  for (auto& [ij, e] : A.a) B.set(p[ij.first], p[ij.second], e);
  return B;
}

}  // namespace

TEST_CASE("reference wave matrices") {
  CHECK(all_zero(nwave_residuals(fx::wave_sol0())));
  // The reference second matrix has sign errors on A13 and A32.
  CHECK(!all_zero(nwave_residuals(fx::wave_sol1())));
  WaveMatrix zero{kXYZ, {}};
  CHECK(all_zero(nwave_residuals(zero)));
  CHECK(all_zero(m3wri_residuals(zero)));
}

TEST_CASE("waves from Lame potentials") {
  auto A0 = wave_from_lame(kXYZ, fx::new_dmz_potentials());
  CHECK(all_zero(nwave_residuals(A0)));
  // Row 2 of the reference matrix carries an extra 1/y (it belongs to h2 = y).
  auto S0 = fx::wave_sol0();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      Expr want = i == 1 ? S0.at(i, j) * P("y") : S0.at(i, j);
      CHECK(vanishes(A0.at(i, j) - want));
    }
  auto y_pot = fx::new_dmz_potentials();
  y_pot.h[1] = P("y");
  auto Ay = wave_from_lame(kXYZ, y_pot);
  for (auto& [ij, e] : S0.a) CHECK(vanishes(Ay.at(ij.first, ij.second) - e));

  auto A1 = wave_from_lame(kXYZ, fx::hat_potentials());
  CHECK(all_zero(nwave_residuals(A1)));
  auto S1 = fx::wave_sol1();
  for (auto& [ij, e] : S1.a) {
    bool flipped = ij == std::pair{0, 2} || ij == std::pair{2, 1};
    CHECK(vanishes(A1.at(ij.first, ij.second) - (flipped ? -e : e)));
  }

  WaveMatrix one = wave_from_lame(kXYZ, {{P("1"), P("1"), P("1")}});
  for (auto& [ij, e] : one.a) CHECK(e.is_zero());
}

TEST_CASE("m3WRI residuals") {
  CHECK(all_zero(m3wri_residuals(gamma_matrix(fx::m3wri_sol()))));
  WaveMatrix G{kXYZ, {}};
  int k = 1;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) G.set(i, j, Expr(k++));
  auto s = summarize(m3wri_residuals(G));
  CHECK(!s.ok);
  CHECK(s.failure.has_value());
}

TEST_CASE("linear problem") {
  auto h = fx::new_dmz_potentials();
  auto A = wave_from_lame(kXYZ, h);
  Expr u = fx::particular_lambda();
  std::vector<Expr> psi;
  for (int i = 0; i < 3; ++i) psi.push_back(diff(u, kXYZ[i]) / h.h[i]);
  CHECK(all_zero(linear_problem_residuals(A, psi)));
  CHECK(all_zero(linear_problem_residuals(A, {Expr(0), Expr(0), Expr(0)})));
  CHECK(!all_zero(linear_problem_residuals(A, {P("x"), P("y*z"), P("1")})));
}

TEST_CASE("potentials and waves of involutive systems") {
  for (auto S : {fx::kt_abv2(), fx::new_dmz(), fx::hat_dmz()}) {
    REQUIRE(is_involutive(S).ok);
    auto h = lame_potentials(S);
    REQUIRE(verify_lame(S, h));
    CHECK(all_zero(half_lame_residuals(kXYZ, h)));
    CHECK(all_zero(nwave_residuals(wave_from_lame(kXYZ, h))));
  }
}

TEST_CASE("Lame variants") {
  auto h = fx::new_dmz_potentials();
  CHECK(all_zero(half_lame_residuals(kXYZ, h, LameVariant::Classical)));
  CHECK(!all_zero(half_lame_residuals(kXYZ, h, LameVariant::Literal)));
  CHECK(all_zero(half_lame_residuals(kXYZ, {{P("x"), P("1"), P("1")}})));
  // Diagonal curvature only: the second family fails.
  CHECK(!all_zero(full_lame_residuals(kXYZ, h)));

  std::vector<Expr> g{P("cosh(x)^2-cos(y)^2"), P("cosh(x)^2-cos(y)^2"), P("cosh(x)^2*cos(y)^2")};
  auto flat = summarize(full_lame_residuals_squared(kXYZ, g));
  CHECK_MESSAGE(flat.ok, flat.describe());
  CHECK(summarize(lame_residuals_squared(fx::oblate(), g)).ok);
  g[2] = P("cosh(x)^2");
  CHECK(!summarize(full_lame_residuals_squared(kXYZ, g)).ok);
  CHECK(all_zero(full_lame_residuals(kXYZ, {{P("2"), P("3"), P("5")}})));
}

TEST_CASE("n-wave residuals are permutation invariant") {
  std::vector<int> p{0, 1, 2};
  for (auto A : {fx::wave_sol0(), fx::wave_sol1()}) {
    bool base = all_zero(nwave_residuals(A));
    do {
      CHECK(all_zero(nwave_residuals(permuted(A, p))) == base);
    } while (std::next_permutation(p.begin(), p.end()));
  }
}
