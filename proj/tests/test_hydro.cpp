#include <doctest.h>

#include "fixtures.hpp"

#include "dmzkit/hydro.hpp"

#include <sstream>

using namespace dmzkit;
using fx::P;

namespace {

const std::vector<std::string> kU{"u1", "u2", "u3"};

// u^i_t = u^i u^1 u^2 u^3 u^i_x
HydroSystem chromatography() { return {kU, {P("u1^2*u2*u3"), P("u1*u2^2*u3"), P("u1*u2*u3^2")}}; }

bool semiham(const HydroSystem& V) { return summarize(semihamiltonian_residuals(V)).ok; }
bool tsarev(const HydroSystem& V) { return is_involutive(induced_dmz(V.vars, diagonal_connection(V))).ok; }

std::vector<Expr> to_u(const std::vector<Expr>& w) {
  std::vector<Expr> out;
  for (auto& e : w) out.push_back(substitute(e, {{"x", P("u1")}, {"y", P("u2")}, {"z", P("u3")}}));
  return out;
}

}  // namespace

TEST_CASE("diagonal connection") {
  HydroSystem V{{"a", "b"}, {P("a"), P("b")}};
  auto G = diagonal_connection(V);
  CHECK(G.at(0, 1).is_zero());
  HydroSystem W{{"a", "b"}, {P("a*b"), P("b")}};
  auto H = diagonal_connection(W);
  CHECK(vanishes(H.at(0, 1) - P("a/(b-a*b)")));
  CHECK(!H.warnings.empty());
  CHECK_THROWS_AS(diagonal_connection(HydroSystem{{"a", "b"}, {P("a+b"), P("a+b")}}), HyperbolicityError);
}

TEST_CASE("semi-Hamiltonian property and the Tsarev equivalence") {
  std::vector<HydroSystem> cases{
      chromatography(),
      {kU, {P("u1^2+u2*u3"), P("u2+u1*u3^2"), P("u3*u1+u2")}},
      {kU, {P("u1+u2+u3") - P("u1"), P("u1+u2+u3") - P("u2"), P("u1+u2+u3") - P("u3")}},
      {kU, {P("u1"), P("u2"), P("u3")}},
      {kU, {P("u2*u3"), P("u1*u3+u2"), P("u1^2")}},
  };
  std::vector<int> want{1, 0, 1, 1, -1};
  for (std::size_t i = 0; i < cases.size(); ++i) {
    CAPTURE(i);
    if (want[i] >= 0) CHECK(semiham(cases[i]) == (want[i] == 1));
    CHECK(tsarev(cases[i]) == semiham(cases[i]));
  }
}

TEST_CASE("three-component flows commute with the flat-hodograph connection") {
  DmzSystem K = fx::kt_abv2();
  ParseOptions o{{"f1", "f2", "f3"}};
  std::vector<Expr> f{parse("f1(s)", o), parse("f2(s)", o), parse("f3(s)", o)};
  auto formal = three_component_flow(K.coords(), {}, f);
  auto G = connection_of(K);
  CHECK(summarize(commuting_flow_residuals(K.coords(), G, formal)).ok);
  std::mt19937_64 gen(17);
  for (int i = 0; i < 10; ++i) {
    std::map<std::string, Expr> fns;
    for (auto& n : {"f1", "f2", "f3"}) fns[n] = random_polynomial(gen, "s");
    std::vector<Expr> w;
    for (auto& e : formal) w.push_back(instantiate_functions(e, fns));
    auto r = summarize(commuting_flow_residuals(K.coords(), G, w));
    CHECK_MESSAGE(r.ok, r.describe());
    CHECK(r.provably == r.distinct);
  }
  // A flow from outside the family.
  CHECK(!summarize(commuting_flow_residuals(K.coords(), G, {P("x"), P("y^2"), P("z")})).ok);
}

TEST_CASE("commutativity is symmetric") {
  DmzSystem K = fx::kt_abv2();
  auto V1 = hydro_from_dmz(K, {P("s"), P("s"), P("s")});
  auto V2 = hydro_from_dmz(K, {P("s^2/2"), P("s^2/2"), P("s^2/2")});
  CHECK(semiham(V1));
  CHECK(semiham(V2));
  CHECK(summarize(commuting_flow_residuals(V1, V2.v)).ok);
  CHECK(summarize(commuting_flow_residuals(V2, V1.v)).ok);
  CHECK(tsarev(V1));
  // The connection of V1 is that of the system.
  auto G = diagonal_connection(V1), H = connection_of(K);
  for (auto& [ij, e] : H.gamma) CHECK(vanishes(G.at(ij.first, ij.second) - e));
}

TEST_CASE("reparametrized family") {
  ParseOptions og{{"g", "h", "k"}};
  ParseOptions of{{"f1", "f2", "f3"}};
  std::vector<Expr> f{parse("f1(s)", of), parse("f2(s)", of), parse("f3(s)", of)};
  std::vector<Expr> ts{parse("h(x)", og), parse("k(y)", og), parse("g(z)", og)};
  auto V = hydro_from_dmz(fx::action_general(), f, ts);
  CHECK(V.v.size() == 3);
  CHECK_THROWS_AS(hydro_from_dmz(fx::action_general(), f), UnsupportedFamily);
  CHECK_THROWS_AS(hydro_from_dmz(fx::m3wri_sol(), f), UnsupportedFamily);
}

TEST_CASE("conserved densities") {
  HydroSystem V{kU, to_u(hydro_from_dmz(fx::kt_abv2(), {P("s"), P("s"), P("s")}).v)};
  // Constants are always densities; u1 u2 u3 is not one here.
  CHECK(summarize(conserved_density_residuals(V, P("7"))).ok);
  CHECK(!summarize(conserved_density_residuals(V, P("u1*u2*u3"))).ok);
}

TEST_CASE("hodograph: constant velocities") {
  HydroSystem C{kU, {P("1/2"), P("3"), P("-2")}};
  auto r = hodograph_solve(C, {P("u1"), P("u2"), P("u3")}, mpq_class(1, 3), mpq_class(2, 7), {0, 0, 0});
  REQUIRE(r.exact.has_value());
  CHECK((*r.exact)[0] == mpq_class(10, 21));
  CHECK((*r.exact)[1] == mpq_class(25, 21));
  CHECK((*r.exact)[2] == mpq_class(-5, 21));
  CHECK(r.max_pde_residual < Real(1e-6));
}

TEST_CASE("hodograph: commuting flows of the flat-hodograph system") {
  DmzSystem K = fx::kt_abv2();
  HydroSystem Hs{kU, to_u(hydro_from_dmz(K, {P("s"), P("s"), P("s")}).v)};
  auto W = to_u(hydro_from_dmz(K, {P("s^2/2"), P("s^2/2"), P("s^2/2")}).v);
  auto r = hodograph_solve(Hs, W, mpq_class(1), mpq_class(1, 10), {1, 2, 3});
  CHECK(r.residual < Real(1e-12));
  CHECK(r.grid.size() == 25);
  CHECK(r.max_pde_residual < Real(1e-6));
  CHECK(r.iterations <= 100);
  std::string csv = to_csv(Hs, r, true);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,t,u1,u2,u3,residual");
  int rows = 0;
  for (std::string line; std::getline(in, line);) rows += !line.empty();
  CHECK(rows == 25);
}

TEST_CASE("hodograph failures") {
  HydroSystem C{{"a"}, {P("a")}};
  // a - a t - x with t = 1 has no solution for x != 0.
  CHECK_THROWS_AS(hodograph_solve(C, {P("a")}, mpq_class(1), mpq_class(1), {mpq_class(0)}), HodographError);
}
