#include "doctest.h"

#include "dmzkit/dmz.hpp"

using namespace dmzkit;

namespace {

Expr P(const char* s) { return parse(s); }

DmzSystem kt_system() {
  DmzSystem S({"x", "y", "z"});
  S.set_gamma(0, 0, 1, P("(x-z)/((x-y)*(y-z))"));
  S.set_gamma(1, 0, 1, P("-(y-z)/((x-y)*(x-z))"));
  S.set_gamma(0, 0, 2, P("-1/(y-z)"));
  S.set_gamma(1, 1, 2, P("-1/(x-z)"));
  return S;
}

DmzSystem oblate() {
  DmzSystem S({"x", "y", "z"});
  S.set_gamma(0, 0, 1, P("cos(y)*sin(y)/(cosh(x)^2-cos(y)^2)"));
  S.set_gamma(1, 0, 1, P("cosh(x)*sinh(x)/(cosh(x)^2-cos(y)^2)"));
  S.set_gamma(2, 0, 2, P("tanh(x)"));
  S.set_gamma(2, 1, 2, P("-tan(y)"));
  return S;
}

DmzSystem reparametrized() {
  ParseOptions o{{"g", "h", "k"}};
  DmzSystem S({"x", "y", "z"});
  S.set_gamma(0, 0, 1, parse("(g(z)-h(x))*k'(y)/((g(z)-k(y))*(h(x)-k(y)))", o));
  S.set_gamma(1, 0, 1, parse("-(g(z)-k(y))*h'(x)/((g(z)-h(x))*(h(x)-k(y)))", o));
  S.set_gamma(0, 0, 2, parse("g'(z)/(g(z)-k(y))", o));
  S.set_gamma(1, 1, 2, parse("g'(z)/(g(z)-h(x))", o));
  return S;
}

}  // namespace

TEST_CASE("DmzSystem stores symmetric coefficients") {
  DmzSystem S({"x", "y"});
  S.set_gamma(0, 1, 0, P("x"));
  CHECK(S.gamma(0, 0, 1) == P("x"));
  S.set_c(1, 0, P("y"));
  CHECK(S.c(0, 1) == P("y"));
  CHECK(S.has_c());
  CHECK_THROWS_AS(S.set_gamma(0, 1, 1, P("1")), std::invalid_argument);
  CHECK_THROWS_AS(S.gamma(3, 0, 1), std::out_of_range);
}

TEST_CASE("two-dimensional systems are trivially involutive") {
  DmzSystem S({"x", "y"});
  S.set_gamma(0, 0, 1, P("x*y"));
  S.set_c(0, 1, P("1/(x+y)"));
  CHECK(integrability_residuals(S).empty());
  CHECK(is_involutive(S).ok);
}

TEST_CASE("rational, transcendental and opaque examples are involutive") {
  auto kt = is_involutive(kt_system());
  CHECK(kt.ok);
  CHECK(kt.residuals.provably == kt.residuals.distinct);
  CHECK(kt.functions == 3);
  CHECK(is_involutive(oblate()).ok);
  CHECK(is_involutive(reparametrized()).ok);
}

TEST_CASE("perturbed Gamma breaks involutivity") {
  auto S = kt_system();
  S.set_gamma(0, 0, 2, P("-1/(y-z) + x"));
  auto r = is_involutive(S);
  CHECK_FALSE(r.ok);
  REQUIRE(r.residuals.failure);
  CHECK(r.residuals.failure_verdict.kind == ZeroKind::ProvablyNonzero);
}

TEST_CASE("off-index Gamma is reported") {
  auto S = kt_system();
  S.set_gamma(2, 0, 1, P("x"));
  auto r = is_involutive(S);
  CHECK_FALSE(r.ok);
  REQUIRE(r.off_index.size() == 1);
  CHECK(r.off_index[0] == "Gamma^3_12");
}

TEST_CASE("gdmz round trip and compatibility") {
  auto S = kt_system();
  S.set_c(0, 1, P("0"));
  auto G = dmz_to_gdmz(S, "u");
  CHECK(G.rhs(0, 1) == normal_form(P("(x-z)/((x-y)*(y-z))*u_x - (y-z)/((x-y)*(x-z))*u_y")));
  CHECK(summarize(gdmz_compatibility_residuals(G)).ok);
  auto back = gdmz_to_dmz(G);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) CHECK(vanishes(back.gamma(k, i, j) - S.gamma(k, i, j)));
}

TEST_CASE("nonlinear gdmz is rejected") {
  GdmzSystem G;
  G.coords = {"x", "y"};
  G.f[{0, 1}] = P("u_x*u_y/(u+1)");
  CHECK_THROWS_AS(gdmz_to_dmz(G), NonlinearError);
  G.f[{0, 1}] = P("u_x + 1");
  CHECK_THROWS_AS(gdmz_to_dmz(G), NonlinearError);
}

TEST_CASE("integrate_log") {
  CHECK(vanishes(integrate_log(P("1/x"), "x") - P("x")));
  CHECK(vanishes(integrate_log(P("-2/(x-y)"), "x") - P("1/(x-y)^2")));
  Expr H = integrate_log(P("1/(x-z) - 1/(x-y)"), "x");
  CHECK(vanishes(diff(H, "x") / H - P("1/(x-z) - 1/(x-y)")));
  CHECK_THROWS_AS(integrate_log(P("1"), "x"), IntegrationError);
  CHECK_THROWS_AS(integrate_log(P("1/x^2"), "x"), IntegrationError);
  CHECK_THROWS_AS(integrate_log(P("1/(2*x)"), "x"), IntegrationError);
  try {
    integrate_log(P("tan(x)"), "x");
    FAIL("expected an error");
  } catch (const IntegrationError& e) {
    CHECK(e.reason == IntegrationError::Reason::NonRationalIntegrand);
  }
}

TEST_CASE("Lame potentials of the rational example") {
  auto S = kt_system();
  auto h = lame_potentials(S);
  REQUIRE(h.h.size() == 3);
  CHECK(verify_lame(S, h));
  LamePotentials scaled = h;
  scaled.h[0] = scaled.h[0] * P("x^2+1");
  CHECK(potentials_equivalent(S.coords(), h, scaled));
  scaled.h[0] = scaled.h[0] * P("y");
  CHECK_FALSE(potentials_equivalent(S.coords(), h, scaled));
  CHECK_FALSE(verify_lame(S, scaled));
}
