#include "fixtures.hpp"

namespace fx {

VectorField field(const ChartPtr& c, const std::map<std::string, std::string>& m) {
  std::map<std::string, Expr> e;
  for (auto& [k, v] : m) e[k] = parse(v);
  return VectorField::from_map(c, e);
}

namespace {

std::vector<Distribution> pairs(const ChartPtr& c, const std::vector<VectorField>& X,
                                const std::vector<std::string>& V) {
  std::vector<Distribution> out;
  for (std::size_t i = 0; i < X.size(); ++i) out.emplace_back(c, std::vector<VectorField>{X[i], VectorField::basis(c, V[i])});
  return out;
}

}  // namespace

Adapted affine_quotient() {
  auto c = make_chart({"x", "y", "z", "p1", "p2", "u1", "u2", "v1", "w1", "w2"});
  auto X1 = field(c, {{"x", "1"}, {"p1", "1-p1*u1"}, {"p2", "-p2*u1"}, {"u1", "-u1^2"}, {"w1", "-u1*w1"}, {"w2", "-(1+u1*w2)"}});
  auto X2 = field(c, {{"y", "1"}, {"p1", "-p2"}, {"p2", "p2*u2"}});
  auto Y1 = field(c, {{"z", "1"}, {"v1", "-v1^2"}, {"w1", "v1*w1"}, {"w2", "-w1"}});
  Adapted a;
  a.verticals = {"u1", "u2", "v1"};
  a.parts = pairs(c, {X1, X2, Y1}, a.verticals);
  a.xs = {"x", "y", "z"};
  a.p = P("p1/w2");
  a.inverse = {{"w2", P("(u+1)/u_x")},
               {"p1", P("u*(u+1)/u_x")},
               {"p2", P("-u_y*(u+1)/u_x")},
               {"w1", P("u_z*(u+1)/(u*u_x)")}};
  a.dep = "u";
  return a;
}

std::map<std::pair<int, int>, Expr> affine_reference_system() {
  return {{{0, 1}, P("(2*u+1)/(u*(u+1))*u_x*u_z")}, {{0, 2}, P("u_x*u_y/(u+1)")}, {{1, 2}, P("u_y*u_z/u")}};
}

Adapted hodograph_example() {
  auto c = make_chart({"x", "y", "z", "p1", "p2", "w1", "w2", "u1", "u2", "v1"});
  auto X = field(c, {{"x", "1"}, {"p1", "u1-p1/(x-y)"}, {"p2", "-p1/(x-y)"}, {"w1", "p1/(x-y)"}, {"w2", "y*p1/(x-y)"}});
  auto Y = field(c, {{"y", "1"}, {"p2", "u2+p2/(x-y)"}, {"p1", "p2/(x-y)"}, {"w1", "-p2/(x-y)"}, {"w2", "-x*p2/(x-y)"}});
  auto Z = field(c, {{"z", "1"}, {"w1", "-v1"}, {"w2", "-z*v1"}});
  Adapted a;
  a.verticals = {"u1", "u2", "v1"};
  a.parts = pairs(c, {X, Y, Z}, a.verticals);
  a.xs = {"x", "y", "z"};
  a.p = P("w2-z*w1");
  a.inverse = {{"p1", P("u_x*(x-y)/(y-z)")}, {"p2", P("-u_y*(x-y)/(x-z)")}, {"w1", P("-u_z")}, {"w2", P("u-u_z*z")}};
  a.dep = "u";
  return a;
}

Adapted r4_example() {
  auto c = make_chart({"x", "y", "z", "v1", "v2", "u", "w1", "w2", "w3", "w4"});
  auto X = field(c, {{"x", "1"}, {"w1", "v1"}, {"w2", "x*v1"}});
  auto Y = field(c, {{"y", "1"}, {"w3", "v2"}, {"w4", "y*v2"}});
  auto Z = field(c, {{"z", "1"}, {"w1", "-u*z"}, {"w2", "-u*z^2"}, {"w3", "-u*z^3"}, {"w4", "-u"}});
  Adapted a;
  a.verticals = {"v1", "v2", "u"};
  a.parts = pairs(c, {X, Y, Z}, a.verticals);
  a.xs = {"x", "y", "z"};
  a.p = P("(y*z^3-1)*(w2-x*w1)+z*(z-x)*(w4-y*w3)");
  // Solution of p = U, X p = U_x, Y p = U_y, Z p = U_z for w1..w4.
  a.inverse = {
      {"w1", P("-(-3*U*y*z^3 + 2*U_x*x*y*z^3 + U_x*x - U_x*y*z^4 - 2*U_x*z + U_z*y*z^4 - U_z*z)/"
               "((y*z^3 - 1)*(2*x*y*z^3 + x - y*z^4 - 2*z))")},
      {"w2", P("-(-2*U*x*y*z^3 - U*x - 2*U*y*z^4 + 2*U*z + 2*U_x*x^2*y*z^3 + U_x*x^2 - U_x*x*y*z^4 - 2*U_x*x*z"
               " + U_z*y*z^5 - U_z*z^2)/((y*z^3 - 1)*(2*x*y*z^3 + x - y*z^4 - 2*z))")},
      {"w3", P("(U*x*z^3 - 2*U*z^4 + 2*U_y*x*y*z^3 + U_y*x - U_y*y*z^4 - 2*U_y*z - U_z*x*z^4 + U_z*z^5)/"
               "(z*(x - z)*(2*x*y*z^3 + x - y*z^4 - 2*z))")},
      {"w4", P("(-2*U*x*y*z^3 + U*y*z^4 + 2*U_y*x*y^2*z^3 + U_y*x*y - U_y*y^2*z^4 - 2*U_y*y*z - U_z*x*z + U_z*z^2)/"
               "(z*(x - z)*(2*x*y*z^3 + x - y*z^4 - 2*z))")}};
  a.dep = "U";
  return a;
}

DmzSystem m3wri_sol() {
  DmzSystem S({"x", "y", "z"});
  std::string Q = "(2*x*y*z^3+x-2*z-y*z^4)";
  S.set_gamma(0, 0, 1, P("-z^3/(1-z^3*y)"));
  S.set_gamma(1, 0, 1, P("1/(x-z)"));
  S.set_c(0, 1, P("-z^3/((x-z)*(1-z^3*y))"));
  S.set_gamma(0, 0, 2, P("-3*y*z^2/(1-z^3*y)"));
  S.set_gamma(2, 0, 2, P("(1+2*y*z^3)/" + Q));
  S.set_c(0, 2, P("-3*y*z^2*(1+2*y*z^3)/((1-z^3*y)*" + Q + ")"));
  S.set_gamma(1, 1, 2, P("(x-2*z)/(z*(x-z))"));
  S.set_gamma(2, 1, 2, P("z^3*(2*x-z)/" + Q));
  S.set_c(1, 2, P("(x-2*z)*(2*x-z)*z^2/((x-z)*" + Q + ")"));
  return S;
}

DmzSystem kt_abv2() {
  DmzSystem S({"x", "y", "z"});
  S.set_gamma(0, 0, 1, P("(x-z)/((x-y)*(y-z))"));
  S.set_gamma(1, 0, 1, P("-(y-z)/((x-y)*(x-z))"));
  S.set_gamma(0, 0, 2, P("-1/(y-z)"));
  S.set_gamma(2, 0, 2, P("0"));
  S.set_gamma(1, 1, 2, P("-1/(x-z)"));
  S.set_gamma(2, 1, 2, P("0"));
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

DmzSystem action_general(const std::map<std::string, Expr>& fns) {
  ParseOptions o{{"g", "h", "k"}};
  auto G = [&](const char* s) {
    Expr e = parse(s, o);
    return fns.empty() ? e : instantiate_functions(e, fns);
  };
  DmzSystem S({"x", "y", "z"});
  S.set_gamma(0, 0, 1, G("(g(z)-h(x))*k'(y)/((g(z)-k(y))*(h(x)-k(y)))"));
  S.set_gamma(1, 0, 1, G("-(g(z)-k(y))*h'(x)/((g(z)-h(x))*(h(x)-k(y)))"));
  S.set_gamma(0, 0, 2, G("g'(z)/(g(z)-k(y))"));
  S.set_gamma(1, 1, 2, G("g'(z)/(g(z)-h(x))"));
  return S;
}

namespace {

DmzSystem from_op(const std::map<std::pair<int, int>, std::string>& g) {
  DmzSystem S({"x", "y", "z"});
  for (auto& [ij, s] : g) S.set_gamma(ij.second, ij.first, ij.second, P(s));
  return S;
}

}  // namespace

DmzSystem new_dmz() {
  std::string Q = "(x+2*x*y*z^3-y*z^4-2*z)";
  return from_op({{{1, 0}, "z^3/(y*z^3-1)"},
                  {{0, 1}, "0"},
                  {{2, 0}, Q + "/(z*(x-z)*(y*z^3-1))"},
                  {{0, 2}, "z*(1-y*z^3)/(" + Q + "*(x-z))"},
                  {{2, 1}, "0"},
                  {{1, 2}, "z^3*(2*x-z)/" + Q}});
}

DmzSystem hat_dmz() {
  std::string q = "(2*z^2+y*z^3-2*x*z-1)", R = "(z^4*y-2*y*x*z^3+2*z-x)";
  return from_op({{{1, 0}, "2*(z-x)*z^4/((y*z^3-1)*" + q + ")"},
                  {{0, 1}, "(1-y*z^3)/((z-x)*" + q + ")"},
                  {{2, 0}, "2*" + R + "/((y*z^3-1)*" + q + ")"},
                  {{0, 2}, "(2*y*z^3+2*z^2+1)*(1-y*z^3)/(" + R + "*" + q + ")"},
                  {{2, 1}, R + "/((x-z)*z*" + q + ")"},
                  {{1, 2}, "(2*z^2-4*x*z-3)*(z-x)*z^3/(" + R + "*" + q + ")"}});
}

Expr gauge_lambda0() { return P("-ln(z*(x-z))"); }

Expr particular_lambda() { return P("(6-12*z^2-6*y*z^3+12*x*z)/(z*(x-z))"); }

Expr general_solution() {
  ParseOptions o{{"A", "B", "C"}};
  return parse(
      "(6*x*y*z^5*C'(z) - 2*z^4*C''(z) - 10*z^3*C'(z) - 6*z^2*C(z) - 6*z^2*B(y) + 2*x*y*z^6*C''(z)"
      " + x*z^3*C''(z) + 6*x*z^2*C'(z) - y*z^7*C''(z) - 2*y*z^6*C'(z) - 6*y*z^3*A(x) + 6*x*z*C(z)"
      " + 6*x*z*B(y) + 6*A(x))/(z*(x-z))",
      o);
}

LamePotentials new_dmz_potentials() {
  return {{P("(y*z^3-1)/(z*(z-x))"), P("1"), P("(-z^4*y-2*z+x+2*x*z^3*y)/(x-z)")}};
}

LamePotentials hat_potentials() {
  std::string q = "(2*z^2+y*z^3-2*x*z-1)";
  return {{P("(y*z^3-1)/" + q), P("(z-x)*z/" + q), P("(2*z-x-2*y*x*z^3+z^4*y)/" + q)}};
}

WaveMatrix wave_sol0() {
  WaveMatrix A{{"x", "y", "z"}, {}};
  A.set(0, 2, P("z^2/(x-z)"));
  A.set(1, 0, P("-z^2/(y*(x-z))"));
  A.set(1, 2, P("z^3*(2*x-z)/(y*(x-z))"));
  A.set(2, 0, P("-1/(z^2*(x-z))"));
  A.set(0, 1, P("0"));
  A.set(2, 1, P("0"));
  return A;
}

WaveMatrix wave_sol1() {
  std::string q = "(2*z^2+y*z^3-2*x*z-1)";
  WaveMatrix A{{"x", "y", "z"}, {}};
  A.set(0, 1, P("-z/" + q));
  A.set(0, 2, P("(2*y*z^3+2*z^2+1)/" + q));
  A.set(1, 0, P("2*z^3/" + q));
  A.set(1, 2, P("z^2*(2*z^2-4*x*z-3)/" + q));
  A.set(2, 0, P("2/" + q));
  A.set(2, 1, P("1/" + q));
  return A;
}

Expr reference_h32() { return P("2*(y^2*z^6-2*y*z^3+1)/(x-y*z^4+2*x*y*z^3-2*z)^2"); }
Expr reference_h23() { return P("6*z^2*(z-x)^2/(x-y*z^4+2*x*y*z^3-2*z)^2"); }

}  // namespace fx

namespace fx {

namespace {

Expr random_monomial(std::mt19937_64& gen, const std::vector<std::string>& vars) {
  std::uniform_int_distribution<int> coef(-5, 5), den(1, 3), deg(0, 2);
  int c = coef(gen);
  if (c == 0) c = 1;
  Expr m = Expr(mpq_class(c, den(gen)));
  for (auto& v : vars) m *= pow(Expr::sym(v), deg(gen));
  return m;
}

Expr random_poly(std::mt19937_64& gen, const std::vector<std::string>& vars) {
  std::uniform_int_distribution<int> terms(1, 3);
  Expr p;
  for (int t = terms(gen); t > 0; --t) p += random_monomial(gen, vars);
  return p;
}

}  // namespace

Expr random_rational(std::mt19937_64& gen, const std::vector<std::string>& vars, bool allow_division) {
  Expr num = random_poly(gen, vars);
  if (!allow_division || std::uniform_int_distribution<int>(0, 2)(gen) == 0) return num;
  Expr den = random_poly(gen, vars);
  while (vanishes(den)) den = random_poly(gen, vars);
  return num / den;
}

Expr random_transcendental(std::mt19937_64& gen, const std::vector<std::string>& vars) {
  static const Func fs[] = {Func::Sin, Func::Cos, Func::Exp, Func::Tanh};
  std::uniform_int_distribution<int> pick(0, 3), var(0, static_cast<int>(vars.size()) - 1);
  Expr e = random_rational(gen, vars, false);
  for (int k = 0; k < 2; ++k) {
    Expr arg = random_monomial(gen, {vars[var(gen)]});
    e = e * Expr::fn(fs[pick(gen)], arg) + random_monomial(gen, vars);
  }
  return e;
}

}  // namespace fx
