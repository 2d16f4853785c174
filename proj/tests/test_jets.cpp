#include <doctest.h>

#include "fixtures.hpp"

using namespace dmzkit;
using fx::field;
using fx::P;

namespace {

// Re-expresses a distribution on another chart with the same coordinate names.
Distribution rechart(const Distribution& D, const ChartPtr& c) {
  std::vector<VectorField> f;
  for (auto& X : D.fields()) {
    std::map<std::string, Expr> m;
    for (std::size_t k = 0; k < X.coeffs().size(); ++k) m[X.chart()->coords[k]] = X[k];
    for (auto& [name, e] : m) REQUIRE((e.is_zero() || c->index(name) >= 0));
    f.push_back(VectorField::from_map(c, m));
  }
  return Distribution(c, f);
}

std::vector<Expr> P_all(std::initializer_list<const char*> xs) {
  std::vector<Expr> out;
  for (auto* s : xs) out.push_back(P(s));
  return out;
}

SymbolicMap phi1_affine_quotient() {
  JetProduct J({2, 2}, {"x", "y"});
  SymbolicMap m;
  m.source = J.chart();
  m.target = make_chart({"x", "y", "p1", "p2", "u1", "u2", "a1", "a2"});
  m.to = P_all({"x", "y", "(x0-y0)/x1", "y1/x1", "x2/x1", "y2/y1", "1/x1", "-x0/x1"});
  m.inverse = P_all({"x", "-a2/a1", "1/a1", "u1/a1", "y", "-(a2+p1)/a1", "p2/a1", "u2*p2/a1"});
  return m;
}

SymbolicMap phi2_affine_quotient() {
  JetProduct J({2}, {"z"});
  SymbolicMap m;
  m.source = J.chart();
  m.target = make_chart({"z", "v1", "b1", "b2"});
  m.to = P_all({"z", "z2/z1", "z1", "-z0"});
  m.inverse = P_all({"z", "-b2", "b1", "v1*b1"});
  return m;
}

// The R^4 example: J^4 with q = z0, ..., q4 = z4.
SymbolicMap phi1_r4() {
  JetProduct J({4}, {"z"});
  SymbolicMap m;
  m.source = J.chart();
  m.target = make_chart({"z", "u", "a1", "a2", "a3", "a4"});
  m.to = P_all({"z", "z4", "z2-z*z3", "2*z*z2-z^2*z3-2*z1", "6*z0-6*z*z1+3*z^2*z2-z^3*z3", "-z3"});
  Expr q3 = P("-a4");
  Expr q2 = P("a1") + P("z") * q3;
  Expr q1 = (P("2*z") * q2 - P("z^2") * q3 - P("a2")) / Expr(2);
  Expr q0 = (P("a3") + P("6*z") * q1 - P("3*z^2") * q2 + P("z^3") * q3) / Expr(6);
  m.inverse = std::vector<Expr>{P("z"), normal_form(q0), normal_form(q1), normal_form(q2), q3, P("u")};
  return m;
}

SymbolicMap phi2_r4() {
  JetProduct J({2, 2}, {"x", "y"});
  SymbolicMap m;
  m.source = J.chart();
  m.target = make_chart({"x", "y", "v1", "v2", "b1", "b2", "b3", "b4"});
  m.to = P_all({"x", "y", "x2", "y2", "x1", "x*x1-x0", "y1", "y*y1-y0"});
  m.inverse = P_all({"x", "x*b1-b2", "b1", "v1", "y", "y*b3-b4", "b3", "v2"});
  return m;
}

}  // namespace

TEST_CASE("contact basis") {
  JetProduct J({2}, {"z"});
  CHECK(J.chart()->dim() == 4);
  auto C = contact_basis(J);
  REQUIRE(C.size() == 1);
  auto c = J.chart();
  CHECK(same_span(C[0], Distribution(c, {field(c, {{"z", "1"}, {"z0", "z1"}, {"z1", "z2"}}), VectorField::basis(c, "z2")})));
  CHECK(to_string(derived_type(C[0])) == "[[2,0],[3,1],[4,4]]");

  JetProduct J22({2, 2}, {"x", "y"});
  CHECK(J22.chart()->dim() == 8);
  for (auto& D : contact_basis(J22)) CHECK(D.rank() == 2);
  Distribution all = direct_sum(contact_basis(J22));
  auto flag = derived_flag(all);
  REQUIRE(flag.size() >= 2);
  Distribution ch = cauchy_characteristic(flag[1]);
  Distribution tops(J22.chart(), {VectorField::basis(J22.chart(), "x2"), VectorField::basis(J22.chart(), "y2")});
  CHECK(same_span(ch, tops));
}

TEST_CASE("prolongation") {
  JetProduct J({2}, {"x"});
  auto c = J.chart();
  CHECK(same_span(Distribution(c, {prolong(field(c, {{"x0", "x0"}}), J)}),
                  Distribution(c, {field(c, {{"x0", "x0"}, {"x1", "x1"}, {"x2", "x2"}})})));
  auto T = prolong(VectorField::basis(c, "x0"), J);
  for (auto& k : {"x1", "x2"}) CHECK(T.coeff(k).is_zero());
  CHECK(T.coeff("x0") == Expr(1));
  CHECK_THROWS_AS(prolong(VectorField::basis(c, "x"), J), SymmetryError);
  CHECK_THROWS_AS(prolong(field(c, {{"x0", "x1"}}), J), SymmetryError);

  // The four R^4 generators on J^4 (q = z0): prolonging the q-component
  // recovers the infinitesimal action on every jet coordinate.
  JetProduct J4({4}, {"z"});
  auto c4 = J4.chart();
  std::vector<std::map<std::string, std::string>> gens{
      {{"z0", "-z^2/2"}, {"z1", "-z"}, {"z2", "-1"}},
      {{"z0", "z/2"}, {"z1", "1/2"}},
      {{"z0", "-1/6"}},
      {{"z0", "z^3/6"}, {"z1", "z^2/2"}, {"z2", "z"}, {"z3", "1"}},
  };
  for (auto& g : gens) {
    auto full = field(c4, g);
    auto pr = prolong(field(c4, {{"z0", g.at("z0")}}), J4);
    for (std::size_t k = 0; k < c4->dim(); ++k) CHECK(pr[k] == full[k]);
    // base restriction
    CHECK(pr.coeff("z").is_zero());
  }
}

TEST_CASE("pushforward of the affine quotient contact systems") {
  auto m1 = phi1_affine_quotient();
  m1.verify_inverse();
  JetProduct J22({2, 2}, {"x", "y"});
  auto C = contact_basis(J22);
  auto t = m1.target;
  auto X1 = field(t, {{"x", "1"}, {"p1", "1-p1*u1"}, {"p2", "-p2*u1"}, {"u1", "-u1^2"}, {"a1", "-u1*a1"}, {"a2", "-(1+u1*a2)"}});
  auto X2 = field(t, {{"y", "1"}, {"p1", "-p2"}, {"p2", "p2*u2"}, {"u2", "-u2^2"}});
  CHECK(same_span(pushforward(m1, C[0]), Distribution(t, {X1, VectorField::basis(t, "u1")})));
  CHECK(same_span(pushforward(m1, C[1]), Distribution(t, {X2, VectorField::basis(t, "u2")})));
  // The field itself, not just its span.
  auto D = pushforward(m1, C[0].fields()[0]);
  for (std::size_t k = 0; k < t->dim(); ++k) CHECK(vanishes(D[k] - X1[k]));

  auto m2 = phi2_affine_quotient();
  auto t2 = m2.target;
  auto Y1 = field(t2, {{"z", "1"}, {"v1", "-v1^2"}, {"b1", "v1*b1"}, {"b2", "-b1"}});
  CHECK(same_span(pushforward(m2, contact_basis(JetProduct({2}, {"z"}))[0]), Distribution(t2, {Y1, VectorField::basis(t2, "v1")})));
}

TEST_CASE("quotient assembly reproduces the reference H") {
  auto p1 = phi1_affine_quotient(), p2 = phi2_affine_quotient();
  std::vector<Distribution> s1, s2;
  for (auto& D : contact_basis(JetProduct({2, 2}, {"x", "y"}))) s1.push_back(pushforward(p1, D));
  s2.push_back(pushforward(p2, contact_basis(JetProduct({2}, {"z"}))[0]));
  auto H = assemble_quotient_H(s1, s2, {{"a1", "w1"}, {"a2", "w2"}, {"b1", "w1"}, {"b2", "w2"}});
  auto ex = fx::affine_quotient();
  REQUIRE(H.size() == 3);
  auto c = ex.parts[0].chart();
  for (int i = 0; i < 3; ++i) CHECK(same_span(rechart(H[i], c), ex.parts[i]));
  CHECK(check_n_hyperbolic(H).ok);

  auto q1 = phi1_r4(), q2 = phi2_r4();
  q1.verify_inverse();
  q2.verify_inverse();
  auto t1 = q1.target;
  auto Z = field(t1, {{"z", "1"}, {"a1", "-u*z"}, {"a2", "-u*z^2"}, {"a3", "-u*z^3"}, {"a4", "-u"}});
  auto C4 = contact_basis(JetProduct({4}, {"z"}));
  CHECK(same_span(pushforward(q1, C4[0]), Distribution(t1, {Z, VectorField::basis(t1, "u")})));
  std::vector<Distribution> r1, r2;
  for (auto& D : contact_basis(JetProduct({2, 2}, {"x", "y"}))) r2.push_back(pushforward(q2, D));
  auto t2 = q2.target;
  CHECK(same_span(r2[0], Distribution(t2, {field(t2, {{"x", "1"}, {"b1", "v1"}, {"b2", "x*v1"}}), VectorField::basis(t2, "v1")})));
  CHECK(same_span(r2[1], Distribution(t2, {field(t2, {{"y", "1"}, {"b3", "v2"}, {"b4", "y*v2"}}), VectorField::basis(t2, "v2")})));
  r1.push_back(pushforward(q1, C4[0]));
  std::map<std::string, std::string> ren;
  for (int k = 1; k <= 4; ++k) ren["a" + std::to_string(k)] = ren["b" + std::to_string(k)] = "w" + std::to_string(k);
  auto H4 = assemble_quotient_H(r2, r1, ren);
  auto rex = fx::r4_example();
  auto rc = rex.parts[0].chart();
  for (int i = 0; i < 3; ++i) CHECK(same_span(rechart(H4[i], rc), rex.parts[i]));
}

TEST_CASE("pushforward composes") {
  auto src = make_chart({"a", "b", "c"});
  auto mid = make_chart({"d", "e", "f"});
  auto dst = make_chart({"g", "h", "k"});
  SymbolicMap psi{src, mid, P_all({"a", "b+a^2", "c*a"}), P_all({"d", "e-d^2", "f/d"})};
  SymbolicMap phi{mid, dst, P_all({"d+e", "e", "f-e*d"}), P_all({"g-h", "h", "k+h*(g-h)"})};
  SymbolicMap both{src, dst, P_all({"a+b+a^2", "b+a^2", "c*a-(b+a^2)*a"}), P_all({"g-h", "h-(g-h)^2", "(k+h*(g-h))/(g-h)"})};
  std::mt19937_64 gen(5);
  for (int i = 0; i < 5; ++i) {
    std::vector<VectorField> f;
    for (int j = 0; j < 2; ++j) {
      std::vector<Expr> k;
      for (int l = 0; l < 3; ++l) k.push_back(fx::random_rational(gen, src->coords, false));
      f.emplace_back(src, k);
    }
    Distribution D(src, f);
    CHECK(same_span(pushforward(both, D), pushforward(phi, pushforward(psi, D))));
  }
  SymbolicMap bad{src, mid, P_all({"a", "b", "c"}), P_all({"d", "e", "f+1"})};
  CHECK_THROWS_AS(bad.verify_inverse(), InverseError);
  SymbolicMap id{src, src, P_all({"a", "b", "c"}), P_all({"a", "b", "c"})};
  Distribution D(src, {field(src, {{"a", "b"}, {"c", "1"}})});
  CHECK(same_span(pushforward(id, D), D));
}
