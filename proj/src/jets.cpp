#include "dmzkit/jets.hpp"

#include <algorithm>

namespace dmzkit {

JetProduct::JetProduct(std::vector<int> orders, std::vector<std::string> bases)
    : orders_(std::move(orders)), bases_(std::move(bases)) {
  if (bases_.empty())
    for (std::size_t i = 0; i < orders_.size(); ++i) bases_.push_back("a" + std::to_string(i + 1));
  if (bases_.size() != orders_.size()) throw std::invalid_argument("one base name per jet factor");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    if (orders_[i] < 1) throw std::invalid_argument("jet order must be at least 1");
    names.push_back(bases_[i]);
    for (int m = 0; m <= orders_[i]; ++m) names.push_back(jet(i, m));
  }
  chart_ = make_chart(std::move(names));
}

namespace {

VectorField total_derivative(const JetProduct& J, std::size_t i) {
  std::map<std::string, Expr> c{{J.independent(i), Expr(1)}};
  for (int m = 0; m < J.orders()[i]; ++m) c[J.jet(i, m)] = Expr::sym(J.jet(i, m + 1));
  return VectorField::from_map(J.chart(), c);
}

}  // namespace

std::vector<Distribution> contact_basis(const JetProduct& J) {
  std::vector<Distribution> out;
  for (std::size_t i = 0; i < J.factors(); ++i)
    out.emplace_back(J.chart(), std::vector<VectorField>{total_derivative(J, i),
                                                         VectorField::basis(J.chart(), J.jet(i, J.orders()[i]))});
  return out;
}

VectorField prolong(const VectorField& X, const JetProduct& J) {
  const auto& ch = *J.chart();
  if (!(*X.chart() == ch)) throw std::invalid_argument("prolong: field must live on the jet chart");
  std::map<std::string, Expr> c;
  for (std::size_t i = 0; i < J.factors(); ++i) {
    if (!X.coeff(J.independent(i)).is_zero())
      throw SymmetryError("prolong: the field moves the independent variable " + J.independent(i));
    for (int m = 1; m <= J.orders()[i]; ++m)
      if (!X.coeff(J.jet(i, m)).is_zero())
        throw SymmetryError("prolong: the field has a component along " + J.jet(i, m));
    VectorField D = total_derivative(J, i);
    Expr phi = X.coeff(J.jet(i, 0));
    c[J.jet(i, 0)] = phi;
    for (int m = 1; m <= J.orders()[i]; ++m) {
      phi = D.apply(phi);
      c[J.jet(i, m)] = phi;
    }
  }
  VectorField P = VectorField::from_map(J.chart(), c);
  Distribution C = direct_sum(contact_basis(J));
  for (auto& Y : C.fields()) {
    VectorField b = lie_bracket(P, Y);
    if (!C.contains(b))
      throw SymmetryError("prolonged field is not a contact symmetry: [X, " + to_string(Y) + "] = " + to_string(b));
  }
  return P;
}

void SymbolicMap::verify_inverse() const {
  if (!inverse) throw InverseError("no inverse supplied");
  if (to.size() != target->dim() || inverse->size() != source->dim())
    throw InverseError("map component counts differ from chart dimensions");
  std::map<std::string, Expr> inv, fwd;
  for (std::size_t j = 0; j < source->dim(); ++j) inv[source->coords[j]] = (*inverse)[j];
  for (std::size_t k = 0; k < target->dim(); ++k) fwd[target->coords[k]] = to[k];
  for (std::size_t k = 0; k < target->dim(); ++k) {
    Expr back = substitute(to[k], inv);
    if (!is_zero(back - Expr::sym(target->coords[k])).zero())
      throw InverseError("phi(inverse) differs from the identity at " + target->coords[k] + ": " + to_string(back));
  }
  for (std::size_t j = 0; j < source->dim(); ++j) {
    Expr back = substitute((*inverse)[j], fwd);
    if (!is_zero(back - Expr::sym(source->coords[j])).zero())
      throw InverseError("inverse(phi) differs from the identity at " + source->coords[j] + ": " + to_string(back));
  }
}

VectorField pushforward(const SymbolicMap& phi, const VectorField& X) {
  if (!(*X.chart() == *phi.source)) throw std::invalid_argument("pushforward: field not on the source chart");
  if (!phi.inverse) throw InverseError("pushforward needs the inverse map");
  std::map<std::string, Expr> inv;
  for (std::size_t j = 0; j < phi.source->dim(); ++j) inv[phi.source->coords[j]] = (*phi.inverse)[j];
  std::vector<Expr> c;
  for (auto& t : phi.to) c.push_back(substitute(X.apply(t), inv));
  return VectorField(phi.target, std::move(c));
}

Distribution pushforward(const SymbolicMap& phi, const Distribution& D) {
  phi.verify_inverse();
  std::vector<VectorField> f;
  for (auto& X : D.fields()) f.push_back(pushforward(phi, X));
  return Distribution(phi.target, std::move(f));
}

std::vector<Distribution> assemble_quotient_H(const std::vector<Distribution>& pushed1,
                                              const std::vector<Distribution>& pushed2,
                                              const std::map<std::string, std::string>& renaming) {
  auto rn = [&](const std::string& s) {
    auto it = renaming.find(s);
    return it == renaming.end() ? s : it->second;
  };
  std::map<std::string, Expr> subst;
  for (auto& [a, b] : renaming) subst[a] = Expr::sym(b);

  std::vector<std::string> names, group;
  auto collect = [&](const std::vector<Distribution>& side) {
    if (side.empty()) return;
    for (auto& c : side[0].chart()->coords) {
      std::string n = rn(c);
      auto& dst = renaming.count(c) ? group : names;
      if (std::find(names.begin(), names.end(), n) == names.end() &&
          std::find(group.begin(), group.end(), n) == group.end())
        dst.push_back(n);
    }
  };
  collect(pushed1);
  collect(pushed2);
  names.insert(names.end(), group.begin(), group.end());
  ChartPtr chart = make_chart(names);

  std::vector<Distribution> out;
  for (auto* side : {&pushed1, &pushed2})
    for (auto& part : *side) {
      std::vector<VectorField> f;
      for (auto& X : part.fields()) {
        std::map<std::string, Expr> c;
        for (std::size_t k = 0; k < X.coeffs().size(); ++k)
          if (!X[k].is_zero()) c[rn(X.chart()->coords[k])] += substitute(X[k], subst);
        f.push_back(VectorField::from_map(chart, c));
      }
      out.emplace_back(chart, std::move(f));
    }
  return out;
}

}  // namespace dmzkit
