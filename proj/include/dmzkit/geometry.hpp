#pragma once

#include "dmzkit/linalg.hpp"
#include "dmzkit/symkernel.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace dmzkit {

struct Chart {
  std::vector<std::string> coords;

  explicit Chart(std::vector<std::string> names);
  std::size_t dim() const { return coords.size(); }
  // -1 when absent.
  int index(const std::string& name) const;
  bool operator==(const Chart& o) const { return coords == o.coords; }

 private:
  std::map<std::string, std::size_t> idx_;
};

using ChartPtr = std::shared_ptr<const Chart>;
ChartPtr make_chart(std::vector<std::string> names);

class VectorField {
 public:
  VectorField() = default;
  VectorField(ChartPtr chart, std::vector<Expr> coeffs);
  // Coefficients by coordinate name; unnamed coordinates get 0.
  static VectorField from_map(ChartPtr chart, const std::map<std::string, Expr>& c);
  static VectorField basis(ChartPtr chart, const std::string& coord);

  const ChartPtr& chart() const { return chart_; }
  const std::vector<Expr>& coeffs() const { return c_; }
  const Expr& operator[](std::size_t i) const { return c_[i]; }
  const Expr& coeff(const std::string& name) const;

  // X(f) = sum_k X^k df/dx_k, in normal form.
  Expr apply(const Expr& f) const;
  RatFunc apply(const RatFunc& f) const;
  RVec rat() const;
  bool is_zero() const;

  VectorField operator+(const VectorField& o) const;
  VectorField operator-(const VectorField& o) const;
  VectorField scaled(const Expr& f) const;

 private:
  ChartPtr chart_;
  std::vector<Expr> c_;
  std::vector<Var> vars_;
};

std::string to_string(const VectorField& X);

VectorField lie_bracket(const VectorField& X, const VectorField& Y);

class Distribution {
 public:
  Distribution() = default;
  Distribution(ChartPtr chart, std::vector<VectorField> fields);

  const ChartPtr& chart() const { return chart_; }
  const std::vector<VectorField>& fields() const { return fields_; }
  std::size_t rank() const { return rank_; }
  // Vanishing locus of the last elimination pivot; constant when the rank
  // never drops.
  const Expr& degenerate_locus() const { return locus_; }

  // A maximal independent subset of the spanning fields.
  std::vector<VectorField> basis() const;
  bool contains(const VectorField& X) const;
  bool contains(const Distribution& D) const;
  Span span() const;

 private:
  ChartPtr chart_;
  std::vector<VectorField> fields_;
  std::size_t rank_ = 0;
  Expr locus_{1};
};

bool same_span(const Distribution& a, const Distribution& b);
// D + [D, D], spanned by an independent subset.
Distribution derive(const Distribution& D);
// Derived flag D, D^(1), ... until the rank is stationary.
std::vector<Distribution> derived_flag(const Distribution& D);
Distribution cauchy_characteristic(const Distribution& D);
// [X, Y] in D for all X, Y in D.
bool is_frobenius(const Distribution& D);

using DerivedType = std::vector<std::pair<std::size_t, std::size_t>>;
DerivedType derived_type(const Distribution& D);
std::string to_string(const DerivedType& t);

struct Check {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct HyperbolicReport {
  bool ok = false;
  std::vector<Check> checks;
  DerivedType type;
  Distribution H, H1, chH1;
  std::vector<std::string> warnings;
};

// Each part is an ordered pair (transversal X_i, vertical V_i).
HyperbolicReport check_n_hyperbolic(const std::vector<Distribution>& parts);
Distribution direct_sum(const std::vector<Distribution>& parts);

struct InvariantsReport {
  bool ok = false;
  std::vector<Check> checks;
};
InvariantsReport verify_invariants_report(const Distribution& D, const std::vector<Expr>& fns);
bool verify_invariants(const Distribution& D, const std::vector<Expr>& fns);

// Rank of the Jacobian of fns with respect to the chart coordinates.
std::size_t jacobian_rank(const ChartPtr& chart, const std::vector<Expr>& fns);

// The integrable distribution {V_i, [V_i, X_i]} built from the parts.
Distribution adapted_A(const std::vector<Distribution>& parts);

}  // namespace dmzkit
