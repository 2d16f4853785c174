#pragma once

#include "dmzkit/geometry.hpp"

#include <optional>
#include <stdexcept>

namespace dmzkit {

// J^{k_1}(R,R) x ... x J^{k_r}(R,R). Factor i with base name b has the
// coordinates b, b0, b1, ..., b<k_i>.
class JetProduct {
 public:
  JetProduct(std::vector<int> orders, std::vector<std::string> bases = {});

  const std::vector<int>& orders() const { return orders_; }
  const std::vector<std::string>& bases() const { return bases_; }
  const ChartPtr& chart() const { return chart_; }
  std::size_t factors() const { return orders_.size(); }
  std::string independent(std::size_t i) const { return bases_[i]; }
  std::string jet(std::size_t i, int m) const { return bases_[i] + std::to_string(m); }

 private:
  std::vector<int> orders_;
  std::vector<std::string> bases_;
  ChartPtr chart_;
};

// One rank-2 distribution per factor: the total derivative field and the
// highest-derivative vertical field.
std::vector<Distribution> contact_basis(const JetProduct& J);

class SymmetryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Prolongs a field living on the base and zeroth-order coordinates; the
// result is checked to be an infinitesimal symmetry of the contact system.
VectorField prolong(const VectorField& X, const JetProduct& J);

class InverseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SymbolicMap {
  ChartPtr source, target;
  std::vector<Expr> to;                       // target coordinates in source variables
  std::optional<std::vector<Expr>> inverse;   // source coordinates in target variables

  // Throws InverseError unless both composites reduce to the identity.
  void verify_inverse() const;
};

VectorField pushforward(const SymbolicMap& phi, const VectorField& X);
Distribution pushforward(const SymbolicMap& phi, const Distribution& D);

// Renames coordinates (group blocks onto the shared w block) and assembles
// the parts of both sides on the union chart.
std::vector<Distribution> assemble_quotient_H(const std::vector<Distribution>& pushed1,
                                              const std::vector<Distribution>& pushed2,
                                              const std::map<std::string, std::string>& renaming);

}  // namespace dmzkit
