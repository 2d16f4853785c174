#pragma once

#include "dmzkit/ratfunc.hpp"

#include <vector>

namespace dmzkit {

using RVec = std::vector<RatFunc>;

bool is_zero_vec(const RVec& v);

// Row space kept in reduced row echelon form over the rational function
// field. Used for membership tests and incremental bases.
class Span {
 public:
  explicit Span(std::size_t dim) : dim_(dim) {}

  // Adds v; returns false when v already lies in the span.
  bool insert(const RVec& v);
  // Remainder of v after elimination against the pivots (zero on pivot columns).
  RVec reduce(RVec v) const;
  bool contains(const RVec& v) const { return is_zero_vec(reduce(v)); }

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<RVec>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return piv_; }

 private:
  std::size_t dim_;
  std::vector<RVec> rows_;
  std::vector<std::size_t> piv_;
};

// Basis of {a : sum_i a_i * M[r][i] = 0 for all rows r}; M has `cols` columns.
std::vector<RVec> nullspace(const std::vector<RVec>& m, std::size_t cols);

// Fraction-free elimination after clearing row denominators. `locus` is the
// last pivot: the rank can only drop on its zero set.
struct BareissRank {
  std::size_t rank = 0;
  Poly locus{1};
};
BareissRank bareiss_rank(const std::vector<RVec>& rows);

}  // namespace dmzkit
