#pragma once

#include "dmzkit/symkernel.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dmzkit {

struct Residual {
  std::string label;
  Expr value;
};

// Outcome of zero-testing a residual list. Residuals equal up to sign are
// tested once.
struct ResidualSummary {
  bool ok = true;
  std::size_t total = 0;
  std::size_t distinct = 0;
  std::size_t provably = 0;  // distinct residuals proven zero (rest sampled)
  std::optional<Residual> failure;
  Verdict failure_verdict;
  int samples = 0;  // minimum sample count among ProbablyZero verdicts

  std::string describe() const;
};

ResidualSummary summarize(const std::vector<Residual>& rs, const ZeroTestConfig& cfg);
ResidualSummary summarize(const std::vector<Residual>& rs);

// Index label such as "curl(1,2,3)"; indices are printed 1-based.
std::string index_label(const std::string& family, std::initializer_list<int> idx);

}  // namespace dmzkit
