#include "dmzkit/residual.hpp"

#include <set>
#include <sstream>

namespace dmzkit {

std::string index_label(const std::string& family, std::initializer_list<int> idx) {
  std::ostringstream os;
  os << family << '(';
  bool first = true;
  for (int i : idx) {
    os << (first ? "" : ",") << i + 1;
    first = false;
  }
  os << ')';
  return os.str();
}

ResidualSummary summarize(const std::vector<Residual>& rs, const ZeroTestConfig& cfg) {
  ResidualSummary s;
  s.total = rs.size();
  std::set<Expr, ExprLess> seen;
  for (auto& r : rs) {
    Expr c = normal_form(r.value);
    if (seen.count(c) || seen.count(normal_form(-c))) continue;
    seen.insert(c);
    ++s.distinct;
    Verdict v = is_zero(r.value, cfg);
    if (!v.zero()) {
      s.ok = false;
      s.failure = Residual{r.label, canonicalize(r.value)};
      s.failure_verdict = v;
      return s;
    }
    if (v.kind == ZeroKind::ProvablyZero) ++s.provably;
    else if (s.samples == 0 || v.samples < s.samples) s.samples = v.samples;
  }
  return s;
}

ResidualSummary summarize(const std::vector<Residual>& rs) { return summarize(rs, zero_test_defaults()); }

std::string ResidualSummary::describe() const {
  std::ostringstream os;
  if (ok) {
    os << "pass: " << total << " residuals, " << distinct << " distinct, " << provably << " ProvablyZero";
    if (distinct > provably) os << ", " << distinct - provably << " ProbablyZero(" << samples << ")";
  } else {
    os << "fail: residual " << failure->label << " = " << to_string(failure->value) << "\n  "
       << failure_verdict.describe();
  }
  return os.str();
}

}  // namespace dmzkit
