#pragma once

#include "dmzkit/expr.hpp"
#include "dmzkit/ratfunc.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dmzkit {

using Real = boost::multiprecision::mpfr_float;

// ---------------------------------------------------------------------------
// Parsing

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& msg)
      : std::runtime_error("offset " + std::to_string(offset) + ": " + msg), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct ParseOptions {
  // Names accepted as undeclared univariate functions, e.g. f1 in f1'(u1).
  std::set<std::string> functions;
};

// Parses and returns the rational normal form (function applications are
// kept as kernels; no transcendental rewriting).
Expr parse(std::string_view text, const ParseOptions& opts = {});
// Parses with automatic simplification only.
Expr parse_raw(std::string_view text, const ParseOptions& opts = {});

// ---------------------------------------------------------------------------
// Canonical forms and calculus

// Rational normal form c*N/D, N and D primitive with positive leading
// display term. Function applications are treated as independent kernels.
Expr normal_form(const Expr& e);
// normal_form after the transcendental rewrite pass.
Expr canonicalize(const Expr& e);
// tan -> sin/cos, tanh -> sinh/cosh, sin^2 -> 1-cos^2, cosh^2 -> 1+sinh^2,
// exp products merged, ln(exp(a)) -> a, exp(ln(a)) -> a.
Expr rewrite_transcendental(const Expr& e);

Expr diff(const Expr& e, const std::string& var);
// Simultaneous substitution followed by normal_form.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);
// Replaces every opaque application f^(k)(a) by the k-th derivative of the
// bound univariate expression (in variable `s`) evaluated at a.
Expr instantiate_functions(const Expr& e, const std::map<std::string, Expr>& fns,
                           const std::string& s = "s");

// ---------------------------------------------------------------------------
// Evaluation

using Assignment = std::map<std::string, mpq_class>;

class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Sets the working precision of Real (in bits) for the current scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

using RealAssignment = std::map<std::string, Real>;
// Floating evaluation at the current precision; throws PoleError only on an
// exact zero denominator.
Real eval_real(const Expr& e, const RealAssignment& a);

// Exact value of a rational-fragment expression.
mpq_class eval_exact(const Expr& e, const Assignment& a);

// Midpoint and error estimate from evaluations at precision p and 2p.
struct Approx {
  Real mid;
  Real radius;
};
Approx eval_approx(const Expr& e, const Assignment& a, unsigned precision_bits);

struct EvalResult {
  bool exact = false;
  mpq_class value;
  Approx approx;
};
EvalResult eval(const Expr& e, const Assignment& a, unsigned precision_bits = 256);

// ---------------------------------------------------------------------------
// Zero testing

struct ZeroTestConfig {
  std::uint64_t seed = 0;
  int samples = 32;
  unsigned precision = 256;
  int tolerance_log2 = -64;
  int instantiations = 10;  // random polynomial instances of opaque functions
};

// Process-wide defaults (the CLI flags --seed/--samples/--precision).
ZeroTestConfig& zero_test_defaults();

enum class ZeroKind { ProvablyZero, ProvablyNonzero, ProbablyZero, ProbablyNonzero, Indeterminate };

struct Verdict {
  ZeroKind kind = ZeroKind::Indeterminate;
  int samples = 0;
  Assignment witness;
  std::string witness_value;
  std::string note;

  bool zero() const { return kind == ZeroKind::ProvablyZero || kind == ZeroKind::ProbablyZero; }
  std::string describe() const;
};

std::string to_string(ZeroKind k);
std::string witness_string(const Assignment& a);

Verdict is_zero(const Expr& e, const ZeroTestConfig& cfg);
Verdict is_zero(const Expr& e);
// Shorthand for is_zero(e).zero().
bool vanishes(const Expr& e);

// Nonconstant polynomial in s of degree at most max_degree with small
// rational coefficients; used to instantiate opaque functions.
Expr random_polynomial(std::mt19937_64& gen, const std::string& s, int max_degree = 3);

// Deterministic random rational in [-10, 10].
class SamplePoints {
 public:
  explicit SamplePoints(std::uint64_t seed);
  mpq_class next();
  Assignment point(const std::set<std::string>& vars);

 private:
  std::uint64_t state_;
};

}  // namespace dmzkit
