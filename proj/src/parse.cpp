#include "dmzkit/symkernel.hpp"

#include <cctype>

namespace dmzkit {

namespace {

class Parser {
 public:
  Parser(std::string_view s, const ParseOptions& o) : s_(s), opts_(o) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view s_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  Expr expr() {
    Expr acc = term();
    std::vector<Expr> terms{acc};
    while (true) {
      if (accept('+')) terms.push_back(term());
      else if (accept('-')) terms.push_back(-term());
      else break;
    }
    return terms.size() == 1 ? terms[0] : Expr::add(std::move(terms));
  }

  Expr term() {
    Expr acc = factor();
    while (true) {
      if (accept('*')) acc = acc * factor();
      else if (accept('/')) {
        std::size_t at = pos_;
        Expr d = factor();
        if (d.is_zero()) throw ParseError(at, "division by zero");
        acc = acc / d;
      } else break;
    }
    return acc;
  }

  Expr factor() {
    if (accept('-')) return -factor();
    if (accept('+')) return factor();
    Expr b = base();
    if (accept('^')) {
      skip();
      bool neg = false;
      if (accept('-')) neg = true;
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("integer exponent expected");
      if (pos_ < s_.size() && s_[pos_] == '.') fail("decimal literals are not supported");
      long e = std::stol(std::string(s_.substr(start, pos_ - start)));
      if (neg && b.is_zero()) throw ParseError(start, "division by zero");
      return pow(b, neg ? -e : e);
    }
    return b;
  }

  Expr base() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')')) fail("')' expected");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
        fail("decimal literals are not supported; write fractions as a/b");
      return Expr(mpq_class(mpz_class(std::string(s_.substr(start, pos_ - start)))));
    }
    if (c == '.') fail("decimal literals are not supported; write fractions as a/b");
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      int primes = 0;
      while (pos_ < s_.size() && s_[pos_] == '\'') {
        ++primes;
        ++pos_;
      }
      if (peek('(')) {
        std::size_t at = start;
        ++pos_;
        Expr arg = expr();
        if (!accept(')')) fail("')' expected");
        if (opts_.functions.count(name)) return Expr::opaque(name, primes, arg);
        if (primes) throw ParseError(at, "derivative marks on non-declared function '" + name + "'");
        static const std::pair<const char*, Func> table[] = {
            {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan}, {"sinh", Func::Sinh},
            {"cosh", Func::Cosh}, {"tanh", Func::Tanh}, {"exp", Func::Exp}, {"ln", Func::Ln}};
        for (auto& [n, f] : table)
          if (name == n) return Expr::fn(f, arg);
        throw ParseError(at, "unknown function name '" + name + "'");
      }
      if (primes) fail("derivative marks require a function application");
      return Expr::sym(name);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace

Expr parse_raw(std::string_view text, const ParseOptions& opts) { return Parser(text, opts).run(); }

Expr parse(std::string_view text, const ParseOptions& opts) { return normal_form(parse_raw(text, opts)); }

}  // namespace dmzkit
