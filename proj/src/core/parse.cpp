#include <cctype>
#include <string>

#include "hardyrec/core/expr.hpp"
#include "hardyrec/error.hpp"

namespace hr {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  HardyExpr run() {
    HardyExpr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  HardyExpr expr() {
    std::vector<HardyExpr> terms{term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(negate(term()));
      } else {
        break;
      }
    }
    return sum(std::move(terms));
  }

  HardyExpr term() {
    std::vector<HardyExpr> acc{factor()};
    for (;;) {
      if (accept('*')) {
        acc.push_back(factor());
      } else if (accept('/')) {
        const std::size_t at = pos_;
        HardyExpr den = factor();
        if (den.is_const(0)) {
          pos_ = at;
          fail("division by zero constant");
        }
        if (acc.size() == 1 && acc[0].kind() == Kind::Constant && den.kind() == Kind::Constant) {
          acc[0] = constant(acc[0].value() / den.value());
        } else {
          HardyExpr num = product(std::move(acc));
          acc = {quotient(std::move(num), std::move(den))};
        }
      } else {
        break;
      }
    }
    return product(std::move(acc));
  }

  HardyExpr factor() {
    if (accept('-')) return negate(factor());
    HardyExpr b = base();
    if (accept('^')) return power(std::move(b), factor());
    return b;
  }

  HardyExpr number() {
    const std::size_t start = pos_;
    std::string digits;
    long frac_digits = 0;
    bool dot = false;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits += c;
        if (dot) ++frac_digits;
      } else if (c == '.' && !dot) {
        dot = true;
      } else {
        break;
      }
      ++pos_;
    }
    if (digits.empty()) {
      pos_ = start;
      fail("malformed number");
    }
    long exp10 = -frac_digits;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ + 1 < s_.size() &&
        (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) ||
         ((s_[pos_ + 1] == '-' || s_[pos_ + 1] == '+') && pos_ + 2 < s_.size() &&
          std::isdigit(static_cast<unsigned char>(s_[pos_ + 2]))))) {
      ++pos_;
      bool neg = false;
      if (s_[pos_] == '-' || s_[pos_] == '+') neg = s_[pos_++] == '-';
      long e = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        e = e * 10 + (s_[pos_++] - '0');
        if (e > 100000) fail("exponent too large");
      }
      exp10 += neg ? -e : e;
    }
    mpq_class q(mpz_class(digits, 10));
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    if (exp10 >= 0) q *= p10; else q /= p10;
    q.canonicalize();
    return constant(q);
  }

  HardyExpr base() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      HardyExpr e = expr();
      expect(')');
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail(std::string("unexpected '") + c + "'");
    const std::size_t start = pos_;
    std::string id;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      id += s_[pos_++];
    }
    if (id == "x") return var();
    if (id == "sqrt2") return named(NamedId::Sqrt2);
    if (id == "sqrt3") return named(NamedId::Sqrt3);
    if (id == "sqrt5") return named(NamedId::Sqrt5);
    if (id == "pi") return named(NamedId::Pi);
    if (id == "e") return named(NamedId::E);
    if (id == "phi") return named(NamedId::Phi);

    skip();
    if (pos_ >= s_.size() || s_[pos_] != '(') {
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    auto arg = [&]() {
      expect('(');
      HardyExpr a = expr();
      expect(')');
      return a;
    };
    if (id == "exp") return exp(arg());
    if (id == "log") return log(arg());
    if (id == "loglog") return log(log(arg()));
    if (id == "gamma_ln") return prim(PrimId::GammaLn, arg());
    if (id == "zeta") return prim(PrimId::Zeta, arg());
    if (id == "li") return prim(PrimId::Li, arg());
    if (id == "sin_inv_log") return prim(PrimId::SinInvLog, arg());
    if (id == "cos_inv_log") return prim(PrimId::CosInvLog, arg());
    if (id == "sqrt") {
      HardyExpr a = arg();
      if (a.kind() == Kind::Constant) {
        if (a.value() == 2) return named(NamedId::Sqrt2);
        if (a.value() == 3) return named(NamedId::Sqrt3);
        if (a.value() == 5) return named(NamedId::Sqrt5);
      }
      return power(a, constant(mpq_class(1, 2)));
    }
    auto suffix_order = [&](const std::string& prefix) -> int {
      if (id.rfind(prefix, 0) != 0 || id.size() == prefix.size() || id.size() > prefix.size() + 3) {
        return -1;
      }
      for (std::size_t i = prefix.size(); i < id.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(id[i]))) return -1;
      }
      return std::stoi(id.substr(prefix.size()));
    };
    if (const int k = suffix_order("polygamma_"); k >= 0) return prim(PrimId::Polygamma, arg(), k);
    if (const int j = suffix_order("zeta_d"); j >= 0) return prim(PrimId::ZetaDeriv, arg(), j);
    pos_ = start;
    fail("unknown function '" + id + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

HardyExpr parse(const std::string& text) { return Parser(text).run(); }

}  // namespace hr
