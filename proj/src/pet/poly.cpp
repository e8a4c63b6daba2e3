#include "hardyrec/pet/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "hardyrec/error.hpp"

namespace hr::pet {

namespace {

void trim(Exponents& e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
}

int exp_at(const Exponents& e, std::size_t i) { return i < e.size() ? e[i] : 0; }

}  // namespace

void Poly::add_term(Exponents e, const mpz_class& c) {
  if (c == 0) return;
  trim(e);
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(std::move(e), c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::constant(const mpz_class& c) {
  Poly p;
  p.add_term({}, c);
  return p;
}

Poly Poly::n() { return monomial({1}, 1); }

Poly Poly::h(int j) {
  if (j < 1) throw PreconditionError("parameter index must be positive");
  Exponents e(static_cast<std::size_t>(j) + 1, 0);
  e[static_cast<std::size_t>(j)] = 1;
  return monomial(std::move(e), 1);
}

Poly Poly::monomial(Exponents e, const mpz_class& c) {
  Poly p;
  p.add_term(std::move(e), c);
  return p;
}

int Poly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, exp_at(e, 0));
  return d;
}

Poly Poly::coeff(int i) const {
  Poly p;
  for (const auto& [e, c] : terms_) {
    if (exp_at(e, 0) != i) continue;
    Exponents f = e;
    if (!f.empty()) f[0] = 0;
    p.add_term(std::move(f), c);
  }
  return p;
}

int Poly::max_param() const {
  int m = 0;
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = e.size(); i-- > 1;) {
      if (e[i] != 0) {
        m = std::max(m, static_cast<int>(i));
        break;
      }
    }
  }
  return m;
}

Poly Poly::substitute(int var, const Poly& v) const {
  Poly out;
  for (const auto& [e, c] : terms_) {
    const int k = exp_at(e, static_cast<std::size_t>(var));
    Exponents f = e;
    if (static_cast<std::size_t>(var) < f.size()) f[static_cast<std::size_t>(var)] = 0;
    out += monomial(std::move(f), c) * v.pow(static_cast<unsigned>(k));
  }
  return out;
}

Poly Poly::shift(int j) const { return substitute(0, n() + h(j)); }

Poly Poly::shift(const Poly& by) const {
  if (by.degree() > 0) throw PreconditionError("shift must not involve n");
  return substitute(0, n() + by);
}

mpz_class Poly::eval(const std::vector<mpz_class>& point) const {
  mpz_class total = 0;
  for (const auto& [e, c] : terms_) {
    mpz_class t = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (i >= point.size()) throw PreconditionError("evaluation point misses a variable");
      mpz_class p;
      mpz_pow_ui(p.get_mpz_t(), point[i].get_mpz_t(), static_cast<unsigned long>(e[i]));
      t *= p;
    }
    total += t;
  }
  return total;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly operator-(const Poly& a) {
  Poly p;
  for (const auto& [e, c] : a.terms_) p.add_term(e, -c);
  return p;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly p;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e(std::max(ea.size(), eb.size()), 0);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = exp_at(ea, i) + exp_at(eb, i);
      p.add_term(std::move(e), ca * cb);
    }
  }
  return p;
}

Poly operator*(const mpz_class& c, const Poly& a) { return Poly::constant(c) * a; }

Poly Poly::pow(unsigned e) const {
  Poly r = constant(1), b = *this;
  while (e) {
    if (e & 1u) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

bool canonical_less(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size();
  return a.terms_ < b.terms_;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Exponents, mpz_class>> v(terms_.begin(), terms_.end());
  // Descending n-degree, then descending total degree, then ascending parameter index.
  std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) {
    const int nx = exp_at(x.first, 0), ny = exp_at(y.first, 0);
    if (nx != ny) return nx > ny;
    int tx = 0, ty = 0;
    for (int t : x.first) tx += t;
    for (int t : y.first) ty += t;
    if (tx != ty) return tx > ty;
    return x.first > y.first;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : v) {
    mpz_class a = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    std::vector<std::string> f;
    for (std::size_t i = 1; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      std::string s = "h" + std::to_string(i);
      if (e[i] > 1) s += "^" + std::to_string(e[i]);
      f.push_back(s);
    }
    if (exp_at(e, 0) > 0) f.push_back(exp_at(e, 0) > 1 ? "n^" + std::to_string(e[0]) : "n");
    if (a != 1 || f.empty()) f.insert(f.begin(), a.get_str());
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "*" : "") << f[i];
  }
  return os.str();
}

namespace {

class PolyParser {
 public:
  explicit PolyParser(const std::string& s) : s_(s) {}

  Poly run() {
    Poly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }

  std::vector<Poly> run_list() {
    std::vector<Poly> out{expr()};
    while (accept(',')) out.push_back(expr());
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& m) const { throw ParseError(m, pos_); }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek_atom() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == 'n' || c == 'h' || c == '(';
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly expr() {
    Poly p;
    if (accept('-')) {
      p = -term();
    } else {
      accept('+');
      p = term();
    }
    for (;;) {
      if (accept('+')) {
        p += term();
      } else if (accept('-')) {
        p -= term();
      } else {
        return p;
      }
    }
  }

  Poly term() {
    Poly p = factor();
    for (;;) {
      if (accept('*')) {
        p = p * factor();
      } else if (peek_atom()) {
        p = p * factor();
      } else {
        return p;
      }
    }
  }

  Poly factor() {
    Poly b = atom();
    if (accept('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      const unsigned long e = std::stoul(s_.substr(start, pos_ - start));
      if (e > 64) fail("exponent too large");
      b = b.pow(static_cast<unsigned>(e));
    }
    return b;
  }

  Poly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Poly::constant(mpz_class(s_.substr(start, pos_ - start)));
    }
    if (c == 'n') {
      ++pos_;
      return Poly::n();
    }
    if (c == 'h') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("parameter needs an index, e.g. h1");
      const int j = std::stoi(s_.substr(start, pos_ - start));
      if (j < 1 || j > 64) fail("parameter index out of range");
      return Poly::h(j);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(const std::string& text) { return PolyParser(text).run(); }

std::vector<Poly> parse_poly_list(const std::string& text) { return PolyParser(text).run_list(); }

}  // namespace hr::pet
