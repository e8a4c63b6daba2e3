#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

namespace hr::pet {

// Exponent vector over (n, h1, h2, ...); trailing zeros are trimmed so vectors
// of different lengths name the same monomial.
using Exponents = std::vector<int>;

// Integer polynomial in n and the parameters h1..hr.  Zero coefficients are never stored.
class Poly {
 public:
  Poly() = default;
  static Poly constant(const mpz_class& c);
  static Poly n();
  static Poly h(int j);  // j >= 1
  static Poly monomial(Exponents e, const mpz_class& c);

  const std::map<Exponents, mpz_class>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // Degree in n; -1 for the zero polynomial.
  int degree() const;
  // Coefficient of n^i as a polynomial in h.
  Poly coeff(int i) const;
  Poly leading() const { return coeff(degree()); }
  // Largest parameter index present.
  int max_param() const;

  Poly shift(int j) const;                  // n -> n + h_j
  Poly shift(const Poly& by) const;         // n -> n + by, by free of n
  Poly substitute(int var, const Poly& v) const;
  mpz_class eval(const std::vector<mpz_class>& point) const;  // point[0] = n, point[j] = h_j

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const mpz_class& c, const Poly& a);
  Poly pow(unsigned e) const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
  // Canonical order: fewer terms first, then the coefficient maps lexicographically.
  friend bool canonical_less(const Poly& a, const Poly& b);

  // Human-readable form with n first by descending degree, e.g. "n^2 + 2*h1*n + h1^2".
  std::string to_string() const;

 private:
  void add_term(Exponents e, const mpz_class& c);
  std::map<Exponents, mpz_class> terms_;
};

// Parse "n^2 + 2n", "(n+h1)^2 - n", "2(h1+h2)n".  Juxtaposition multiplies.
Poly parse_poly(const std::string& text);
// Comma separated list of polynomials.
std::vector<Poly> parse_poly_list(const std::string& text);

}  // namespace hr::pet
