#include "hardyrec/numeric/angle.hpp"

#include <cmath>

#include "hardyrec/error.hpp"

namespace hr {

Angle Angle::from_interval(const Interval& x) {
  const mpfr_prec_t p = std::max<mpfr_prec_t>(x.prec(), 256);
  BigFloat m = x.mid();
  BigFloat f(p);
  mpfr_frac(f.get(), m.get(), MPFR_RNDN);
  if (f.sign() < 0) mpfr_add_ui(f.get(), f.get(), 1, MPFR_RNDN);
  mpfr_mul_2ui(f.get(), f.get(), 128, MPFR_RNDN);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), f.get(), MPFR_RNDN);
  mpz_class mod = mpz_class(1) << 128;
  z %= mod;
  if (z < 0) z += mod;
  mpz_class lo_part = z & mpz_class("18446744073709551615");
  mpz_class hi_part = z >> 64;
  u128 raw = (static_cast<u128>(hi_part.get_ui()) << 64) | static_cast<u128>(lo_part.get_ui());
  return Angle(raw);
}

Angle Angle::from_double(double x) {
  double f = x - std::floor(x);
  // Split into two 64-bit halves; doubles carry only 53 bits so the low half is small.
  double hi = std::ldexp(f, 64);
  double hi_int = std::floor(hi);
  double lo = std::ldexp(hi - hi_int, 64);
  u128 raw = (static_cast<u128>(static_cast<std::uint64_t>(hi_int)) << 64) |
             static_cast<u128>(static_cast<std::uint64_t>(std::floor(lo)));
  return Angle(raw);
}

double Angle::to_double() const {
  const auto hi = static_cast<std::uint64_t>(raw_ >> 64);
  const auto lo = static_cast<std::uint64_t>(raw_);
  const double v = std::ldexp(static_cast<double>(hi), -64) + std::ldexp(static_cast<double>(lo), -128);
  // Rounding can push values just below 1 up to 1.0; keep the result in [0, 1).
  return v < 1.0 ? v : std::nextafter(1.0, 0.0);
}

double Angle::dist() const {
  const u128 neg = u128(0) - raw_;
  return Angle(raw_ < neg ? raw_ : neg).to_double();
}

std::complex<double> Angle::character(long s) const {
  const double t = (*this * static_cast<std::int64_t>(s)).to_double();
  const double ang = 2.0 * M_PI * t;
  return {std::cos(ang), std::sin(ang)};
}

}  // namespace hr
