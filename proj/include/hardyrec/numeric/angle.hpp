#pragma once

#include <cstdint>
#include <complex>

#include "hardyrec/numeric/interval.hpp"

namespace hr {

using u128 = unsigned __int128;

// A point of R/Z stored as a Q0.128 fixed-point fraction.  Integer multiples
// wrap exactly mod 1, so frac(K*alpha) costs one 128-bit multiply and its error
// is K times the representation error of alpha.
class Angle {
 public:
  constexpr Angle() = default;
  constexpr explicit Angle(u128 raw) : raw_(raw) {}

  // Nearest fixed-point value to frac(x); x must be enclosed tightly (width < 2^-130).
  static Angle from_interval(const Interval& x);
  static Angle from_double(double x);

  constexpr u128 raw() const { return raw_; }
  double to_double() const;
  // Distance to the nearest integer.
  double dist() const;
  std::complex<double> character(long s = 1) const;

  friend constexpr Angle operator+(Angle a, Angle b) { return Angle(a.raw_ + b.raw_); }
  friend constexpr Angle operator-(Angle a, Angle b) { return Angle(a.raw_ - b.raw_); }
  friend constexpr Angle operator-(Angle a) { return Angle(u128(0) - a.raw_); }
  friend constexpr Angle operator*(Angle a, u128 k) { return Angle(a.raw_ * k); }
  friend constexpr Angle operator*(Angle a, std::int64_t k) {
    return k >= 0 ? Angle(a.raw_ * static_cast<u128>(k)) : -Angle(a.raw_ * static_cast<u128>(-k));
  }
  friend constexpr bool operator==(Angle a, Angle b) { return a.raw_ == b.raw_; }
  friend constexpr bool operator<(Angle a, Angle b) { return a.raw_ < b.raw_; }

 private:
  u128 raw_ = 0;
};

// 2^-128 expressed as a double; the representation step of Angle.
inline constexpr double kAngleUlp = 2.938735877055718770e-39;

}  // namespace hr
