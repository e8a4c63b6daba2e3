#pragma once

#include <gmpxx.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "hardyrec/error.hpp"
#include "hardyrec/numeric/angle.hpp"

namespace hr::nil {

// Arithmetic the nilmanifold code needs from a coordinate type: integer scaling
// and reduction mod 1.
template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double zero() { return 0.0; }
  static double scale(double x, const mpz_class& k) { return x * k.get_d(); }
  static double frac(double x) { return x - std::floor(x); }
  static double to_double(double x) { return x; }
};

template <>
struct ScalarTraits<mpq_class> {
  static mpq_class zero() { return 0; }
  static mpq_class scale(const mpq_class& x, const mpz_class& k) { return x * k; }
  static mpq_class frac(const mpq_class& x) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return x - f;
  }
  static double to_double(const mpq_class& x) { return x.get_d(); }
};

// Fixed-point angles are already reduced; scaling wraps mod 1 exactly.
template <>
struct ScalarTraits<Angle> {
  static Angle zero() { return Angle(); }
  static Angle scale(Angle x, const mpz_class& k) {
    mpz_class r;
    mpz_fdiv_r_2exp(r.get_mpz_t(), k.get_mpz_t(), 128);
    mpz_class hi, lo;
    mpz_fdiv_q_2exp(hi.get_mpz_t(), r.get_mpz_t(), 64);
    mpz_fdiv_r_2exp(lo.get_mpz_t(), r.get_mpz_t(), 64);
    const u128 m = (static_cast<u128>(mpz_get_ui(hi.get_mpz_t())) << 64) | mpz_get_ui(lo.get_mpz_t());
    return x * m;
  }
  static Angle frac(Angle x) { return x; }
  static double to_double(Angle x) { return x.to_double(); }
};

// (m, x1, x2) with (m, x1, x2)(n, y1, y2) = (m + n, x1 + y1, x2 + y2 + m y1).
template <class Scalar>
struct HeisenbergElement {
  using Traits = ScalarTraits<Scalar>;
  long long m = 0;
  Scalar x1 = Traits::zero();
  Scalar x2 = Traits::zero();

  static HeisenbergElement identity() { return {}; }
  friend bool operator==(const HeisenbergElement& a, const HeisenbergElement& b) {
    return a.m == b.m && a.x1 == b.x1 && a.x2 == b.x2;
  }
};

template <class Scalar>
HeisenbergElement<Scalar> heisenberg_mul(const HeisenbergElement<Scalar>& g, const HeisenbergElement<Scalar>& h) {
  using T = ScalarTraits<Scalar>;
  return {g.m + h.m, g.x1 + h.x1, g.x2 + h.x2 + T::scale(h.x1, mpz_class(static_cast<long>(g.m)))};
}

template <class Scalar>
HeisenbergElement<Scalar> heisenberg_inverse(const HeisenbergElement<Scalar>& g) {
  using T = ScalarTraits<Scalar>;
  return {-g.m, -g.x1, -g.x2 + T::scale(g.x1, mpz_class(static_cast<long>(g.m)))};
}

// Closed form a^n = (n m, n x1, n x2 + m x1 n(n-1)/2), valid for every integer n.
template <class Scalar>
HeisenbergElement<Scalar> nil_power(const HeisenbergElement<Scalar>& a, const mpz_class& n) {
  using T = ScalarTraits<Scalar>;
  const mpz_class am(static_cast<long>(a.m));
  const mpz_class m = n * am;
  if (!m.fits_slong_p()) throw OverflowError("nil_power: integer coordinate overflows");
  const mpz_class tri = n * (n - 1) / 2;
  return {m.get_si(), T::scale(a.x1, n), T::scale(a.x2, n) + T::scale(a.x1, mpz_class(tri * am))};
}

template <class Scalar>
HeisenbergElement<Scalar> nil_power(const HeisenbergElement<Scalar>& a, long long n) {
  return nil_power(a, mpz_class(static_cast<long>(n)));
}

// Coset representative with x1, x2 reduced mod 1.
template <class Scalar>
HeisenbergElement<Scalar> reduce(const HeisenbergElement<Scalar>& g) {
  using T = ScalarTraits<Scalar>;
  return {g.m, T::frac(g.x1), T::frac(g.x2)};
}

// x -> L x + b on a torus, L unipotent with integer entries.
template <class Scalar>
struct AffineMap {
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> linear;
  std::vector<Scalar> translation;

  int dim() const { return static_cast<int>(linear.rows()); }
  bool unipotent() const {
    const auto n = linear.rows();
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> N =
        linear - Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n);
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> P = N;
    for (Eigen::Index i = 1; i < n; ++i) P = P * N;
    return P.isZero();
  }
  std::vector<Scalar> apply(const std::vector<Scalar>& x) const {
    using T = ScalarTraits<Scalar>;
    std::vector<Scalar> y(translation);
    for (int i = 0; i < dim(); ++i) {
      for (int k = 0; k < dim(); ++k) {
        if (linear(i, k) != 0) y[i] = y[i] + T::scale(x[k], mpz_class(static_cast<long>(linear(i, k))));
      }
      y[i] = T::frac(y[i]);
    }
    return y;
  }
};

// S(t1, t2) = (t1 + x1, t2 + m t1 + x2).
template <class Scalar>
AffineMap<Scalar> to_affine(const HeisenbergElement<Scalar>& a) {
  AffineMap<Scalar> S;
  S.linear.resize(2, 2);
  S.linear << 1, 0, a.m, 1;
  S.translation = {a.x1, a.x2};
  return S;
}

// S^j(x0) = sum_r C(j, r) N^r x0 + C(j, r+1) N^r b with N = L - I nilpotent.
template <class Scalar>
std::vector<std::vector<Scalar>> affine_orbit(const AffineMap<Scalar>& S, const std::vector<Scalar>& x0,
                                              const std::vector<long long>& indices) {
  using T = ScalarTraits<Scalar>;
  using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
  const int d = S.dim();
  if (static_cast<int>(x0.size()) != d || static_cast<int>(S.translation.size()) != d) {
    throw PreconditionError("affine_orbit: dimension mismatch");
  }
  if (!S.unipotent()) throw PreconditionError("affine_orbit: linear part is not unipotent");
  std::vector<IMat> Np{IMat::Identity(d, d)};
  const IMat N = S.linear - IMat::Identity(d, d);
  for (int r = 1; r < d; ++r) Np.push_back(Np.back() * N);

  std::vector<std::vector<Scalar>> out;
  out.reserve(indices.size());
  for (long long j : indices) {
    if (j < 0) throw PreconditionError("affine_orbit: negative index");
    std::vector<Scalar> y(static_cast<std::size_t>(d), T::zero());
    for (int r = 0; r < d; ++r) {
      mpz_class c0, c1;
      mpz_bin_uiui(c0.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(r));
      mpz_bin_uiui(c1.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(r + 1));
      if (c0 == 0 && c1 == 0) break;
      for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) {
          const long long e = Np[static_cast<std::size_t>(r)](i, k);
          if (e == 0) continue;
          const mpz_class ez(static_cast<long>(e));
          y[i] = y[i] + T::scale(x0[k], c0 * ez) + T::scale(S.translation[k], c1 * ez);
        }
      }
    }
    for (auto& v : y) v = T::frac(v);
    out.push_back(std::move(y));
  }
  return out;
}

// j-fold iteration; the oracle for the closed form.
template <class Scalar>
std::vector<Scalar> affine_iterate(const AffineMap<Scalar>& S, std::vector<Scalar> x, long long j) {
  for (long long i = 0; i < j; ++i) x = S.apply(x);
  return x;
}

// Error radius of a closed-form Angle orbit point at index j when every input
// coordinate carries at most half an ulp of representation error.
double affine_orbit_radius(const AffineMap<Angle>& S, long long j);

// Functions on the 2-torus with exactly known integrals.
struct TorusFunction {
  enum class Kind { Character, Box, TrigPoly };
  struct Mode {
    std::complex<double> c;
    long p = 0, q = 0;
  };
  Kind kind = Kind::Character;
  std::vector<Mode> modes;       // Character: one mode with c = 1
  double a1 = 0, b1 = 1, a2 = 0, b2 = 1;  // Box [a1, b1) x [a2, b2)

  static TorusFunction character(long p, long q);
  static TorusFunction box(double a1, double b1, double a2, double b2);
  static TorusFunction trig(std::vector<Mode> modes);

  std::complex<double> operator()(Angle t1, Angle t2) const;
  std::complex<double> integral() const;
};

struct ScheduleEntry {
  long long N = 0;
  std::vector<long long> q;  // q_m(n) = q[0] + q[1] n + ...
};

// N_m = m and seeded offsets c_m in [0, c_max) of degree 0, or degree <= k-1 when k > 1.
std::vector<ScheduleEntry> random_schedule(int M, int k, std::uint64_t seed, long long c_max = 1000000);

struct NilAverage {
  std::complex<double> average;
  std::complex<double> integral;
  double gap = 0;
  std::vector<std::complex<double>> running;  // average over the first m blocks
};

// (1/M) sum_m (1/N_m) sum_{n <= N_m} F(a^{m n^k + q_m(n)} Gamma) in the affine chart.
NilAverage nil_cesaro_average(const TorusFunction& F, const HeisenbergElement<Angle>& a,
                              const std::vector<ScheduleEntry>& schedule, int k, int jobs = 1);

}  // namespace hr::nil
