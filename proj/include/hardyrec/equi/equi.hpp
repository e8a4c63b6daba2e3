#pragma once

#include <gmpxx.h>

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "hardyrec/core/expr.hpp"
#include "hardyrec/error.hpp"
#include "hardyrec/numeric/interval.hpp"

namespace hr::equi {

enum class IntervalCase { Case1, Case2 };
const char* to_string(IntervalCase c);

struct IntervalEntry {
  long m = 0;
  mpz_class k_m, l_m;   // l_m < k_m marks an empty interval
  bool condition_i = false;  // d m <= a^(k)(n) <= d m + eps at both endpoints

  bool empty() const { return l_m < k_m; }
  mpz_class length() const { return empty() ? mpz_class(0) : mpz_class(l_m - k_m + 1); }
};

struct IntervalSeq {
  IntervalCase kase = IntervalCase::Case2;
  HardyExpr a;
  int k = 1;
  mpq_class eps;
  long d_k = 1;
  mpq_class probe_delta{1, 8};
  std::vector<IntervalEntry> entries;  // consecutive m
  // Smallest m0 such that every entry with m >= m0 is non-empty and satisfies (i).
  long threshold_m = 0;

  const IntervalEntry& at(long m) const;
  // Last third of the recorded lengths all exceed the maximum of the first third.
  bool lengths_grow() const;
};

// Certified sign of g(n) - t.
int compare_at(const HardyExpr& g, const mpz_class& n, const mpq_class& t);

// Smallest n >= n0 with pred(n) true, pred monotone false-then-true on [n0, inf).
template <class Pred>
mpz_class first_true(const mpz_class& n0, Pred pred);

// Growth checks, the Case probe and the monotonicity threshold of a^(k), done
// once and shared by every m.
class IntervalBuilder {
 public:
  IntervalBuilder(const HardyExpr& a, int k);

  IntervalCase kase() const { return kase_; }
  const HardyExpr& a() const { return a_; }
  int k() const { return k_; }
  const HardyExpr& derivative() const { return g_; }  // a^(k)
  const mpz_class& start() const { return n0_; }       // a^(k) non-decreasing from here
  mpq_class probe_delta() const { return {1, 8}; }

  // I_m for d m <= a^(k) <= d m + eps.
  IntervalEntry entry(long m, const mpq_class& eps, long d_k) const;

 private:
  HardyExpr a_, g_;
  int k_ = 1;
  IntervalCase kase_ = IntervalCase::Case2;
  mpz_class n0_;
};

struct IntervalOptions {
  bool allow_empty = true;  // false: an empty I_m is an error naming m
  int jobs = 1;
};

// I_m for m in [m_lo, m_hi].  Case 1 iff a < x^{k + 1/8} by the growth comparator.
IntervalSeq build_intervals(const HardyExpr& a, int k, const mpq_class& eps, long d_k, long m_lo, long m_hi,
                            const IntervalOptions& opt = {});

struct Discrepancy {
  double value = 0;
  int grid = 0;  // 0 when exact
  bool exact() const { return grid == 0; }
};

// Star discrepancy: exact for one dimension, otherwise an upper estimate from a
// g^d grid of anchored boxes.  Rows are points of [0,1)^d, d <= 3.
Discrepancy discrepancy(const Eigen::MatrixXd& points, int grid = 64);
Discrepancy discrepancy(const std::vector<double>& points);

// (1/(l-k+1)) sum_{n=k}^{l} e(s f(n)), each phase certified to 1e-9.
std::complex<double> weyl_sum(const HardyExpr& f, const mpz_class& k, const mpz_class& l, long s, int jobs = 1);
// Unnormalized sum; the quantity van der Corput bounds.
std::complex<double> exp_sum(const HardyExpr& f, const mpz_class& k, const mpz_class& l, long s = 1, int jobs = 1);

struct VdcBoundInput {
  HardyExpr f;
  mpz_class k, l;
  double rho = 0;
  int sign = 0;  // sign of f'' on [k, l]
};

// Certifies the sign of f'' on [k, l] and a lower bound rho for |f''| there.
VdcBoundInput make_vdc_input(const HardyExpr& f, const mpz_class& k, const mpz_class& l);

// (|f'(l) - f'(k)| + 2)(4/sqrt(rho) + 3), rounded up.
double vdc_bound(const VdcBoundInput& in);

struct SmallFracThreshold {
  enum class Kind { InvLog, Power, Constant };
  Kind kind = Kind::InvLog;
  double theta = 0;  // Power: m^{-theta}; Constant: the value

  static SmallFracThreshold inv_log() { return {Kind::InvLog, 0}; }
  static SmallFracThreshold power(double theta) { return {Kind::Power, theta}; }
  static SmallFracThreshold constant(double c) { return {Kind::Constant, c}; }
  double operator()(long m) const;
};

// |{m <= M : ||m^k alpha|| <= e_m for some alpha in B, k in K}| / M.
double density_smallfrac(const std::vector<HardyExpr>& B, const std::vector<int>& K, const SmallFracThreshold& e,
                         long M, int jobs = 1);

struct TorusEquiVerdict {
  bool equidistributed = true;
  double discrepancy = 0;
  std::optional<long> k;
  double norm_k_alpha = 0;
  double witness_bound = 0;  // ||k alpha|| N^d
};

// (n^d alpha + q(n))_{n <= N} with q = q[0] + q[1] n + ..., deg q < d.
TorusEquiVerdict torus_equi_check(const HardyExpr& alpha, int d, const std::vector<mpq_class>& q, long N, double delta,
                                  double C = 2.0);

struct TestFunction {
  enum class Kind { Character, Box };
  Kind kind = Kind::Character;
  std::vector<long> l;                         // e(l . x)
  std::vector<std::pair<mpq_class, mpq_class>> box;  // product of [lo, hi)

  static TestFunction character(std::vector<long> l);
  static TestFunction box_of(std::vector<std::pair<mpq_class, mpq_class>> b);
  std::size_t dim() const { return kind == Kind::Character ? l.size() : box.size(); }
  std::complex<double> integral() const;
};

// Evaluates phi at the certified fractional parts of the components at n.
std::complex<double> eval_test_function(const TestFunction& phi, const std::vector<HardyExpr>& comps,
                                        const mpz_class& n);

// Mean over the non-empty I_m, m <= M, of (1/|I_m|) sum_{n in I_m} phi({a(n)}).
std::complex<double> cesaro_interval_average(const TestFunction& phi, const std::vector<HardyExpr>& comps,
                                             const IntervalSeq& seq, long M, int jobs = 1);

// Fractional parts of comps over the concatenated non-empty I_m, m <= M.
Eigen::MatrixXd interval_points(const std::vector<HardyExpr>& comps, const IntervalSeq& seq, long M, int jobs = 1);

// Certified fractional part of f(n) with radius below tol.
Interval certified_frac(const HardyExpr& f, const mpz_class& n, double tol);

template <class Pred>
mpz_class first_true(const mpz_class& n0, Pred pred) {
  if (pred(n0)) return n0;
  mpz_class lo = n0, step = 1, hi = n0 + 1;
  while (!pred(hi)) {
    lo = hi;
    step *= 2;
    hi = n0 + step;
    if (mpz_sizeinbase(hi.get_mpz_t(), 2) > 1024) throw OverflowError("search passed 2^1024");
  }
  while (hi - lo > 1) {
    mpz_class mid = (lo + hi) / 2;
    if (pred(mid)) hi = mid; else lo = mid;
  }
  return hi;
}

}  // namespace hr::equi
