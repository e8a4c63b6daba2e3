#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hardyrec/core/expr.hpp"

namespace hr::recur {

// Subset of the window [0, N) as a bitmap.
class FiniteSet {
 public:
  explicit FiniteSet(long N);

  static FiniteSet full(long N);
  static FiniteSet from_members(long N, const std::vector<long>& members);
  // {n : n = c mod q}
  static FiniteSet congruence(long N, long q, long c);
  // {n : {n alpha} in one of the closed intervals of B}
  static FiniteSet rotation(long N, const HardyExpr& alpha, const std::vector<std::pair<mpq_class, mpq_class>>& B);
  // Each n kept independently with probability 1 - drop.
  static FiniteSet random(long N, double drop, std::uint64_t seed);

  long window() const { return n_; }
  bool contains(long n) const {
    return n >= 0 && n < n_ && ((bits_[static_cast<std::size_t>(n) >> 6] >> (n & 63)) & 1u) != 0;
  }
  void insert(long n);
  void erase(long n);
  long count() const;
  double density() const { return static_cast<double>(count()) / static_cast<double>(n_); }
  // Bits n .. n+63, zero past the window.
  std::uint64_t word_at(long n) const;

 private:
  long n_;
  std::vector<std::uint64_t> bits_;
};

struct Witness {
  long m = 0, s = 0;
  friend bool operator==(const Witness&, const Witness&) = default;
};

struct RecurrenceReport {
  int l = 1;
  std::vector<Witness> witnesses;  // ascending s, then ascending m
  bool exhaustive = true;          // every witness listed, not only the first per s
  std::map<long, long> counts;     // all witnesses per s, always complete

  long steps_with_witness() const;
};

enum class WitnessMode { All, FirstPerS };

// Every (m, s) with s in S \ {0} and m, m+s, ..., m+l s in Lambda.
RecurrenceReport find_progressions(const FiniteSet& lambda, const std::vector<long>& S, int l,
                                   WitnessMode mode = WitnessMode::All, int jobs = 1);

// Membership re-check of every listed witness.
bool verify_witnesses(const FiniteSet& lambda, const RecurrenceReport& report);

struct ParityVerdict {
  long l = 0;
  mpz_class lo, hi;  // block [lo, hi)
  long value = 0;    // the expected [a(n)] = 2l + 1
  bool pass = true;
  std::optional<mpz_class> counterexample;
  mpz_class counter_floor;
};

// [a(n)] = 2l + 1 for every n in [2^{2l+1}, 2^{2l+2}); a defaults to log_2 x.
ParityVerdict parity_obstruction(long l, const std::optional<HardyExpr>& a = {});
// All blocks with 2^{2l+2} <= window.
std::vector<ParityVerdict> parity_blocks(long window, const std::optional<HardyExpr>& a = {});

// [s(n)] for n in [n_lo, n_hi], kept when 0 < value < limit, in order of n.
std::vector<long> floor_sequence(const HardyExpr& s, long n_lo, long n_hi, long limit);
// n! for n >= 1 below limit.
std::vector<long> factorial_sequence(long limit);

struct RotationReport {
  double lambda_density = 0;
  std::vector<long> steps;          // distinct tested s, ascending
  std::map<long, long> counts;      // witnesses per s
  long with_witness = 0;
  double fraction = 0;              // with_witness / steps.size()
  long total_witnesses = 0;
};

// Lambda = {n in [0, window) : {n alpha} in B}; scans l-step progressions for every s in steps.
RotationReport rotation_recurrence_test(const HardyExpr& alpha, const std::vector<std::pair<mpq_class, mpq_class>>& B,
                                        const std::vector<long>& steps, long window, int l = 1, int jobs = 1);

struct AppendixSchedule {
  HardyExpr n_m;  // start of the inner range as a function of x = m, floored
  HardyExpr N_m;  // length, floored, must tend to infinity
  static AppendixSchedule linear();  // n_m = N_m = m
};

struct AppendixReport {
  std::complex<double> value;                       // at M
  std::vector<std::pair<long, double>> trend;       // |average| at M/4, M/2, M
  bool decaying = false;                            // each magnitude <= the previous + 0.02
};

// (1/M) sum_m (1/N_m) sum_{n=n_m}^{n_m+N_m} phi({p(n)+m beta}) e([p(n)+m beta] t) with phi the
// indicator of the closed interval box.  The diophantine hypothesis on beta is the caller's;
// detectably rational data is rejected.
AppendixReport appendix_average(const HardyExpr& p, const HardyExpr& beta, const HardyExpr& t,
                                const std::pair<mpq_class, mpq_class>& box, const AppendixSchedule& schedule, long M,
                                int jobs = 1);

struct TheoremCOptions {
  long M = 300;
  HardyExpr N_m;             // interval length as a function of m; default m
  long samples = 2000;       // identity checks on pairs of J with m >= large_from
  long large_from = 0;       // default M / 2
  std::uint64_t seed = 1;
  mpz_class window;          // largest admissible n_m; default 2^256
  int jobs = 1;
};

struct TheoremCInterval {
  long m = 0;
  mpz_class n_m;
  long N_m = 0;
  double sup_dev = 0;  // max |b(n) - m beta| over the endpoints, rounded up
};

struct TheoremCReport {
  std::vector<TheoremCInterval> intervals;
  long S_size = 0, J_size = 0;
  double J_density = 0;
  double tolerance = 0;  // max sup_dev over m >= large_from
  long checked = 0, agreed = 0;
  double agreement = 0;
};

// a = c p + b with 1 < b < x: intervals I_m = [n_m, n_m + N_m] around b(n) = m beta, the density of
// J = {(m, n) : {c p(n) + m beta} in [1/2, 3/4]} in S_M, and [c p(n) + b(n)] = [c p(n) + m beta] on J.
TheoremCReport theoremC_experiment(const HardyExpr& c, const HardyExpr& p, const HardyExpr& b, const HardyExpr& beta,
                                   const TheoremCOptions& opt = {});

}  // namespace hr::recur
