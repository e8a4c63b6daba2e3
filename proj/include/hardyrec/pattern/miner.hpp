#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "hardyrec/core/expr.hpp"
#include "hardyrec/equi/equi.hpp"

namespace hr::pattern {

struct AnchorResult {
  long r = 1, m = 1;
  int k = 1;
  mpz_class n_anchor;
  mpq_class eps;               // requested
  double eps_achieved = 0;     // max_i {a^(i)(n)/i!}, rounded up
  std::vector<mpz_class> floors;  // [a^(i)(n)/i!], i = 0..k
  std::vector<double> fracs;      // upper ends of {a^(i)(n)/i!}
  equi::IntervalEntry interval;   // I_m searched
  mpz_class scanned;              // candidates examined or skipped
};

struct PatternCertificate {
  long r = 1, m = 1;
  int k = 1;
  std::vector<mpz_class> c;  // c_0..c_{k-1}
  long N = 0;
  long verified_through = 0;
  long predicted_N = 0;  // Taylor-remainder heuristic, reported only
  AnchorResult anchor;

  // r (m n^k + sum c_i n^i)
  mpz_class value(long n) const;
};

// Anchor search with the growth analysis done once.
class AnchorFinder {
 public:
  AnchorFinder(const HardyExpr& a, int k);

  int k() const { return builder_.k(); }
  const equi::IntervalBuilder& builder() const { return builder_; }
  // search_cap: candidates past k_m; default 16 times the width of I_m.
  AnchorResult find(long r, long m, const mpq_class& eps, std::optional<mpz_class> search_cap = {}) const;

 private:
  equi::IntervalBuilder builder_;
  std::vector<HardyExpr> scaled_;  // a^(i)/i!, i = 0..k+1
};

AnchorResult find_anchor(const HardyExpr& a, int k, long r, long m, const mpq_class& eps,
                         std::optional<mpz_class> search_cap = {});

// Checks all anchor conditions with fresh evaluations at the given extra precision.
bool anchor_holds(const HardyExpr& a, const AnchorResult& anchor, int min_bits);

PatternCertificate certify_pattern(const HardyExpr& a, int k, const AnchorResult& anchor, long N_try);

struct EpsSchedule {
  enum class Kind { InvCeilLog, Constant };
  Kind kind = Kind::InvCeilLog;
  mpq_class value{1, 4};

  static EpsSchedule inv_ceil_log() { return {}; }
  static EpsSchedule constant(const mpq_class& e) { return {Kind::Constant, e}; }
  mpq_class operator()(long m) const;  // 1/ceil(log(m + 2)) or the constant
};

struct MineEntry {
  long m = 0;
  mpq_class eps;
  std::optional<PatternCertificate> cert;
  std::string failure;
};

struct MineReport {
  int k = 0;
  long r = 1;
  std::vector<MineEntry> entries;  // ordered by m
  long first_third_max = 0, last_third_max = 0;
  bool trend_up = false;

  std::vector<PatternCertificate> certificates() const;
};

struct MineOptions {
  EpsSchedule eps;
  long N_try = 1000;
  int jobs = 1;
};

MineReport mine_patterns(const HardyExpr& a, long r, long m_lo, long m_hi, const MineOptions& opt = {});

// {c + m n : 1 <= n <= N}
struct ProgressionBlock {
  mpz_class c;
  long m = 1;
  long N = 0;

  bool contains(const mpz_class& v) const;
  friend bool operator==(const ProgressionBlock&, const ProgressionBlock&) = default;
};

struct RescaleResult {
  long r = 1;
  std::vector<ProgressionBlock> blocks;  // r (c + m n) lies in the source, sorted by m
  std::vector<std::string> skipped;      // source/divisor pairs with no valid k
};

RescaleResult rescale_progressions(const std::vector<ProgressionBlock>& source, long r);

}  // namespace hr::pattern
