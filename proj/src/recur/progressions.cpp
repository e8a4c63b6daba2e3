#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "hardyrec/core/evaluate.hpp"
#include "hardyrec/error.hpp"
#include "hardyrec/numeric/angle.hpp"
#include "hardyrec/recur/recur.hpp"
#include "hardyrec/sequence/certified.hpp"
#include "hardyrec/util/parallel.hpp"
#include "detail.hpp"

namespace hr::recur {

FiniteSet::FiniteSet(long N) : n_(N) {
  if (N < 1) throw PreconditionError("window must be at least 1");
  bits_.assign(static_cast<std::size_t>((N + 63) / 64) + 1, 0);
}

FiniteSet FiniteSet::full(long N) {
  FiniteSet s(N);
  for (long n = 0; n < N; ++n) s.insert(n);
  return s;
}

FiniteSet FiniteSet::from_members(long N, const std::vector<long>& members) {
  FiniteSet s(N);
  for (long n : members) {
    if (n >= 0 && n < N) s.insert(n);
  }
  return s;
}

FiniteSet FiniteSet::congruence(long N, long q, long c) {
  if (q < 1) throw PreconditionError("modulus must be positive");
  FiniteSet s(N);
  const long c0 = ((c % q) + q) % q;
  for (long n = c0; n < N; n += q) s.insert(n);
  return s;
}

FiniteSet FiniteSet::rotation(long N, const HardyExpr& alpha, const std::vector<std::pair<mpq_class, mpq_class>>& B) {
  detail::check_target(B);
  if (!alpha.is_constant_expr()) throw PreconditionError("rotation angle must be a constant");
  if (exact_value(alpha, 0)) throw PreconditionError("rotation angle must be irrational");
  const Angle a = Angle::from_interval(eval_interval(alpha, Interval::from_si(1, 256), 256));
  const HardyExpr f = simplify(product({alpha, var()}));
  std::vector<double> lo, hi;
  for (const auto& [l, h] : B) {
    lo.push_back(l.get_d());
    hi.push_back(h.get_d());
  }
  FiniteSet s(N);
  for (long n = 0; n < N; ++n) {
    const double x = (a * static_cast<std::int64_t>(n)).to_double();
    // Angle error is n 2^-128; a margin of 1e-9 leaves double rounding far behind.
    bool near = x < 1e-9 || x > 1 - 1e-9;
    bool in = false;
    for (std::size_t i = 0; i < B.size(); ++i) {
      if (std::abs(x - lo[i]) < 1e-9 || std::abs(x - hi[i]) < 1e-9) near = true;
      if (x >= lo[i] && x <= hi[i]) in = true;
    }
    if (n == 0) {
      in = std::any_of(B.begin(), B.end(), [](const auto& b) { return b.first == 0; });
    } else if (near) {
      in = std::any_of(B.begin(), B.end(),
                       [&](const auto& b) { return detail::frac_in(f, mpz_class(n), b.first, b.second); });
    }
    if (in) s.insert(n);
  }
  return s;
}

FiniteSet FiniteSet::random(long N, double drop, std::uint64_t seed) {
  if (!(drop >= 0 && drop <= 1)) throw PreconditionError("drop probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FiniteSet s(N);
  for (long n = 0; n < N; ++n) {
    if (u(rng) >= drop) s.insert(n);
  }
  return s;
}

void FiniteSet::insert(long n) {
  if (n < 0 || n >= n_) throw PreconditionError("element " + std::to_string(n) + " outside the window");
  bits_[static_cast<std::size_t>(n) >> 6] |= std::uint64_t{1} << (n & 63);
}

void FiniteSet::erase(long n) {
  if (n < 0 || n >= n_) return;
  bits_[static_cast<std::size_t>(n) >> 6] &= ~(std::uint64_t{1} << (n & 63));
}

long FiniteSet::count() const {
  long c = 0;
  for (auto w : bits_) c += std::popcount(w);
  return c;
}

std::uint64_t FiniteSet::word_at(long n) const {
  if (n < 0 || n >= n_) return 0;
  const auto idx = static_cast<std::size_t>(n) >> 6;
  const int off = static_cast<int>(n & 63);
  std::uint64_t w = bits_[idx] >> off;
  if (off != 0 && idx + 1 < bits_.size()) w |= bits_[idx + 1] << (64 - off);
  return w;
}

long RecurrenceReport::steps_with_witness() const {
  return std::count_if(counts.begin(), counts.end(), [](const auto& kv) { return kv.second > 0; });
}

namespace {

struct StepScan {
  long count = 0;
  std::vector<long> starts;
};

// Starts m >= 0 of m, m+d, ..., m+l d inside lambda, for d > 0.
StepScan scan_step(const FiniteSet& lambda, long d, int l, bool first_only) {
  StepScan out;
  const long last = lambda.window() - 1 - static_cast<long>(l) * d;  // largest admissible start
  for (long w = 0; w <= last; w += 64) {
    std::uint64_t word = lambda.word_at(w);
    for (int j = 1; j <= l && word != 0; ++j) word &= lambda.word_at(w + j * d);
    if (last - w < 63) word &= (std::uint64_t{1} << (last - w + 1)) - 1;
    if (word == 0) continue;
    out.count += std::popcount(word);
    while (word != 0) {
      if (first_only && !out.starts.empty()) break;
      out.starts.push_back(w + std::countr_zero(word));
      word &= word - 1;
    }
  }
  return out;
}

}  // namespace

RecurrenceReport find_progressions(const FiniteSet& lambda, const std::vector<long>& S, int l, WitnessMode mode,
                                   int jobs) {
  if (l < 1) throw PreconditionError("progression length l must be at least 1");
  std::vector<long> steps;
  for (long s : S) {
    if (s != 0) steps.push_back(s);
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());

  const bool first_only = mode == WitnessMode::FirstPerS;
  std::vector<StepScan> scans(steps.size());
  parallel_for(steps.size(), jobs, [&](std::size_t i) {
    const long s = steps[i];
    const long d = s > 0 ? s : -s;
    if (static_cast<double>(l) * static_cast<double>(d) >= static_cast<double>(lambda.window())) return;
    scans[i] = scan_step(lambda, d, l, first_only);
    // For s < 0 the progression from m descends to m' = m + l s.
    if (s < 0) {
      for (auto& m : scans[i].starts) m += static_cast<long>(l) * d;
    }
  });

  RecurrenceReport rep;
  rep.l = l;
  rep.exhaustive = !first_only;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    rep.counts[steps[i]] = scans[i].count;
    for (long m : scans[i].starts) rep.witnesses.push_back({m, steps[i]});
  }
  return rep;
}

bool verify_witnesses(const FiniteSet& lambda, const RecurrenceReport& report) {
  for (const auto& w : report.witnesses) {
    if (w.s == 0) return false;
    for (int j = 0; j <= report.l; ++j) {
      if (!lambda.contains(w.m + j * w.s)) return false;
    }
  }
  return true;
}

ParityVerdict parity_obstruction(long l, const std::optional<HardyExpr>& a) {
  if (l < 0) throw PreconditionError("block index must be non-negative");
  if (l > 20) throw PreconditionError("block 2^" + std::to_string(2 * l + 1) + " is beyond the scan limit l <= 20");
  const HardyExpr f = a ? *a : parse("log(x)/log(2)");
  ParityVerdict v;
  v.l = l;
  v.lo = mpz_class(1) << (2 * l + 1);
  v.hi = mpz_class(1) << (2 * l + 2);
  v.value = 2 * l + 1;
  for (mpz_class n = v.lo; n < v.hi; ++n) {
    const FloorResult r = floor_eval(f, n);
    if (r.floor != v.value) {
      v.pass = false;
      v.counterexample = n;
      v.counter_floor = r.floor;
      break;
    }
  }
  return v;
}

std::vector<ParityVerdict> parity_blocks(long window, const std::optional<HardyExpr>& a) {
  std::vector<ParityVerdict> out;
  for (long l = 0; (mpz_class(1) << (2 * l + 2)) <= window; ++l) out.push_back(parity_obstruction(l, a));
  return out;
}

std::vector<long> floor_sequence(const HardyExpr& s, long n_lo, long n_hi, long limit) {
  if (n_hi < n_lo) throw PreconditionError("empty index range");
  std::vector<long> out;
  for (long n = n_lo; n <= n_hi; ++n) {
    const FloorResult r = floor_eval(s, mpz_class(n));
    if (r.floor > 0 && r.floor < limit) out.push_back(r.floor.get_si());
  }
  return out;
}

std::vector<long> factorial_sequence(long limit) {
  std::vector<long> out;
  long f = 1;
  for (long n = 1; f < limit; ++n) {
    out.push_back(f);
    if (f > limit / (n + 1)) break;
    f *= n + 1;
  }
  return out;
}

RotationReport rotation_recurrence_test(const HardyExpr& alpha, const std::vector<std::pair<mpq_class, mpq_class>>& B,
                                        const std::vector<long>& steps, long window, int l, int jobs) {
  const FiniteSet lambda = FiniteSet::rotation(window, alpha, B);
  const RecurrenceReport rep = find_progressions(lambda, steps, l, WitnessMode::FirstPerS, jobs);
  RotationReport out;
  out.lambda_density = lambda.density();
  for (const auto& [s, c] : rep.counts) {
    out.steps.push_back(s);
    out.total_witnesses += c;
  }
  out.counts = rep.counts;
  out.with_witness = rep.steps_with_witness();
  out.fraction = out.steps.empty() ? 0.0 : static_cast<double>(out.with_witness) / static_cast<double>(out.steps.size());
  return out;
}

}  // namespace hr::recur
