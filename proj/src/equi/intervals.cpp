#include <algorithm>

#include "hardyrec/core/evaluate.hpp"
#include "hardyrec/core/growth.hpp"
#include "hardyrec/equi/equi.hpp"
#include "hardyrec/error.hpp"
#include "hardyrec/sequence/certified.hpp"
#include "hardyrec/util/parallel.hpp"

namespace hr::equi {

const char* to_string(IntervalCase c) { return c == IntervalCase::Case1 ? "Case1" : "Case2"; }

const IntervalEntry& IntervalSeq::at(long m) const {
  if (entries.empty() || m < entries.front().m || m > entries.back().m) {
    throw PreconditionError("no interval recorded for m = " + std::to_string(m));
  }
  return entries[static_cast<std::size_t>(m - entries.front().m)];
}

bool IntervalSeq::lengths_grow() const {
  const std::size_t third = entries.size() / 3;
  if (third == 0) return false;
  mpz_class first_max = 0;
  for (std::size_t i = 0; i < third; ++i) first_max = std::max(first_max, entries[i].length());
  for (std::size_t i = entries.size() - third; i < entries.size(); ++i) {
    if (entries[i].length() <= first_max) return false;
  }
  return true;
}

int compare_at(const HardyExpr& g, const mpz_class& n, const mpq_class& t) {
  const long nbits = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2));
  bool tried_exact = false;
  for (long p = std::max<long>(64, nbits + 32); p <= kPrecisionCap; p *= 2) {
    const auto prec = static_cast<mpfr_prec_t>(p);
    try {
      Interval d = eval_interval(g, Interval::from_z(n, prec), prec) - Interval::from_q(t, prec);
      if (d.positive()) return 1;
      if (d.negative()) return -1;
      if (d.lo().is_zero() && d.hi().is_zero()) return 0;
    } catch (const NeedsPrecision&) {
    }
    if (!tried_exact) {
      tried_exact = true;
      if (auto q = exact_value(g, mpq_class(n))) return *q > t ? 1 : (*q < t ? -1 : 0);
    }
  }
  throw PrecisionCapExceeded("comparison with " + t.get_str() + " at n = " + n.get_str());
}

namespace {

mpz_class ceil_three_quarter_power(const mpz_class& k) {
  mpz_class cube = k * k * k, r;
  const bool exact = mpz_root(r.get_mpz_t(), cube.get_mpz_t(), 4) != 0;
  return exact ? r : mpz_class(r + 1);
}

}  // namespace

IntervalBuilder::IntervalBuilder(const HardyExpr& a, int k) : a_(a), k_(k) {
  if (k < 0) throw PreconditionError("k must be non-negative");
  const GrowthInfo gi = growth_exponent(a);
  if (gi.classification != GrowthClass::StrictlyBetween || gi.k != k || gi.sign < 0) {
    throw PreconditionError("needs an eventually positive a with x^k < a < x^{k+1}, k = " + std::to_string(k));
  }
  Comparison probe;
  try {
    probe = compare_growth(a, power(var(), constant(mpq_class(k) + probe_delta())));
  } catch (const Inconclusive& e) {
    throw Inconclusive(std::string("dichotomy probe inconclusive: ") + e.what());
  }
  kase_ = probe.order == Order::Less ? IntervalCase::Case1 : IntervalCase::Case2;
  g_ = simplify(differentiate(a, k));
  const HardyExpr g1 = simplify(differentiate(a, k + 1));
  const SignInfo mono = eventual_sign(g1);
  if (mono.sign < 0) throw PreconditionError("a^(k) is eventually decreasing");
  n0_ = std::max({validity_threshold(g_), validity_threshold(g1), mono.threshold, mpz_class(1)});
}

IntervalEntry IntervalBuilder::entry(long m, const mpq_class& eps, long d_k) const {
  if (eps <= 0 || eps >= 1) throw PreconditionError("eps must lie in (0, 1)");
  if (d_k < 1) throw PreconditionError("d_k must be a positive integer");
  if (m < 1) throw PreconditionError("m must be positive");
  IntervalEntry e;
  e.m = m;
  const mpq_class lo_t = mpq_class(d_k) * m;
  const mpq_class hi_t = lo_t + eps;
  e.k_m = first_true(n0_, [&](const mpz_class& n) { return compare_at(g_, n, lo_t) >= 0; });
  if (kase_ == IntervalCase::Case1) {
    e.l_m = e.k_m + ceil_three_quarter_power(e.k_m);
  } else {
    e.l_m = first_true(e.k_m, [&](const mpz_class& n) { return compare_at(g_, n, hi_t) > 0; }) - 1;
  }
  if (!e.empty()) e.condition_i = compare_at(g_, e.k_m, lo_t) >= 0 && compare_at(g_, e.l_m, hi_t) <= 0;
  return e;
}

IntervalSeq build_intervals(const HardyExpr& a, int k, const mpq_class& eps, long d_k, long m_lo, long m_hi,
                            const IntervalOptions& opt) {
  if (eps <= 0 || eps >= 1) throw PreconditionError("eps must lie in (0, 1)");
  if (d_k < 1) throw PreconditionError("d_k must be a positive integer");
  if (m_lo < 1 || m_hi < m_lo) throw PreconditionError("m range must satisfy 1 <= m_lo <= m_hi");
  const IntervalBuilder builder(a, k);
  IntervalSeq seq;
  seq.a = a;
  seq.k = k;
  seq.eps = eps;
  seq.d_k = d_k;
  seq.kase = builder.kase();
  seq.probe_delta = builder.probe_delta();
  seq.entries.resize(static_cast<std::size_t>(m_hi - m_lo + 1));
  parallel_for(seq.entries.size(), opt.jobs,
               [&](std::size_t i) { seq.entries[i] = builder.entry(m_lo + static_cast<long>(i), eps, d_k); });

  seq.threshold_m = m_lo;
  for (const auto& e : seq.entries) {
    if (e.empty() && !opt.allow_empty) throw DomainError("empty interval I_m for m = " + std::to_string(e.m));
    if (e.empty() || !e.condition_i) seq.threshold_m = e.m + 1;
  }
  return seq;
}

}  // namespace hr::equi
