#include "hardyrec/pattern/miner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "hardyrec/core/growth.hpp"
#include "hardyrec/error.hpp"
#include "hardyrec/sequence/certified.hpp"
#include "hardyrec/util/parallel.hpp"

namespace hr::pattern {

namespace {

constexpr long kScanBudget = 1'000'000;

mpz_class factorial(int k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
  return f;
}

bool frac_at_most(const CertifiedReal& fr, const mpq_class& eps) {
  const Interval e = Interval::from_q(eps, fr.enclosure().prec() + 64);
  return cmp(fr.enclosure().hi(), e.lo()) <= 0;
}

struct Check {
  bool ok = false;
  std::vector<mpz_class> floors;
  std::vector<double> fracs;
};

Check check_anchor(const std::vector<HardyExpr>& scaled, int k, long r, long m, const mpq_class& eps,
                   const mpz_class& n, int min_bits) {
  Check out;
  out.floors.resize(static_cast<std::size_t>(k + 1));
  out.fracs.resize(static_cast<std::size_t>(k + 1));
  // Lowest order first: it is the condition that fails most often.
  for (int i = 0; i <= k; ++i) {
    const FloorResult fr = floor_eval(scaled[static_cast<std::size_t>(i)], n, min_bits);
    if (!frac_at_most(fr.frac, eps)) return out;
    if (i == k ? fr.floor != r * m : mpz_class(fr.floor % r) != 0) return out;
    out.floors[static_cast<std::size_t>(i)] = fr.floor;
    out.fracs[static_cast<std::size_t>(i)] = fr.frac.enclosure().hi().to_double(MPFR_RNDU);
  }
  out.ok = true;
  return out;
}

std::vector<HardyExpr> scaled_derivatives(const HardyExpr& a, int upto) {
  std::vector<HardyExpr> out;
  for (int i = 0; i <= upto; ++i) {
    out.push_back(simplify(quotient(differentiate(a, i), constant(mpq_class(factorial(i))))));
  }
  return out;
}

}  // namespace

mpz_class PatternCertificate::value(long n) const {
  mpz_class v = 0, pw = 1;
  for (int i = 0; i < k; ++i) {
    v += c[static_cast<std::size_t>(i)] * pw;
    pw *= n;
  }
  return r * (v + m * pw);
}

AnchorFinder::AnchorFinder(const HardyExpr& a, int k) : builder_(a, k) {
  if (k < 1) throw PreconditionError("anchor search needs k >= 1");
  scaled_ = scaled_derivatives(a, k + 1);
}

AnchorResult AnchorFinder::find(long r, long m, const mpq_class& eps, std::optional<mpz_class> search_cap) const {
  if (r < 1 || m < 1) throw PreconditionError("r and m must be positive");
  if (eps <= 0 || eps >= 1) throw PreconditionError("eps must lie in (0, 1)");
  const int k = builder_.k();
  const mpz_class kf = factorial(k);
  const HardyExpr& g = builder_.derivative();

  AnchorResult res;
  res.r = r;
  res.m = m;
  res.k = k;
  res.eps = eps;
  res.interval = builder_.entry(m, eps / r, r * kf.get_si());
  const mpz_class start = res.interval.k_m;
  const mpz_class width = builder_.kase() == equi::IntervalCase::Case1
                              ? mpz_class(res.interval.l_m - start + 1)
                              : std::max(res.interval.length(), mpz_class(1));
  const mpz_class cap = search_cap ? *search_cap : mpz_class(16 * width);
  if (cap < 1) throw PreconditionError("search cap must be positive");
  // Beyond this point [a^(k)/k!] = r m with fractional part <= eps fails.
  const mpq_class top = mpq_class(kf) * (mpq_class(r * m) + eps);
  const mpz_class region_end =
      equi::first_true(start, [&](const mpz_class& n) { return equi::compare_at(g, n, top) > 0; }) - 1;
  const mpz_class last = std::min(region_end, mpz_class(start + cap - 1));
  auto not_found = [&](const std::string& why) {
    return NotFound("no anchor for r = " + std::to_string(r) + ", m = " + std::to_string(m) + " in [" +
                    start.get_str() + ", " + last.get_str() + "]: " + why);
  };
  auto accept = [&](const mpz_class& n, Check&& c) {
    res.n_anchor = n;
    res.floors = std::move(c.floors);
    res.fracs = std::move(c.fracs);
    res.eps_achieved = *std::max_element(res.fracs.begin(), res.fracs.end());
    res.scanned = n - start + 1;
    return res;
  };

  if (k == 1) {
    // On the region a' lies in [r m, r m + eps], so u(n) = a(n)/r - m n is
    // non-decreasing with steps at most eps/r.  The first n >= s with
    // {u(n)} <= eps/r is the first n with u(n) >= ceil(u(s)).
    const HardyExpr u = simplify(sum({quotient(builder_.a(), constant(r)), product({constant(-m), var()})}));
    mpz_class s = start;
    for (int round = 0; round < 64 && s <= last; ++round) {
      Check c = check_anchor(scaled_, k, r, m, eps, s, 0);
      if (c.ok) return accept(s, std::move(c));
      const FloorResult fu = floor_eval(u, s);
      const mpz_class target = fu.floor + 1;
      const mpz_class n = equi::first_true(
          s + 1, [&](const mpz_class& x) { return equi::compare_at(u, x, mpq_class(target)) >= 0; });
      if (n > last) break;
      c = check_anchor(scaled_, k, r, m, eps, n, 0);
      if (c.ok) return accept(n, std::move(c));
      s = n + 1;
    }
    throw not_found("the fractional part of a(n)/r never returns below eps/r");
  }

  long examined = 0;
  for (mpz_class n = start; n <= last; ++n) {
    if (++examined > kScanBudget) throw not_found("scan budget of 1e6 candidates exhausted");
    Check c = check_anchor(scaled_, k, r, m, eps, n, 0);
    if (c.ok) return accept(n, std::move(c));
  }
  throw not_found("no candidate meets all conditions");
}

AnchorResult find_anchor(const HardyExpr& a, int k, long r, long m, const mpq_class& eps,
                         std::optional<mpz_class> search_cap) {
  return AnchorFinder(a, k).find(r, m, eps, std::move(search_cap));
}

bool anchor_holds(const HardyExpr& a, const AnchorResult& anchor, int min_bits) {
  const auto scaled = scaled_derivatives(a, anchor.k);
  const Check c = check_anchor(scaled, anchor.k, anchor.r, anchor.m, anchor.eps, anchor.n_anchor, min_bits);
  return c.ok && c.floors == anchor.floors;
}

PatternCertificate certify_pattern(const HardyExpr& a, int k, const AnchorResult& anchor, long N_try) {
  if (N_try < 1) throw PreconditionError("N_try must be positive: an empty verification certifies nothing");
  if (anchor.k != k || static_cast<int>(anchor.floors.size()) != k + 1) {
    throw PreconditionError("anchor does not match k");
  }
  const long r = anchor.r, m = anchor.m;
  if (anchor.floors[static_cast<std::size_t>(k)] != r * m) throw PreconditionError("anchor top floor differs from r m");
  PatternCertificate cert;
  cert.r = r;
  cert.m = m;
  cert.k = k;
  cert.anchor = anchor;
  for (int i = 0; i < k; ++i) {
    const mpz_class& F = anchor.floors[static_cast<std::size_t>(i)];
    if (mpz_class(F % r) != 0) throw PreconditionError("anchor floor not divisible by r");
    cert.c.push_back(F / r);
  }

  // Fractional-sum heuristic: sum_i n^i {a^(i)/i!} + n^{k+1} a^(k+1)(n0)/(k+1)! <= 1/2.
  const auto scaled = scaled_derivatives(a, k + 1);
  const double D = std::abs(eval_at(scaled.back(), anchor.n_anchor).to_double());
  for (long n = 1; n <= N_try; ++n) {
    double s = 0, pw = 1;
    for (int i = 0; i <= k; ++i) {
      s += pw * anchor.fracs[static_cast<std::size_t>(i)];
      pw *= static_cast<double>(n);
    }
    if (s + pw * D > 0.5) break;
    cert.predicted_N = n;
  }

  long N = 0;
  for (long n = 1; n <= N_try; ++n) {
    if (floor_eval(a, anchor.n_anchor + n).floor != cert.value(n)) break;
    N = n;
  }
  if (N == 0) throw DomainError("pattern fails at n = 1: anchor unusable");
  cert.N = N;
  cert.verified_through = N;
  return cert;
}

mpq_class EpsSchedule::operator()(long m) const {
  if (kind == Kind::Constant) return value;
  return mpq_class(1, static_cast<unsigned long>(std::ceil(std::log(static_cast<double>(m) + 2.0))));
}

std::vector<PatternCertificate> MineReport::certificates() const {
  std::vector<PatternCertificate> out;
  for (const auto& e : entries) {
    if (e.cert) out.push_back(*e.cert);
  }
  return out;
}

namespace {

// k = 0: a increases slowly through every large integer, so r m is hit by a
// run of consecutive n.
PatternCertificate constant_pattern(const HardyExpr& a, const mpz_class& n0, long r, long m, long N_try) {
  const mpz_class v = r * m;
  const mpz_class n1 = equi::first_true(n0, [&](const mpz_class& n) { return equi::compare_at(a, n, mpq_class(v)) >= 0; });
  const mpz_class n2 =
      equi::first_true(n1, [&](const mpz_class& n) { return equi::compare_at(a, n, mpq_class(v + 1)) >= 0; });
  PatternCertificate cert;
  cert.r = r;
  cert.m = m;
  cert.k = 0;
  cert.anchor.r = r;
  cert.anchor.m = m;
  cert.anchor.k = 0;
  cert.anchor.n_anchor = n1 - 1;
  cert.anchor.floors = {v};
  long N = 0;
  const mpz_class run = n2 - n1;
  const long want = run < N_try ? run.get_si() : N_try;
  for (long n = 1; n <= want; ++n) {
    if (floor_eval(a, cert.anchor.n_anchor + n).floor != v) break;
    N = n;
  }
  if (N == 0) throw NotFound("value " + v.get_str() + " is skipped by [a(n)]");
  cert.N = cert.verified_through = cert.predicted_N = N;
  return cert;
}

}  // namespace

MineReport mine_patterns(const HardyExpr& a, long r, long m_lo, long m_hi, const MineOptions& opt) {
  if (r < 1) throw PreconditionError("r must be positive");
  if (m_lo < 1) throw PreconditionError("m must be positive");
  const GrowthInfo gi = growth_exponent(a);
  if (gi.classification != GrowthClass::StrictlyBetween || gi.sign < 0) {
    throw PreconditionError("mining needs an eventually positive a strictly between consecutive powers");
  }
  MineReport rep;
  rep.k = gi.k;
  rep.r = r;
  if (m_hi < m_lo) return rep;
  rep.entries.resize(static_cast<std::size_t>(m_hi - m_lo + 1));

  std::optional<AnchorFinder> finder;
  mpz_class n0 = 1;
  if (rep.k >= 1) {
    finder.emplace(a, rep.k);
  } else {
    const HardyExpr d1 = simplify(differentiate(a, 1));
    n0 = std::max({validity_threshold(a), validity_threshold(d1), eventual_sign(d1).threshold});
  }

  parallel_for(rep.entries.size(), opt.jobs, [&](std::size_t i) {
    MineEntry& e = rep.entries[i];
    e.m = m_lo + static_cast<long>(i);
    e.eps = opt.eps(e.m);
    try {
      if (rep.k == 0) {
        e.cert = constant_pattern(a, n0, r, e.m, opt.N_try);
      } else {
        const AnchorResult anchor = finder->find(r, e.m, e.eps);
        e.cert = certify_pattern(a, rep.k, anchor, opt.N_try);
      }
    } catch (const NotFound& err) {
      e.failure = err.what();
    } catch (const DomainError& err) {
      e.failure = err.what();
    }
  });

  const std::size_t third = rep.entries.size() / 3;
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const long N = rep.entries[i].cert ? rep.entries[i].cert->N : 0;
    if (i < third) rep.first_third_max = std::max(rep.first_third_max, N);
    if (i >= rep.entries.size() - third) rep.last_third_max = std::max(rep.last_third_max, N);
  }
  rep.trend_up = third > 0 && rep.last_third_max > rep.first_third_max;
  return rep;
}

bool ProgressionBlock::contains(const mpz_class& v) const {
  if (m < 1) return false;
  const mpz_class d = v - c;
  if (mpz_class(d % m) != 0) return false;
  const mpz_class n = d / m;
  return n >= 1 && n <= N;
}

RescaleResult rescale_progressions(const std::vector<ProgressionBlock>& source, long r) {
  if (r < 1) throw PreconditionError("r must be positive");
  RescaleResult out;
  out.r = r;
  std::map<long, ProgressionBlock> by_m;
  for (const auto& b : source) {
    if (b.m < 1 || b.N < 0) throw PreconditionError("blocks need m >= 1 and N >= 0");
    // Output difference m = d m1 uses the source block with difference m1, where d = gcd(r, m).
    for (long d = 1; d <= r; ++d) {
      if (r % d != 0 || std::gcd(r / d, b.m) != 1) continue;
      const long m = d * b.m;
      // k m1 = -c (mod r) with 0 <= k < r.
      long k = -1;
      const mpz_class cr = b.c % r;
      for (long t = 0; t < r; ++t) {
        if (mpz_class((cr + mpz_class(t) * b.m) % r) == 0) {
          k = t;
          break;
        }
      }
      if (k < 0) {
        if (std::gcd(b.m, r) == 1) throw Error("no residue k although gcd(m1, r) = 1");
        out.skipped.push_back("m1 = " + std::to_string(b.m) + ", d = " + std::to_string(d));
        continue;
      }
      // c + m1 (d r n + k) = r (c' + m n) for n >= 1 while d r n + k <= N.
      ProgressionBlock nb;
      nb.m = m;
      nb.c = (b.c + mpz_class(b.m) * k) / r;
      nb.N = b.N >= k ? (b.N - k) / (d * r) : 0;
      if (nb.N < 1) continue;
      for (long n = 1; n <= nb.N; ++n) {
        if (!b.contains(r * (nb.c + mpz_class(nb.m) * n))) throw Error("rescaled element escaped the source block");
      }
      if (by_m.count(m)) throw PreconditionError("two source blocks feed difference " + std::to_string(m));
      by_m.emplace(m, std::move(nb));
    }
  }
  for (auto& [m, b] : by_m) out.blocks.push_back(std::move(b));
  return out;
}

}  // namespace hr::pattern
