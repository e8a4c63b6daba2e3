#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "detail.hpp"
#include "hardyrec/core/evaluate.hpp"
#include "hardyrec/core/growth.hpp"
#include "hardyrec/equi/equi.hpp"
#include "hardyrec/error.hpp"
#include "hardyrec/recur/recur.hpp"
#include "hardyrec/sequence/certified.hpp"
#include "hardyrec/util/parallel.hpp"

namespace hr::recur {

namespace detail {

bool frac_in(const HardyExpr& f, const mpz_class& n, const mpq_class& lo, const mpq_class& hi) {
  for (int bits = 0; bits <= kPrecisionCap; bits = bits == 0 ? 256 : bits * 2) {
    const FloorResult r = floor_eval(f, n, bits);
    if (r.exact) {
      if (auto q = exact_value(f, mpq_class(n))) {
        const mpq_class x = *q - r.floor;
        return x >= lo && x <= hi;
      }
    }
    const Interval& fr = r.frac.enclosure();
    const mpfr_prec_t p = fr.prec() + 64;
    const Interval L = Interval::from_q(lo, p), H = Interval::from_q(hi, p);
    if (cmp(fr.hi(), L.lo()) < 0 || cmp(fr.lo(), H.hi()) > 0) return false;
    if (cmp(fr.lo(), L.hi()) >= 0 && cmp(fr.hi(), H.lo()) <= 0) return true;
  }
  throw FloorAmbiguity(n.get_str(), kPrecisionCap);
}

void check_target(const std::vector<std::pair<mpq_class, mpq_class>>& B) {
  if (B.empty()) throw PreconditionError("target set is empty");
  auto sorted = B;
  std::sort(sorted.begin(), sorted.end());
  mpq_class covered = 0, reach = 0;
  for (const auto& [lo, hi] : sorted) {
    if (lo < 0 || hi > 1 || lo >= hi) throw PreconditionError("target intervals must satisfy 0 <= lo < hi <= 1");
    const mpq_class start = std::max(lo, reach);
    if (hi > start) covered += hi - start;
    reach = std::max(reach, hi);
  }
  if (covered >= 1) throw PreconditionError("target set covers the whole circle");
}

}  // namespace detail

namespace {

std::complex<double> e_of(double t) {
  const double th = 2.0 * std::numbers::pi * t;
  return {std::cos(th), std::sin(th)};
}

void require_irrational_constant(const HardyExpr& beta, const char* what) {
  if (!beta.is_constant_expr()) throw PreconditionError(std::string(what) + " must be a constant");
  if (auto q = exact_value(beta, 1)) {
    throw PreconditionError(std::string(what) + " = " + q->get_str() + " is rational");
  }
}

long floor_at(const HardyExpr& f, long m) {
  const FloorResult r = floor_eval(f, mpz_class(m));
  if (!r.floor.fits_slong_p()) throw OverflowError("schedule value at m = " + std::to_string(m) + " is too large");
  return r.floor.get_si();
}

HardyExpr shifted(const HardyExpr& p, long m, const HardyExpr& beta) {
  return simplify(sum({p, product({constant(m), beta})}));
}

}  // namespace

AppendixSchedule AppendixSchedule::linear() { return {var(), var()}; }

AppendixReport appendix_average(const HardyExpr& p, const HardyExpr& beta, const HardyExpr& t,
                                const std::pair<mpq_class, mpq_class>& box, const AppendixSchedule& schedule, long M,
                                int jobs) {
  if (M < 4) throw PreconditionError("M must be at least 4");
  if (simplify(p).is_constant_expr()) throw PreconditionError("p must be non-constant");
  require_irrational_constant(beta, "beta");
  if (!t.is_constant_expr()) throw PreconditionError("t must be a constant");
  const Interval t_iv = eval_interval(t, Interval::from_si(1, 256), 256);
  if (!(t_iv.positive() && (t_iv - Interval::from_si(1, 256)).negative())) throw PreconditionError("t must lie in (0, 1)");
  if (box.first < 0 || box.second > 1 || box.first >= box.second) {
    throw PreconditionError("box must satisfy 0 <= lo < hi <= 1");
  }
  if (!schedule.n_m.valid() || !schedule.N_m.valid()) throw PreconditionError("schedule is incomplete");

  // {[x] t}: exact for rational t, otherwise from a 256-bit enclosure.
  const std::optional<mpq_class> t_q = exact_value(t, 1);
  auto phase_of = [&](const mpz_class& fl) {
    if (t_q) {
      mpz_class r;
      mpz_fdiv_r(r.get_mpz_t(), mpz_class(fl * t_q->get_num()).get_mpz_t(), t_q->get_den_mpz_t());
      return mpq_class(r, t_q->get_den()).get_d();
    }
    BigFloat x = (Interval::from_z(fl, 256) * t_iv).mid();
    mpfr_frac(x.get(), x.get(), MPFR_RNDN);
    return x.to_double();
  };
  std::vector<std::complex<double>> A(static_cast<std::size_t>(M));
  parallel_for(A.size(), jobs, [&](std::size_t i) {
    const long m = static_cast<long>(i) + 1;
    const long n0 = floor_at(schedule.n_m, m);
    const long N = floor_at(schedule.N_m, m);
    if (N < 1 || n0 < 0) throw PreconditionError("schedule gives N_m < 1 or n_m < 0 at m = " + std::to_string(m));
    const HardyExpr q = shifted(p, m, beta);
    std::complex<double> acc = 0;
    for (long n = n0; n <= n0 + N; ++n) {
      if (!detail::frac_in(q, mpz_class(n), box.first, box.second)) continue;
      const FloorResult r = floor_eval(q, mpz_class(n));
      acc += e_of(phase_of(r.floor));
    }
    A[i] = acc / static_cast<double>(N);
  });

  AppendixReport rep;
  std::complex<double> run = 0;
  const long marks[3] = {M / 4, M / 2, M};
  int next = 0;
  for (long m = 1; m <= M; ++m) {
    run += A[static_cast<std::size_t>(m - 1)];
    while (next < 3 && marks[next] == m) {
      rep.trend.emplace_back(m, std::abs(run / static_cast<double>(m)));
      ++next;
    }
  }
  rep.value = run / static_cast<double>(M);
  rep.decaying = true;
  for (std::size_t i = 1; i < rep.trend.size(); ++i) {
    if (rep.trend[i].second > rep.trend[i - 1].second + 0.02) rep.decaying = false;
  }
  return rep;
}

TheoremCReport theoremC_experiment(const HardyExpr& c, const HardyExpr& p, const HardyExpr& b, const HardyExpr& beta,
                                   const TheoremCOptions& opt) {
  if (opt.M < 4) throw PreconditionError("M must be at least 4");
  if (!c.is_constant_expr()) throw PreconditionError("c must be a constant");
  if (auto cq = exact_value(c, 1); cq && *cq == 0) throw PreconditionError("c must be non-zero");
  require_irrational_constant(beta, "beta");
  if (simplify(p).is_constant_expr()) throw PreconditionError("p must be a non-constant integer polynomial");
  for (long n = 1; n <= 8; ++n) {
    auto v = exact_value(p, n);
    if (!v || v->get_den() != 1) throw PreconditionError("p must be an integer polynomial");
  }
  const GrowthInfo gi = growth_exponent(b);
  if (gi.classification != GrowthClass::StrictlyBetween || gi.k != 0 || gi.sign < 0) {
    throw PreconditionError("b must satisfy 1 < b < x and be eventually positive");
  }
  const HardyExpr N_expr = opt.N_m.valid() ? opt.N_m : var();
  const long large_from = opt.large_from > 0 ? opt.large_from : opt.M / 2;
  const mpz_class window = opt.window > 0 ? opt.window : mpz_class(1) << 256;

  const HardyExpr b1 = simplify(differentiate(b));
  const SignInfo mono = eventual_sign(b1);
  if (mono.sign < 0) throw PreconditionError("b must be eventually increasing");
  const mpz_class n0 = std::max({validity_threshold(b), validity_threshold(b1), mono.threshold, mpz_class(1)});
  const HardyExpr a = simplify(sum({product({c, p}), b}));
  const HardyExpr cp = simplify(product({c, p}));

  TheoremCReport rep;
  rep.intervals.resize(static_cast<std::size_t>(opt.M));
  struct Slot {
    long S = 0, J = 0;
    std::vector<mpz_class> j_large;
  };
  std::vector<Slot> slots(rep.intervals.size());
  parallel_for(slots.size(), opt.jobs, [&](std::size_t i) {
    const long m = static_cast<long>(i) + 1;
    const HardyExpr dev = simplify(sum({b, negate(product({constant(m), beta}))}));
    mpz_class center;
    try {
      center = equi::first_true(n0, [&](const mpz_class& n) { return equi::compare_at(dev, n, 0) >= 0; });
    } catch (const OverflowError&) {
      throw DomainError("b never reaches m beta for m = " + std::to_string(m));
    }
    if (center > window) throw DomainError("b reaches m beta only past the window at m = " + std::to_string(m));
    TheoremCInterval& I = rep.intervals[i];
    I.m = m;
    I.N_m = floor_at(N_expr, m);
    if (I.N_m < 1) throw PreconditionError("N_m < 1 at m = " + std::to_string(m));
    I.n_m = std::max(n0, mpz_class(center - I.N_m / 2));
    for (const mpz_class& n : {I.n_m, mpz_class(I.n_m + I.N_m)}) {
      const Interval v = abs(eval_interval(dev, Interval::from_z(n, 256), 256));
      I.sup_dev = std::max(I.sup_dev, v.hi().to_double(MPFR_RNDU));
    }
    const HardyExpr q = shifted(cp, m, beta);
    Slot& s = slots[i];
    for (long k = 0; k <= I.N_m; ++k) {
      const mpz_class n = I.n_m + k;
      ++s.S;
      if (detail::frac_in(q, n, mpq_class(1, 2), mpq_class(3, 4))) {
        ++s.J;
        if (m >= large_from) s.j_large.push_back(n);
      }
    }
  });

  std::vector<std::pair<long, mpz_class>> pool;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    rep.S_size += slots[i].S;
    rep.J_size += slots[i].J;
    if (rep.intervals[i].m >= large_from) rep.tolerance = std::max(rep.tolerance, rep.intervals[i].sup_dev);
    for (auto& n : slots[i].j_large) pool.emplace_back(rep.intervals[i].m, std::move(n));
  }
  rep.J_density = static_cast<double>(rep.J_size) / static_cast<double>(rep.S_size);

  std::vector<std::pair<long, mpz_class>> sample;
  std::mt19937_64 rng(opt.seed);
  std::sample(pool.begin(), pool.end(), std::back_inserter(sample), std::max<long>(opt.samples, 0), rng);
  std::vector<char> ok(sample.size(), 0);
  parallel_for(sample.size(), opt.jobs, [&](std::size_t i) {
    const auto& [m, n] = sample[i];
    ok[i] = floor_eval(a, n).floor == floor_eval(shifted(cp, m, beta), n).floor;
  });
  rep.checked = static_cast<long>(sample.size());
  rep.agreed = static_cast<long>(std::count(ok.begin(), ok.end(), 1));
  rep.agreement = rep.checked == 0 ? 0.0 : static_cast<double>(rep.agreed) / static_cast<double>(rep.checked);
  return rep;
}

}  // namespace hr::recur
