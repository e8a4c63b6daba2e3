// Acceptance run: one PASS/FAIL line per criterion.  With an argument, runs that criterion only.
#include <algorithm>
#include <chrono>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hardyrec/core/evaluate.hpp"
#include "hardyrec/core/expr.hpp"
#include "hardyrec/equi/equi.hpp"
#include "hardyrec/error.hpp"
#include "hardyrec/nil/heisenberg.hpp"
#include "hardyrec/pattern/miner.hpp"
#include "hardyrec/pet/family.hpp"
#include "hardyrec/recur/recur.hpp"
#include "hardyrec/sequence/certified.hpp"

using namespace hr;

namespace {

// Pinned tolerances.
constexpr double kPetSeconds = 1.0;
constexpr double kMineSeconds = 300.0;
constexpr double kEquiAverage = 0.05;
constexpr double kDensityFinal = 0.02;
constexpr double kNilErgodic = 0.05;
constexpr double kNilRational = 0.9;
constexpr double kRotationFraction = 0.5;
constexpr double kAppendixMagnitude = 0.05;
constexpr double kAppendixSlack = 0.02;
constexpr double kJDensity = 0.25;
constexpr double kJDensityTol = 0.03;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int jobs() { return static_cast<int>(std::max(1u, std::min(8u, std::thread::hardware_concurrency()))); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome pet_trace() {
  using namespace hr::pet;
  const auto t0 = std::chrono::steady_clock::now();
  const ReductionTrace tr = reduce_to_linear(make_family(parse_poly_list("n^2, 2n, n")));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::vector<FamilyType> want{{{2, 1, 2}}, {{2, 1, 1}}, {{2, 1, 0}}, {{1, 7}}};
  const auto got = tr.types();
  std::string chain;
  for (const auto& t : got) chain += (chain.empty() ? "" : " -> ") + t.to_string();

  std::multiset<std::string> leads, expect;
  for (const auto& m : tr.final_family.members) leads.insert(m.p.leading().to_string());
  for (const char* s : {"2h1+2h2+2h3", "2h1+2h2", "2h1+2h3", "2h1", "2h2+2h3", "2h2", "2h3"}) {
    expect.insert(parse_poly(s).to_string());
  }
  const bool pass = got == want && leads == expect && secs < kPetSeconds;
  return {pass, "types " + chain + ", leading set " + (leads == expect ? "matches" : "differs") + ", " +
                    fmt("%.3f s", secs)};
}

Outcome certificate_soundness() {
  using namespace hr::pattern;
  const auto t0 = std::chrono::steady_clock::now();
  long certs = 0, bad = 0, values = 0;
  MineOptions opt;
  opt.jobs = jobs();
  for (const char* e : {"x^(3/2)", "x*log(x)", "x^(5/2)"}) {
    const HardyExpr a = parse(e);
    for (long r : {1L, 2L}) {
      const MineReport rep = mine_patterns(a, r, 10, 200, opt);
      for (const auto& c : rep.certificates()) {
        ++certs;
        const auto range = range_enumerate(a, c.anchor.n_anchor + 1, c.anchor.n_anchor + c.N);
        const std::set<mpz_class> vals(range.begin(), range.end());
        for (long n = 1; n <= c.N; ++n) {
          ++values;
          bad += vals.count(c.value(n)) == 0;
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {bad == 0 && certs > 0 && secs < kMineSeconds,
          std::to_string(certs) + " certificates, " + std::to_string(values) + " values, " + std::to_string(bad) +
              " missing, " + fmt("%.1f s", secs)};
}

Outcome pattern_growth() {
  using namespace hr::pattern;
  MineOptions opt;
  opt.jobs = jobs();
  const MineReport rep = mine_patterns(parse("x^(3/2)"), 1, 10, 200, opt);
  long early = 0, late = 0;
  for (const auto& e : rep.entries) {
    if (!e.cert) continue;
    if (e.m <= 76) early = std::max(early, e.cert->N);
    if (e.m >= 134) late = std::max(late, e.cert->N);
  }
  return {late > early, "max N on [10,76] = " + std::to_string(early) + ", on [134,200] = " + std::to_string(late)};
}

Outcome vdc_dominance() {
  using namespace hr::equi;
  std::mt19937_64 rng(4);
  int violations = 0;
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const double c2 = std::uniform_real_distribution<double>(1e-4, 3)(rng);
    const int variant = static_cast<int>(rng() % 4);
    const char* tails[] = {"sqrt(3)*x", "x*log(x)", "x^(3/2)", "log(x)^2"};
    const std::string f = std::to_string(c2) + "*x^2 + " + tails[variant];
    const long k = 1 + static_cast<long>(rng() % 100000);
    const long l = k + 1 + static_cast<long>(rng() % 9999);
    const VdcBoundInput in = make_vdc_input(parse(f), k, l);
    const double s = std::abs(exp_sum(in.f, k, l, 1, jobs()));
    const double b = vdc_bound(in);
    violations += s > b;
    worst = std::max(worst, s / b);
  }
  return {violations == 0, std::to_string(violations) + " violations, max |sum|/bound " + fmt("%.4f", worst)};
}

Outcome equi_decay() {
  using namespace hr::equi;
  const HardyExpr a = parse("x^(3/2)");
  const IntervalSeq seq = build_intervals(a, 1, mpq_class(1, 10), 1, 1, 200, {true, jobs()});
  const double v50 = std::abs(cesaro_interval_average(TestFunction::character({1}), {a}, seq, 50, jobs()));
  const double v200 = std::abs(cesaro_interval_average(TestFunction::character({1}), {a}, seq, 200, jobs()));
  const bool case2 = seq.kase == IntervalCase::Case2;
  return {case2 && v200 < kEquiAverage && v200 < v50,
          std::string(case2 ? "Case 2" : "not Case 2") + ", |avg| M=50 " + fmt("%.4f", v50) + ", M=200 " +
              fmt("%.4f", v200)};
}

Outcome density_zero() {
  using namespace hr::equi;
  const std::vector<HardyExpr> B{parse("sqrt(2)")};
  const long M = 250000;
  const double d1 = density_smallfrac(B, {1}, SmallFracThreshold::inv_log(), M, jobs());
  const double d4 = density_smallfrac(B, {1}, SmallFracThreshold::inv_log(), 4 * M, jobs());
  return {d4 < d1 && d4 < kDensityFinal, "M " + fmt("%.5f", d1) + ", 4M " + fmt("%.5f", d4)};
}

Outcome heisenberg() {
  using namespace hr::nil;
  using Q = HeisenbergElement<mpq_class>;
  using A = HeisenbergElement<Angle>;
  std::mt19937_64 rng(7);
  auto rq = [&] {
    mpq_class v(static_cast<long>(rng() % 2001) - 1000, static_cast<unsigned long>(rng() % 97 + 1));
    v.canonicalize();
    return v;
  };
  auto re = [&] { return Q{static_cast<long long>(rng() % 41) - 20, rq(), rq()}; };
  long axiom_fail = 0;
  for (int i = 0; i < 10000; ++i) {
    const Q a = re(), b = re(), c = re();
    axiom_fail += !(heisenberg_mul(heisenberg_mul(a, b), c) == heisenberg_mul(a, heisenberg_mul(b, c)));
    axiom_fail += !(heisenberg_mul(a, heisenberg_inverse(a)) == Q::identity());
    axiom_fail += !(heisenberg_mul(Q::identity(), a) == a);
  }

  const A erg{1, Angle::from_interval(named_value(NamedId::Sqrt2, 256)),
              Angle::from_interval(named_value(NamedId::Sqrt3, 256))};
  A acc = A::identity();
  for (int n = 1; n <= 100000; ++n) acc = heisenberg_mul(acc, erg);
  const bool power = nil_power(erg, 100000) == acc;

  const auto sched = random_schedule(300, 1, 42);
  const double e_erg = std::abs(nil_cesaro_average(TorusFunction::character(1, 0), erg, sched, 1, jobs()).average);
  const A rat{1, Angle::from_double(0.5), Angle()};
  const double e_rat = std::abs(nil_cesaro_average(TorusFunction::character(1, 0), rat, sched, 1, jobs()).average);
  const double e2_rat = std::abs(nil_cesaro_average(TorusFunction::character(2, 0), rat, sched, 1, jobs()).average);

  const bool pass = axiom_fail == 0 && power && e_erg < kNilErgodic && e_rat >= kNilRational;
  return {pass, std::to_string(axiom_fail) + " axiom failures, power " + (power ? "ok" : "differs") +
                    ", |avg e(t1)| ergodic " + fmt("%.4f", e_erg) + ", rational " + fmt("%.4f", e_rat) +
                    " (e(2 t1) " + fmt("%.4f", e2_rat) + ")"};
}

std::map<long, long> naive_counts(const std::vector<char>& in, const std::vector<long>& S, int l) {
  std::map<long, long> out;
  const long N = static_cast<long>(in.size());
  for (long s : S) {
    if (s == 0) continue;
    long c = 0;
    for (long m = 0; m < N; ++m) {
      bool all = true;
      for (int j = 0; j <= l && all; ++j) {
        const long v = m + j * s;
        all = v >= 0 && v < N && in[static_cast<std::size_t>(v)];
      }
      c += all;
    }
    out[s] = c;
  }
  return out;
}

Outcome recurrence_truths() {
  using namespace hr::recur;
  std::ostringstream d;

  const auto blocks = parity_blocks(1000000);
  const bool parity = !blocks.empty() && std::all_of(blocks.begin(), blocks.end(), [](const ParityVerdict& v) { return v.pass; });
  d << "(a) " << blocks.size() << " parity blocks " << (parity ? "pass" : "fail");

  const std::vector<std::pair<mpq_class, mpq_class>> B{{mpq_class(1, 2), mpq_class(3, 4)}};
  const long W = 100000;
  const RotationReport r2 =
      rotation_recurrence_test(parse("sqrt(5)"), B, floor_sequence(parse("sqrt(5)*x + 2"), 1, 20000, W), W, 1, jobs());
  const RotationReport r1 =
      rotation_recurrence_test(parse("sqrt(5)"), B, floor_sequence(parse("sqrt(5)*x + 1"), 1, 20000, W), W, 1, jobs());
  const bool rot = r2.total_witnesses == 0 && r1.fraction >= kRotationFraction;
  d << "; (b) [sqrt5 n+2] " << r2.total_witnesses << " witnesses, " << fmt("%.4f", r2.fraction) << " of "
    << r2.steps.size() << " steps; [sqrt5 n+1] "
    << fmt("%.4f", r1.fraction) << " of steps";

  std::mt19937_64 rng(88);
  long mismatches = 0;
  std::vector<long> sizes{1, 2, 63, 64, 65, 127, 128, 129, 10000};
  for (int t = 0; t < 40; ++t) sizes.push_back(1 + static_cast<long>(rng() % 10000));
  for (long N : sizes) {
    const double keep = 0.3 + 0.65 * static_cast<double>(rng() % 1000) / 1000.0;
    std::vector<char> in(static_cast<std::size_t>(N));
    std::vector<long> members;
    for (long n = 0; n < N; ++n) {
      in[static_cast<std::size_t>(n)] = static_cast<double>(rng() % 100000) / 100000.0 < keep;
      if (in[static_cast<std::size_t>(n)]) members.push_back(n);
    }
    const FiniteSet lam = FiniteSet::from_members(N, members);
    std::vector<long> S;
    for (int i = 0; i < 12; ++i) S.push_back(static_cast<long>(rng() % 400) - 100);
    S.push_back(N - 1);
    const int l = 1 + static_cast<int>(rng() % 4);
    const RecurrenceReport rep = find_progressions(lam, S, l, WitnessMode::All, jobs());
    mismatches += !(rep.counts == naive_counts(in, S, l)) || !verify_witnesses(lam, rep);
  }
  d << "; (c) " << mismatches << " mismatches in " << sizes.size() << " windows";
  return {parity && rot && mismatches == 0, d.str()};
}

Outcome appendix_decay() {
  using namespace hr::recur;
  std::ostringstream d;
  bool pass = true;
  for (const char* t : {"1/2", "1/3"}) {
    const AppendixReport r = appendix_average(parse("sqrt(2)*x^2"), parse("pi"), parse(t),
                                              {mpq_class(1, 2), mpq_class(3, 4)}, AppendixSchedule::linear(), 400, jobs());
    bool ok = std::abs(r.value) < kAppendixMagnitude;
    for (std::size_t i = 1; i < r.trend.size(); ++i) ok = ok && r.trend[i].second <= r.trend[i - 1].second + kAppendixSlack;
    pass = pass && ok;
    d << "t=" << t << ":";
    for (const auto& [M, v] : r.trend) d << " M=" << M << " " << fmt("%.4f", v);
    d << "; ";
  }
  TheoremCOptions opt;
  opt.jobs = jobs();
  const TheoremCReport c = theoremC_experiment(parse("sqrt(2)"), parse("x^2"), parse("log(x)^2"), parse("pi"), opt);
  const bool dens = std::abs(c.J_density - kJDensity) <= kJDensityTol;
  d << "J density " << fmt("%.4f", c.J_density) << ", identity " << c.agreed << "/" << c.checked;
  return {pass && dens, d.str()};
}

Outcome precision_soundness() {
  const char* corpus[] = {"x^(3/2)", "x^sqrt(2)", "x*log(x)", "sqrt3*x^(5/2) + x*log(x)", "gamma_ln(x+1)",
                          "x^2/loglog(x)", "x^(5/2)*zeta(x)", "x^2*sin_inv_log(x)", "x^(1+1/x)*li(x)",
                          "log(x)^2"};
  std::vector<HardyExpr> exprs;
  for (const char* s : corpus) exprs.push_back(parse(s));
  std::mt19937_64 rng(1000);
  long changed = 0;
  for (int i = 0; i < 1000; ++i) {
    const HardyExpr& a = exprs[static_cast<std::size_t>(i) % exprs.size()];
    const mpz_class n = mpz_class(static_cast<unsigned long>(rng() % 100000000 + 20));
    const FloorResult f = floor_eval(a, n);
    const FloorResult g = floor_eval(a, n, 4 * f.bits);
    changed += f.floor != g.floor || !f.frac.contains(g.frac);
  }
  return {changed == 0, std::to_string(changed) + " of 1000 floors changed at 4x precision"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{
      pet_trace,  certificate_soundness, pattern_growth,    vdc_dominance,  equi_decay,
      density_zero, heisenberg,          recurrence_truths, appendix_decay, precision_soundness};
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], criteria.size());
      return 2;
    }
  }
  bool all = true;
  for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) {
    if (only && i != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(i - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s  %s  [%.1f s]\n", i, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
