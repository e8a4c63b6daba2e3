#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hardyrec/core/evaluate.hpp"
#include "hardyrec/equi/equi.hpp"
#include "hardyrec/error.hpp"
#include "hardyrec/numeric/angle.hpp"

using namespace hr;
using namespace hr::equi;

namespace {

// Exact interval for 1.5 sqrt(n) in [m, m + eps] with eps = p/q: 9 n q^2 vs 4 (m q + p)^2.
std::pair<long, long> x32_interval(long m, long p, long q) {
  auto ge = [&](long n) { return 9 * n * q * q >= 4 * m * m * q * q; };
  auto le = [&](long n) { return 9 * n * q * q <= 4 * (m * q + p) * (m * q + p); };
  long lo = 1;
  while (!ge(lo)) ++lo;
  long hi = lo - 1;
  while (le(hi + 1)) ++hi;
  return {lo, hi};
}

double brute_star_2d(const Eigen::MatrixXd& P) {
  // Sup over anchored boxes is attained with corners at point coordinates or 1.
  std::vector<double> xs{1.0}, ys{1.0};
  for (long i = 0; i < P.rows(); ++i) {
    xs.push_back(P(i, 0));
    ys.push_back(P(i, 1));
  }
  double best = 0;
  const double N = static_cast<double>(P.rows());
  for (double x : xs) {
    for (double y : ys) {
      long open = 0, closed = 0;
      for (long i = 0; i < P.rows(); ++i) {
        open += P(i, 0) < x && P(i, 1) < y;
        closed += P(i, 0) <= x && P(i, 1) <= y;
      }
      best = std::max({best, x * y - open / N, closed / N - x * y});
    }
  }
  return best;
}

std::complex<double> naive_sum(const HardyExpr& f, long k, long l, long s) {
  std::complex<double> acc = 0;
  for (long n = k; n <= l; ++n) {
    Interval v = eval_interval(f, Interval::from_si(n, 256), 256) * s;
    mpz_class fl;
    double t = floor_mod1(v, &fl).mid_d();
    acc += std::polar(1.0, 2 * std::numbers::pi * t);
  }
  return acc;
}

}  // namespace

TEST_CASE("Case 2 intervals for x^(3/2) match the closed-form inversion") {
  IntervalSeq seq = build_intervals(parse("x^(3/2)"), 1, mpq_class(1, 10), 1, 1, 200, {true, 4});
  CHECK(seq.kase == IntervalCase::Case2);
  for (const auto& e : seq.entries) {
    auto [lo, hi] = x32_interval(e.m, 1, 10);
    CHECK(e.k_m == lo);
    if (hi >= lo) CHECK(e.l_m == hi);
    else CHECK(e.empty());
    if (!e.empty()) CHECK(e.condition_i);
  }
  CHECK(seq.lengths_grow());
  CHECK(seq.threshold_m <= 12);
  CHECK(seq.at(150).k_m == x32_interval(150, 1, 10).first);
  CHECK_THROWS_AS(build_intervals(parse("x^(3/2)"), 1, mpq_class(1, 10), 1, 1, 20, {false, 1}), DomainError);
}

TEST_CASE("Case 2 intervals for x^(5/2) with k = 2, d = 2") {
  IntervalSeq seq = build_intervals(parse("x^(5/2)"), 2, mpq_class(1, 20), 2, 1, 120);
  CHECK(seq.kase == IntervalCase::Case2);
  // (15/4) sqrt(n) in [2m, 2m + 1/20]  <=>  225 n in [64 m^2, 4 (40m + 1)^2 / 100]
  for (const auto& e : seq.entries) {
    long lo = 1;
    while (225 * 100 * lo < 100 * 64 * e.m * e.m) ++lo;
    CHECK(e.k_m == lo);
    if (!e.empty()) {
      const long hi = e.l_m.get_si();
      CHECK(225 * 400 * hi <= 16 * (40 * e.m + 1) * (40 * e.m + 1));
      CHECK(225 * 400 * (hi + 1) > 16 * (40 * e.m + 1) * (40 * e.m + 1));
      CHECK(e.condition_i);
    }
  }
}

TEST_CASE("Case 1 intervals for x log x") {
  IntervalSeq seq = build_intervals(parse("x*log(x)"), 1, mpq_class(1, 10), 1, 1, 30);
  CHECK(seq.kase == IntervalCase::Case1);
  for (const auto& e : seq.entries) {
    // a' = log n + 1 >= m  <=>  n >= e^{m-1}
    const double want = std::ceil(std::exp(e.m - 1.0) - 1e-9);
    CHECK(std::abs(e.k_m.get_d() - want) <= std::max(1.0, want * 1e-12));
    const double len = mpz_class(e.l_m - e.k_m).get_d();
    CHECK(len >= std::pow(e.k_m.get_d(), 0.75) - 1e-6);
    CHECK(len < std::pow(e.k_m.get_d(), 0.75) + 1);
  }
  CHECK(seq.lengths_grow());
  // Condition (i) holds from the recorded threshold on.
  for (const auto& e : seq.entries) {
    if (e.m >= seq.threshold_m) CHECK(e.condition_i);
  }
  CHECK(seq.threshold_m <= 30);
}

TEST_CASE("build_intervals preconditions") {
  CHECK_THROWS_AS(build_intervals(parse("x^2"), 2, mpq_class(1, 10), 1, 1, 5), PreconditionError);
  CHECK_THROWS_AS(build_intervals(parse("x^(3/2)"), 2, mpq_class(1, 10), 1, 1, 5), PreconditionError);
  CHECK_THROWS_AS(build_intervals(parse("x^(3/2)"), 1, mpq_class(3, 2), 1, 1, 5), PreconditionError);
  CHECK_THROWS_AS(build_intervals(parse("x^(3/2)"), 1, mpq_class(1, 10), 1, 5, 4), PreconditionError);
}

TEST_CASE("one-dimensional discrepancy examples") {
  CHECK(discrepancy(std::vector<double>(50, 0.0)).value == doctest::Approx(1.0));
  std::vector<double> grid;
  for (int j = 0; j < 97; ++j) grid.push_back(j / 97.0);
  CHECK(discrepancy(grid).value == doctest::Approx(1.0 / 97));
  std::vector<double> gold;
  Angle phi = Angle::from_interval(named_value(NamedId::Phi, 256));
  for (std::int64_t n = 1; n <= 10000; ++n) gold.push_back((phi * n).to_double());
  CHECK(discrepancy(gold).value < 3 * std::log(1e4) / 1e4);
  CHECK(discrepancy(gold).exact());
  CHECK_THROWS_AS(discrepancy(std::vector<double>{}), PreconditionError);
}

TEST_CASE("grid discrepancy is an upper estimate within one cell") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd P(60, 2);
    for (long i = 0; i < 60; ++i) P(i, 0) = U(rng), P(i, 1) = U(rng);
    const double exact = brute_star_2d(P);
    Discrepancy est = discrepancy(P, 64);
    CHECK(est.grid == 64);
    CHECK(est.value >= exact - 1e-12);
    CHECK(est.value <= exact + 2.0 / 64 + 1e-12);
  }
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(20, 3);
  CHECK(discrepancy(Z).value == doctest::Approx(1.0));
  Eigen::MatrixXd W(5, 4);
  W.setZero();
  CHECK_THROWS_AS(discrepancy(W), PreconditionError);
}

TEST_CASE("Weyl sums") {
  CHECK(std::abs(weyl_sum(parse("x/2"), 1, 2000, 1)) < 1e-12);
  CHECK(std::abs(weyl_sum(parse("x*phi"), 1, 10000, 1, 4)) < 1e-3);
  auto sq = weyl_sum(parse("x^2"), 1, 100, 1);
  CHECK(sq.real() == doctest::Approx(1.0));
  CHECK(std::abs(sq.imag()) < 1e-12);
  for (long s : {1L, -2L, 3L}) {
    auto got = exp_sum(parse("sqrt(2)*x^2 + log(x)"), 1, 500, s);
    auto want = naive_sum(parse("sqrt(2)*x^2 + log(x)"), 1, 500, s);
    CHECK(std::abs(got - want) < 1e-7);
  }
  CHECK_THROWS_AS(weyl_sum(parse("x"), 1, 10, 0), PreconditionError);
}

TEST_CASE("van der Corput bound examples") {
  VdcBoundInput in = make_vdc_input(parse("sqrt(2)*x^2"), 1, 1000);
  CHECK(in.sign == 1);
  CHECK(in.rho == doctest::Approx(2 * std::sqrt(2.0)));
  const double want = (2 * std::sqrt(2.0) * 999 + 2) * (4 / std::sqrt(2 * std::sqrt(2.0)) + 3);
  CHECK(vdc_bound(in) == doctest::Approx(want).epsilon(1e-12));
  CHECK(std::abs(exp_sum(in.f, 1, 1000)) <= vdc_bound(in));

  VdcBoundInput tiny = make_vdc_input(parse("x^2/1000000"), 1, 100);
  CHECK(vdc_bound(tiny) == doctest::Approx((198e-6 + 2) * (4 / std::sqrt(2e-6) + 3)).epsilon(1e-12));
  CHECK(vdc_bound(tiny) > 100);

  CHECK_THROWS_AS(make_vdc_input(parse("3*x + 1"), 1, 100), PreconditionError);
  VdcBoundInput bad = in;
  bad.rho = 0;
  CHECK_THROWS_AS(vdc_bound(bad), PreconditionError);
  bad.rho = 10;
  CHECK_THROWS_AS(vdc_bound(bad), PreconditionError);
  // f'' = 2 - 1/x changes sign?  No: positive from x = 1.  x^3 - 30 x^2 has f'' = 6x - 60.
  CHECK_THROWS_AS(make_vdc_input(parse("x^3 - 30*x^2"), 1, 100), PreconditionError);
  CHECK(make_vdc_input(parse("x^3 - 30*x^2"), 11, 100).sign == 1);
  CHECK(make_vdc_input(parse("-x^2 + sqrt(x)"), 1, 50).sign == -1);
}

TEST_CASE("van der Corput dominance on random quadratic-leading phases") {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int t = 0; t < 100; ++t) {
    const double c2 = std::uniform_real_distribution<double>(1e-4, 3)(rng);
    const int variant = static_cast<int>(rng() % 3);
    const char* tail = variant == 0 ? "sqrt(3)*x" : (variant == 1 ? "x*log(x)" : "x^(3/2)");
    const std::string f = std::to_string(c2) + "*x^2 + " + tail;
    const long k = 1 + static_cast<long>(rng() % 1000);
    const long l = k + 1 + static_cast<long>(rng() % 2000);
    VdcBoundInput in = make_vdc_input(parse(f), k, l);
    CHECK(std::abs(exp_sum(in.f, k, l)) <= vdc_bound(in));
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("density of small fractional parts") {
  const double d1 = density_smallfrac({parse("sqrt(2)")}, {1}, SmallFracThreshold::inv_log(), 100000, 4);
  // Naive oracle in long double.
  long cnt = 0;
  const long double s2 = std::sqrt(2.0L);
  for (long m = 1; m <= 100000; ++m) {
    long double x = m * s2;
    long double f = x - std::floor(x);
    if (std::min(f, 1 - f) <= 1.0L / std::log(m + 2.0L)) ++cnt;
  }
  CHECK(d1 == doctest::Approx(cnt / 1e5).epsilon(1e-12));
  // Equidistribution predicts density close to the average of 2 e_m.
  double avg = 0;
  for (long m = 1; m <= 100000; ++m) avg += 2 / std::log(m + 2.0);
  CHECK(std::abs(d1 - avg / 1e5) < 0.01);

  const double p1 = density_smallfrac({parse("sqrt(2)"), parse("sqrt(3)")}, {1, 2}, SmallFracThreshold::power(0.25), 50000);
  const double p4 = density_smallfrac({parse("sqrt(2)"), parse("sqrt(3)")}, {1, 2}, SmallFracThreshold::power(0.25), 200000);
  CHECK(p4 < p1);
  CHECK(density_smallfrac({parse("sqrt(2)")}, {1}, SmallFracThreshold::inv_log(), 400000) <= d1 + 0.01);

  CHECK_THROWS_AS(density_smallfrac({parse("sqrt(2)")}, {1}, SmallFracThreshold::constant(0.5), 100), PreconditionError);
  CHECK_THROWS_AS(density_smallfrac({parse("3/7")}, {1}, SmallFracThreshold::inv_log(), 100), PreconditionError);
  CHECK_THROWS_AS(density_smallfrac({parse("sqrt(2)^2")}, {1}, SmallFracThreshold::inv_log(), 100), PreconditionError);
}

TEST_CASE("torus equidistribution verdicts") {
  TorusEquiVerdict half = torus_equi_check(parse("1/2"), 1, {}, 100, 0.1);
  CHECK_FALSE(half.equidistributed);
  REQUIRE(half.k.has_value());
  CHECK(*half.k == 2);
  CHECK(half.norm_k_alpha == 0);
  CHECK(torus_equi_check(parse("phi"), 1, {}, 10000, 0.01).equidistributed);
  CHECK(torus_equi_check(parse("sqrt(2)"), 2, {}, 1000, 0.05).equidistributed);
  TorusEquiVerdict third = torus_equi_check(parse("1/3 + 1/1000000"), 1, {mpq_class(1, 7)}, 200, 0.15);
  CHECK_FALSE(third.equidistributed);
  CHECK(*third.k == 3);
  CHECK(third.witness_bound == doctest::Approx(3e-6 * 200));
  CHECK_THROWS_AS(torus_equi_check(parse("pi"), 1, {1, 2}, 10, 0.1), PreconditionError);
}

TEST_CASE("Cesaro interval averages") {
  IntervalSeq seq = build_intervals(parse("x^(3/2)"), 1, mpq_class(1, 10), 1, 1, 60);
  auto c = cesaro_interval_average(TestFunction::character({1}), {parse("1/4")}, seq, 60);
  CHECK(std::abs(c - std::complex<double>(0, 1)) < 1e-12);

  // Independent per-interval oracle.
  std::complex<double> want = 0;
  int used = 0;
  for (const auto& e : seq.entries) {
    if (e.empty()) continue;
    want += naive_sum(parse("x^(3/2)"), e.k_m.get_si(), e.l_m.get_si(), 1) / e.length().get_d();
    ++used;
  }
  want /= used;
  auto got = cesaro_interval_average(TestFunction::character({1}), {parse("x^(3/2)")}, seq, 60, 4);
  CHECK(std::abs(got - want) < 1e-8);

  auto box = cesaro_interval_average(TestFunction::box_of({{0, mpq_class(1, 2)}}), {parse("x^(3/2)")}, seq, 60);
  CHECK(box.real() >= 0);
  CHECK(box.real() <= 1);
  // x^2/4 at even n is an integer: the box [0, 1/2) must count it.
  IntervalSeq seq2 = build_intervals(parse("x^(3/2)"), 1, mpq_class(1, 10), 1, 30, 40);
  auto all = cesaro_interval_average(TestFunction::box_of({{0, 1}}), {parse("x^2/4")}, seq2, 40);
  CHECK(all.real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(cesaro_interval_average(TestFunction::character({1, 1}), {parse("x")}, seq, 10), PreconditionError);
  CHECK_THROWS_AS(cesaro_interval_average(TestFunction::character({1}), {parse("x")}, seq, 61), PreconditionError);
}

TEST_CASE("Weyl sums over I_m decay in m for x^(3/2)") {
  IntervalSeq seq = build_intervals(parse("x^(3/2)"), 1, mpq_class(1, 10), 1, 1, 200, {true, 4});
  // Averages over the first and last quarter of m.
  for (long s : {1L, 2L, 3L}) {
    double early = 0, late = 0;
    int ne = 0, nl = 0;
    for (const auto& e : seq.entries) {
      if (e.empty()) continue;
      const double w = std::abs(weyl_sum(seq.a, e.k_m, e.l_m, s));
      if (e.m <= 50) early += w, ++ne;
      if (e.m > 150) late += w, ++nl;
    }
    MESSAGE("s = " << s << ": mean |weyl| early " << early / ne << ", late " << late / nl);
    CHECK(late / nl < early / ne);
  }
}

TEST_CASE("two-dimensional interval points for x^(5/2)") {
  IntervalSeq seq = build_intervals(parse("x^(5/2)"), 2, mpq_class(1, 20), 2, 1, 400, {true, 4});
  std::vector<HardyExpr> comps{parse("x^(5/2)"), parse("(5/2)*x^(3/2)")};
  double prev = 2;
  for (long M : {100L, 200L, 400L}) {
    Eigen::MatrixXd P = interval_points(comps, seq, M, 4);
    const double d = discrepancy(P).value;
    MESSAGE("M = " << M << " points " << P.rows() << " discrepancy " << d);
    CHECK(d < prev + 0.02);
    prev = d;
  }
}
