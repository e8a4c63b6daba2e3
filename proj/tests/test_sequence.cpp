#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "hardyrec/core/expr.hpp"
#include "hardyrec/error.hpp"
#include "hardyrec/sequence/certified.hpp"

using namespace hr;

namespace {

std::vector<long> as_longs(const std::vector<mpz_class>& v) {
  std::vector<long> out;
  for (const auto& z : v) out.push_back(z.get_si());
  return out;
}

}  // namespace

TEST_CASE("eval examples") {
  CertifiedReal l = eval(parse("log(x)"), mpq_class(1), 64);
  CHECK(l.to_double() == doctest::Approx(0.0));
  // e^2 is not rational; evaluate log(x) at the named constant through composition instead.
  CertifiedReal two = eval(parse("log(e^2*x)"), mpq_class(1), 64);
  CHECK(two.to_double() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(two.radius_d() <= std::ldexp(2.0, -32));

  CertifiedReal z = eval(parse("zeta(x)"), mpq_class(50), 64);
  const double excess = (z.to_double() - 1.0) / std::ldexp(1.0, -50);
  CHECK(excess == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("eval meets the requested radius") {
  for (int prec : {64, 128, 256, 512}) {
    CertifiedReal v = eval(parse("x^sqrt(2)"), mpq_class(1000000), prec);
    BigFloat bound(64);
    mpfr_abs(bound.get(), v.midpoint().get(), MPFR_RNDD);
    if (mpfr_cmp_ui(bound.get(), 1) < 0) mpfr_set_ui(bound.get(), 1, MPFR_RNDN);
    mpfr_mul_2si(bound.get(), bound.get(), -prec / 2, MPFR_RNDD);
    CHECK(mpfr_lessequal_p(v.radius().get(), bound.get()));
  }
}

TEST_CASE("eval agrees with a 4x precision re-evaluation") {
  HardyExpr a = parse("x^sqrt(2)");
  CertifiedReal lo = eval(a, mpq_class(1000000), 128);
  CertifiedReal hi = eval(a, mpq_class(1000000), 512);
  CHECK(lo.contains(hi));
  CHECK(mpfr_lessequal_p(lo.enclosure().lo().get(), hi.enclosure().lo().get()));
  CHECK(mpfr_lessequal_p(hi.enclosure().hi().get(), lo.enclosure().hi().get()));
  CHECK(lo.to_string(30).substr(0, 31) == hi.to_string(30).substr(0, 31));
}

TEST_CASE("floor_eval examples") {
  FloorResult a = floor_eval(parse("x^(3/2)"), 4);
  CHECK(a.floor == 8);
  CHECK(a.exact);
  CHECK(a.frac.to_double() == 0.0);
  CHECK(floor_eval(parse("x^sqrt(2)"), 10).floor == 25);
  CHECK(floor_eval(parse("x*log(x)"), 100).floor == 460);
  FloorResult l = floor_eval(parse("log(x)/log(2)"), 1024);
  CHECK(l.floor == 10);
  CHECK(l.exact);
}

TEST_CASE("floor_eval fractional parts lie in [0, 1)") {
  HardyExpr a = parse("x^sqrt(2) + x*log(x)");
  for (long n = 2; n < 400; n += 7) {
    FloorResult f = floor_eval(a, n);
    CHECK(f.frac.enclosure().lo().sign() >= 0);
    CHECK(mpfr_cmp_ui(f.frac.enclosure().hi().get(), 1) < 0);
    CHECK(mpfr_cmp_z(f.frac.enclosure().lo().get(), mpz_class(0).get_mpz_t()) >= 0);
  }
}

TEST_CASE("deriv_eval examples") {
  CHECK(deriv_eval(parse("x^(3/2)"), 1, 10000).to_double() == doctest::Approx(150.0).epsilon(1e-15));
  CHECK(deriv_eval(parse("x^2"), 2, 123456789).to_double() == 2.0);
  CHECK(deriv_eval(parse("x^(5/2)"), 2, 10000).to_double() == doctest::Approx(375.0).epsilon(1e-15));
}

TEST_CASE("range_enumerate examples") {
  CHECK(as_longs(range_enumerate(parse("log(x)/log(2)"), 8, 15)) == std::vector<long>{3});
  CHECK(as_longs(range_enumerate(parse("x^(3/2)"), 1, 10)) ==
        std::vector<long>{1, 2, 5, 8, 11, 14, 18, 22, 27, 31});
}

TEST_CASE("floors are monotone for increasing functions") {
  for (const char* s : {"x^(3/2)", "x*log(x)", "x^sqrt(2)", "log(x)^2"}) {
    HardyExpr a = parse(s);
    mpz_class prev = floor_eval(a, 3).floor;
    for (long n = 4; n < 2000; ++n) {
      mpz_class f = floor_eval(a, n).floor;
      CHECK(f >= prev);
      prev = f;
    }
  }
}

TEST_CASE("slow growth gives a cofinite range") {
  HardyExpr a = parse("log(x)^2");
  std::vector<mpz_class> r = range_enumerate(a, 3, 20000);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] == r[i - 1] + 1);
}

TEST_CASE("floor evaluations survive a 4x precision recheck") {
  const char* corpus[] = {"x^(3/2)", "x^sqrt(2)", "x*log(x)", "sqrt3*x^(5/2) + x*log(x)", "gamma_ln(x+1)",
                          "x^2/loglog(x)", "x^(5/2)*zeta(x)", "x^2*sin_inv_log(x)", "x^(1+1/x)*li(x)",
                          "log(x)^2"};
  std::mt19937_64 rng(10);
  for (int i = 0; i < 200; ++i) {
    HardyExpr a = parse(corpus[i % 10]);
    const mpz_class n = mpz_class(static_cast<unsigned long>(rng() % 1000000 + 20));
    FloorResult f = floor_eval(a, n);
    FloorResult g = floor_eval(a, n, 4 * f.bits);
    CHECK(f.floor == g.floor);
    CHECK(f.frac.contains(g.frac));
  }
}

TEST_CASE("evaluation errors") {
  CHECK_THROWS_AS(eval(parse("log(x)"), mpq_class(-1), 64), DomainError);
  CHECK_THROWS_AS(range_enumerate(parse("x"), 10, 5), PreconditionError);
  CHECK(validity_threshold(parse("loglog(x)")) == 2);
  CHECK(validity_threshold(parse("x")) == 1);
}
