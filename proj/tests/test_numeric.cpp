#include <random>

#include "doctest.h"
#include "hardyrec/error.hpp"
#include "hardyrec/numeric/angle.hpp"
#include "hardyrec/numeric/interval.hpp"
#include "hardyrec/numeric/special.hpp"

using namespace hr;

namespace {

// Reference values were produced with mpmath at 30 digits.
bool encloses(const Interval& iv, const char* dec) {
  BigFloat v(200);
  mpfr_set_str(v.get(), dec, 10, MPFR_RNDN);
  BigFloat tol(200);
  mpfr_abs(tol.get(), v.get(), MPFR_RNDN);
  mpfr_mul_d(tol.get(), tol.get(), 1e-27, MPFR_RNDN);
  Interval grown(iv);
  mpfr_sub(grown.lo().get(), grown.lo().get(), tol.get(), MPFR_RNDD);
  mpfr_add(grown.hi().get(), grown.hi().get(), tol.get(), MPFR_RNDU);
  return mpfr_lessequal_p(grown.lo().get(), v.get()) && mpfr_lessequal_p(v.get(), grown.hi().get());
}

}  // namespace

TEST_CASE("interval arithmetic encloses exact rational results") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-1000000, 1000000);
  for (int i = 0; i < 500; ++i) {
    mpq_class a(d(rng), 997), b(d(rng) | 1, 991);
    a.canonicalize();
    b.canonicalize();
    Interval ia = Interval::from_q(a, 64), ib = Interval::from_q(b, 64);
    for (auto [iv, exact] : {std::pair{ia + ib, mpq_class(a + b)}, std::pair{ia - ib, mpq_class(a - b)},
                             std::pair{ia * ib, mpq_class(a * b)}, std::pair{ia / ib, mpq_class(a / b)}}) {
      Interval e = Interval::from_q(exact, 256);
      CHECK(mpfr_lessequal_p(iv.lo().get(), e.lo().get()));
      CHECK(mpfr_lessequal_p(e.hi().get(), iv.hi().get()));
    }
  }
}

TEST_CASE("division by an interval containing zero asks for precision") {
  Interval z(64);
  mpfr_set_d(z.lo().get(), -1e-30, MPFR_RNDD);
  mpfr_set_d(z.hi().get(), 1e-30, MPFR_RNDU);
  CHECK_THROWS_AS(Interval::from_si(1, 64) / z, NeedsPrecision);
  CHECK_THROWS_AS(Interval::from_si(1, 64) / Interval::from_si(0, 64), DomainError);
  CHECK_THROWS_AS(log(Interval::from_si(-2, 64)), DomainError);
}

TEST_CASE("sin enclosure reaches the extremum inside the interval") {
  Interval a = Interval::from_q(mpq_class(3, 2), 64);
  Interval b = Interval::from_q(mpq_class(8, 5), 64);
  Interval s = sin(Interval::hull(a, b));
  CHECK(mpfr_cmp_ui(s.hi().get(), 1) == 0);
  Interval c = cos(Interval::from_si(0, 64));
  CHECK(mpfr_cmp_ui(c.hi().get(), 1) == 0);
  CHECK(mpfr_cmp_d(c.lo().get(), 0.9999999) > 0);
}

TEST_CASE("pow with an even integer exponent over a sign change") {
  Interval x(64);
  mpfr_set_si(x.lo().get(), -2, MPFR_RNDD);
  mpfr_set_si(x.hi().get(), 3, MPFR_RNDU);
  Interval y = pow_z(x, 2);
  CHECK(y.lo().is_zero());
  CHECK(mpfr_cmp_ui(y.hi().get(), 9) == 0);
}

TEST_CASE("Bernoulli numbers") {
  CHECK(bernoulli_even(0) == 1);
  CHECK(bernoulli_even(1) == mpq_class(1, 6));
  CHECK(bernoulli_even(2) == mpq_class(-1, 30));
  CHECK(bernoulli_even(6) == mpq_class(-691, 2730));
}

TEST_CASE("special functions against reference values") {
  const mpfr_prec_t p = 128;
  CHECK(encloses(li2(Interval::from_si(3, p)), "1.11842481454969918803233347815"));
  CHECK(encloses(li2(Interval::from_si(100, p)), "29.0809778039621371410571524498"));
  CHECK(encloses(polygamma(1, Interval::from_si(10, p)), "0.105166335681685746122201006908"));
  CHECK(encloses(polygamma(2, Interval::from_si(10, p)), "-0.0110498349708020674621037490668"));
  CHECK(encloses(polygamma(3, Interval::from_si(50, p)), "0.0000164863987206820530843608128148"));
  CHECK(encloses(zeta_deriv(1, Interval::from_si(3, p)), "-0.198126242885636853330681821503"));
  CHECK(encloses(zeta_deriv(2, Interval::from_si(50, p)), "4.26728000323258207334928353841e-16"));
  CHECK(encloses(lngamma(Interval::from_q(mpq_class(1, 2), p)), "0.572364942924700087071713675677"));
  CHECK(encloses(lngamma(Interval::from_si(1000000, p)), "12815504.569147611659976971785"));
}

TEST_CASE("special function enclosures are tight") {
  Interval v = polygamma(1, Interval::from_si(10, 128));
  CHECK(v.rad().to_double() < 1e-30);
  Interval z = zeta_deriv(1, Interval::from_si(3, 128));
  CHECK(z.rad().to_double() < 1e-30);
}

TEST_CASE("fixed-point angles wrap integer multiples exactly") {
  Interval s2 = sqrt(Interval::from_si(2, 256));
  Angle a = Angle::from_interval(s2);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const std::int64_t k = static_cast<std::int64_t>(rng() % 1000000000000ULL);
    Interval prod = s2 * Interval::from_z(mpz_class(std::to_string(k)), 256);
    mpz_class fl;
    Interval fr = floor_mod1(prod, &fl);
    CHECK((a * k).to_double() == doctest::Approx(fr.mid_d()).epsilon(1e-12));
  }
  CHECK(Angle::from_double(0.5).raw() == (u128(1) << 127));
  CHECK((Angle::from_double(0.5) * std::int64_t{2}).raw() == 0);
  CHECK(Angle::from_double(0.25).dist() == doctest::Approx(0.25));
  CHECK(Angle::from_double(0.75).dist() == doctest::Approx(0.25));
}
