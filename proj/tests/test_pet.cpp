#include <algorithm>
#include <chrono>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "hardyrec/error.hpp"
#include "hardyrec/pet/family.hpp"

using namespace hr;
using namespace hr::pet;

namespace {

PolyFamily fam(const char* s) { return make_family(parse_poly_list(s)); }

std::vector<std::string> poly_strings(const PolyFamily& f) {
  std::vector<std::string> out;
  for (const auto& m : f.members) out.push_back(m.p.to_string());
  return out;
}

std::vector<std::string> tag_strings(const PolyFamily& f) {
  std::vector<std::string> out;
  for (const auto& m : f.members) out.push_back(m.tag.to_string());
  return out;
}

std::vector<std::string> normalized(const char* list) {
  std::vector<std::string> out;
  for (const auto& p : parse_poly_list(list)) out.push_back(p.to_string());
  return out;
}

FamilyType T(std::vector<int> v) { return FamilyType{std::move(v)}; }

}  // namespace

TEST_CASE("polynomial arithmetic and parsing") {
  Poly a = parse_poly("(n+h1)^2 - n");
  CHECK(a.to_string() == "n^2 + 2*h1*n - n + h1^2");
  CHECK(a.degree() == 2);
  CHECK(a.leading() == Poly::constant(1));
  CHECK(a.coeff(1) == parse_poly("2h1 - 1"));
  CHECK(parse_poly("2(h1+h2)n") == parse_poly("2*h1*n + 2*h2*n"));
  CHECK(parse_poly("n^2").shift(1) == parse_poly("n^2 + 2*h1*n + h1^2"));
  CHECK(parse_poly("n - n").is_zero());
  CHECK(parse_poly("n^3 + 2h2").eval({mpz_class(2), mpz_class(0), mpz_class(5)}) == 18);
  CHECK_THROWS_AS(parse_poly("n + x"), ParseError);
  CHECK_THROWS_AS(parse_poly("n^"), ParseError);
  CHECK_THROWS_AS(parse_poly_list("n, (n"), ParseError);
}

TEST_CASE("family types") {
  CHECK(family_type(fam("n, 2n, n^2")) == T({2, 1, 2}));
  CHECK(family_type(fam("n")) == T({1, 1}));
  CHECK(family_type(fam("n^2, n^2 + n, 2n^2")) == T({2, 2, 0}));
  CHECK(family_type(fam("h1*n^2 + n, h1*n^2, n")) == T({2, 1, 1}));
}

TEST_CASE("type ordering") {
  CHECK(type_less(T({2, 1, 1}), T({2, 1, 2})));
  CHECK(type_less(T({1, 7}), T({2, 1, 0})));
  CHECK(!type_less(T({2, 1, 2}), T({2, 1, 2})));
  CHECK(!type_less(T({3, 1, 0, 0}), T({2, 9, 9})));
}

TEST_CASE("first step of the worked reduction") {
  StepResult r = vdc_step(fam("n^2, 2n, n"));
  CHECK(r.kind == StepCase::Case2);
  CHECK(r.pk == 2);
  CHECK(r.new_param == 1);
  CHECK(poly_strings(r.family) == normalized("(n+h1)^2 - n, n^2 - n, n"));
  CHECK(tag_strings(r.family) == std::vector<std::string>{"conj(f1)", "f1", "T^{2*h1}conj(f2)*f2"});
  CHECK(family_type(r.family) == T({2, 1, 1}));
}

TEST_CASE("already linear families are rejected") {
  CHECK_THROWS_AS(vdc_step(fam("n, 2n")), PreconditionError);
  CHECK_THROWS_AS(vdc_step(fam("n, n^2")), PreconditionError);
  CHECK_THROWS_AS(vdc_step(fam("n^2, n^2 + 1")), DomainError);
}

TEST_CASE("case 1 on two quadratic-cubic members") {
  StepResult r = vdc_step(fam("n^3, n^2"));
  CHECK(r.kind == StepCase::Case1);
  CHECK(r.pk == 1);
  CHECK(poly_strings(r.family) == normalized("(n+h1)^3 - n^2, n^3 - n^2, (n+h1)^2 - n^2"));
}

TEST_CASE("full reduction reproduces the worked example") {
  const auto t0 = std::chrono::steady_clock::now();
  ReductionTrace tr = reduce_to_linear(fam("n^2, 2n, n"));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 1.0);
  const auto types = tr.types();
  REQUIRE(types.size() == 4);
  CHECK(types[0] == T({2, 1, 2}));
  CHECK(types[1] == T({2, 1, 1}));
  CHECK(types[2] == T({2, 1, 0}));
  CHECK(types[3] == T({1, 7}));
  CHECK(tr.s == 7);
  CHECK(tr.r_tilde == 3);
  CHECK(tr.steps[2].kind == StepCase::Case1);

  // Second step family, term by term.
  CHECK(poly_strings(tr.steps[2].family) ==
        normalized("(n+h1+h2)^2 - 2n - h2, (n+h1)^2 - 2n, (n+h2)^2 - 2n - h2, n^2 - 2n"));
  CHECK(tag_strings(tr.steps[2].family) == std::vector<std::string>{"f1", "conj(f1)", "conj(f1)", "f1"});

  // Final linear family, in order, with its tags.
  CHECK(poly_strings(tr.final_family) ==
        normalized("2(h1+h2+h3)n + (h1+h2+h3)^2 - h2 - 2h3, 2(h1+h2)n + (h1+h2)^2 - h2,"
                   "2(h1+h3)n + (h1+h3)^2 - 2h3, 2h1 n + h1^2,"
                   "2(h2+h3)n + (h2+h3)^2 - h2 - 2h3, 2h2 n + h2^2 - h2, 2h3 n + h3^2 - 2h3"));
  CHECK(tag_strings(tr.final_family) ==
        std::vector<std::string>{"conj(f1)", "f1", "f1", "conj(f1)", "f1", "conj(f1)", "conj(f1)"});

  std::set<std::string> leads;
  for (const auto& m : tr.final_family.members) leads.insert(m.p.leading().to_string());
  std::set<std::string> want;
  for (const char* s : {"2h1+2h2+2h3", "2h1+2h2", "2h1+2h3", "2h1", "2h2+2h3", "2h2", "2h3"}) {
    want.insert(parse_poly(s).to_string());
  }
  CHECK(leads == want);
}

TEST_CASE("a single cubic descends one degree per step") {
  ReductionTrace tr = reduce_to_linear(fam("n^3"));
  const auto types = tr.types();
  REQUIRE(types.size() == 3);
  CHECK(types[0].d() == 3);
  CHECK(types[1].d() == 2);
  CHECK(types[2].d() == 1);
  CHECK(reduce_to_linear(fam("n")).steps.empty());
  CHECK_THROWS_AS(reduce_to_linear(fam("n^3, n^2"), 64, 512), Error);
}

TEST_CASE("reductions descend and keep the distinguished tag") {
  const char* corpus[] = {"n^2, 2n, n", "n^3", "n^2, n^2 + n, 2n^2", "n^2, 3n^2, n", "n^2 + n, 5n",
                          "n^2, 2n^2, 3n, n", "h1*n^2 + n, n^2"};
  for (const char* s : corpus) {
    INFO(s);
    ReductionTrace tr = reduce_to_linear(fam(s));
    const auto types = tr.types();
    for (std::size_t i = 1; i < types.size(); ++i) CHECK(type_less(types[i], types[i - 1]));
    CHECK(tr.final_type.d() == 1);
    CHECK(distinctness_violations(tr.final_family).empty());
    bool f1 = false;
    for (const auto& m : tr.final_family.members) f1 = f1 || m.tag == Tag::atom("f1");
    CHECK(f1);
  }
}

TEST_CASE("each step output is the matching difference of inputs") {
  std::mt19937_64 rng(77);
  const char* corpus[] = {"n^2, 2n, n", "n^3, n^2", "n^3, 2n, 3n", "2n^3 + n, n^2, n"};
  for (const char* s : corpus) {
    PolyFamily cur = fam(s);
    for (int step = 0; step < 4 && cur.degree() > 1; ++step) {
      StepResult r = vdc_step(cur);
      const Poly& pk = cur.members[r.pk].p;
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<mpz_class> pt(static_cast<std::size_t>(r.new_param) + 1);
        for (auto& v : pt) v = static_cast<long>(rng() % 41) - 20;
        std::vector<mpz_class> shifted = pt;
        shifted[0] = pt[0] + pt[static_cast<std::size_t>(r.new_param)];
        for (const auto& m : r.family.members) {
          const Poly& src = cur.members[static_cast<std::size_t>(m.source)].p;
          const mpz_class lhs = m.p.eval(pt) + m.offset.eval(pt);
          const mpz_class rhs = (m.shifted || !m.offset.is_zero() ? src.eval(shifted) : src.eval(pt)) - pk.eval(pt);
          CHECK(lhs == rhs);
        }
      }
      cur = r.family;
    }
  }
}

TEST_CASE("leading coefficient structure") {
  LeadingStructure a = leading_coeff_structure(1, {{1, {1}}, {-1, {}}}, 1);
  CHECK(a.factors);
  CHECK(a.degree == 0);
  CHECK(a.P == parse_poly("h1"));

  LeadingStructure b = leading_coeff_structure(2, {{1, {1}}, {-2, {}}, {1, {-1}}}, 1);
  CHECK(b.factors);
  CHECK(b.P == parse_poly("2h1^2"));

  LeadingStructure c = leading_coeff_structure(3, {{1, {1, 1}}, {-1, {1}}, {-1, {0, 1}}, {1, {}}}, 2);
  CHECK(c.factors);
  CHECK(c.P == parse_poly("6h1h2"));

  CHECK_THROWS_AS(leading_coeff_structure(2, {{0, {1}}, {0, {}}}, 1), DomainError);
}

TEST_CASE("leading coefficients never involve the lower-order terms") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 4);
    const int r = 1 + static_cast<int>(rng() % 3);
    std::vector<ShiftTerm> terms;
    const int count = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < count; ++i) {
      ShiftTerm t;
      t.l = static_cast<long>(rng() % 7) - 3;
      for (int j = 0; j < r; ++j) t.h.push_back(static_cast<long>(rng() % 2));
      terms.push_back(t);
    }
    try {
      LeadingStructure s = leading_coeff_structure(k, terms, r);
      // When the m-part vanishes the leading term comes from q; otherwise it factors through m.
      long lsum = 0;
      for (const auto& t : terms) lsum += t.l;
      if (lsum != 0) {
        CHECK(s.factors);
        CHECK(s.degree == k);
        CHECK(s.P == Poly::constant(lsum));
      }
      if (s.factors) CHECK(s.P.max_param() <= r);
    } catch (const DomainError&) {
    }
  }
}
