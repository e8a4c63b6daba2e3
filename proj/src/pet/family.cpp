#include "hardyrec/pet/family.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "hardyrec/error.hpp"

namespace hr::pet {

Tag Tag::atom(std::string name) {
  Tag t;
  t.name = std::move(name);
  return t;
}

Tag Tag::shifted(Poly by, Tag t) {
  if (by.is_zero()) return t;
  Tag s;
  s.kind = Kind::Shift;
  s.shift = std::move(by);
  s.kids.push_back(std::move(t));
  return s;
}

Tag Tag::mul(Tag a, Tag b) {
  Tag m;
  m.kind = Kind::Mul;
  m.kids.push_back(std::move(a));
  m.kids.push_back(std::move(b));
  return m;
}

Tag Tag::conj() const {
  switch (kind) {
    case Kind::Atom: {
      Tag c;
      c.kind = Kind::Conj;
      c.kids.push_back(*this);
      return c;
    }
    case Kind::Conj:
      return kids[0];
    case Kind::Shift:
      return shifted(shift, kids[0].conj());
    case Kind::Mul:
      return mul(kids[0].conj(), kids[1].conj());
  }
  return *this;
}

std::string Tag::to_string() const {
  switch (kind) {
    case Kind::Atom: return name;
    case Kind::Conj: return "conj(" + kids[0].to_string() + ")";
    case Kind::Shift: return "T^{" + shift.to_string() + "}" + kids[0].to_string();
    case Kind::Mul: return kids[0].to_string() + "*" + kids[1].to_string();
  }
  return name;
}

bool operator==(const Tag& a, const Tag& b) {
  return a.kind == b.kind && a.name == b.name && a.shift == b.shift && a.kids == b.kids;
}

int PolyFamily::degree() const {
  int d = -1;
  for (const auto& m : members) d = std::max(d, m.p.degree());
  return d;
}

std::vector<Poly> PolyFamily::polys() const {
  std::vector<Poly> out;
  for (const auto& m : members) out.push_back(m.p);
  return out;
}

std::string PolyFamily::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < members.size(); ++i) {
    os << (i ? ", " : "") << members[i].p.to_string() << " [" << members[i].tag.to_string() << ']';
  }
  os << '}';
  return os.str();
}

PolyFamily make_family(const std::vector<Poly>& polys) {
  PolyFamily fam;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    Member m;
    m.p = polys[i];
    m.tag = Tag::atom("f" + std::to_string(i + 1));
    fam.members.push_back(std::move(m));
    fam.params = std::max(fam.params, polys[i].max_param());
  }
  return fam;
}

std::vector<std::pair<std::size_t, std::size_t>> distinctness_violations(const PolyFamily& fam) {
  std::vector<std::pair<std::size_t, std::size_t>> bad;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    if (fam.members[i].p.degree() < 1) bad.emplace_back(i, i);
    for (std::size_t j = i + 1; j < fam.size(); ++j) {
      if ((fam.members[i].p - fam.members[j].p).degree() < 1) bad.emplace_back(i, j);
    }
  }
  return bad;
}

std::string FamilyType::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

FamilyType family_type(const PolyFamily& fam) {
  const int d = fam.degree();
  FamilyType t;
  if (d < 1) throw PreconditionError("family type needs a non-constant family");
  t.v.push_back(d);
  for (int i = d; i >= 1; --i) {
    std::vector<Poly> leads;
    for (const auto& m : fam.members) {
      if (m.p.degree() != i) continue;
      Poly c = m.p.leading();
      if (std::find(leads.begin(), leads.end(), c) == leads.end()) leads.push_back(std::move(c));
    }
    t.v.push_back(static_cast<int>(leads.size()));
  }
  return t;
}

bool type_less(const FamilyType& a, const FamilyType& b) {
  return std::lexicographical_compare(a.v.begin(), a.v.end(), b.v.begin(), b.v.end());
}

const char* to_string(StepCase c) { return c == StepCase::Case1 ? "Case1" : "Case2"; }

namespace {

void require_distinct(const PolyFamily& fam, const char* where) {
  const auto bad = distinctness_violations(fam);
  if (bad.empty()) return;
  const auto [i, j] = bad.front();
  std::string msg = std::string(where) + ": ";
  if (i == j) {
    msg += "member " + std::to_string(i + 1) + " (" + fam.members[i].p.to_string() + ") is constant in n";
  } else {
    msg += "members " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " differ by " +
           (fam.members[i].p - fam.members[j].p).to_string() + ", constant in n";
  }
  throw DomainError(msg);
}

}  // namespace

StepResult vdc_step(const PolyFamily& fam) {
  if (fam.members.empty()) throw PreconditionError("empty family");
  require_distinct(fam, "input family is not essentially distinct");
  const int d = fam.degree();
  if (d < 2) throw PreconditionError("family is already linear");
  if (fam.members[0].p.degree() != d) throw PreconditionError("the first member must have maximal degree");

  const std::size_t k = fam.size();
  const int hn = fam.params + 1;
  int d0 = d;
  for (const auto& m : fam.members) d0 = std::min(d0, m.p.degree());

  std::vector<std::size_t> cand;
  for (std::size_t c = 0; c < k; ++c) {
    if (fam.members[c].p.degree() == d0 && (c != 0 || k == 1)) cand.push_back(c);
  }
  if (cand.empty()) cand.push_back(0);
  std::stable_sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
    return canonical_less(fam.members[a].p, fam.members[b].p);
  });
  auto dominated = [&](std::size_t c) {
    const Poly& pc = fam.members[c].p;
    const int D = (fam.members[0].p - pc).degree();
    for (std::size_t i = 0; i < k; ++i) {
      if (i != c && (fam.members[i].p - pc).degree() > D) return false;
      if ((fam.members[i].p.shift(hn) - pc).degree() > D) return false;
    }
    return true;
  };
  StepResult res;
  res.pk = cand.front();
  res.dominated = false;
  for (std::size_t c : cand) {
    if (dominated(c)) {
      res.pk = c;
      res.dominated = true;
      break;
    }
  }
  res.kind = d0 >= 2 ? StepCase::Case1 : StepCase::Case2;
  res.new_param = hn;

  const Poly& pk = fam.members[res.pk].p;
  PolyFamily out;
  out.params = hn;
  for (std::size_t i = 0; i < k; ++i) {
    const Member& src = fam.members[i];
    const bool linear = src.p.degree() == 1;
    if (res.kind == StepCase::Case2 && i == res.pk) continue;
    if (res.kind == StepCase::Case2 && linear) {
      // p_i(n + h) - p_k(n) = p_i(n) - p_k(n) + (p_i(n + h) - p_i(n)), the last term free of n.
      Member m;
      m.offset = src.p.shift(hn) - src.p;
      m.p = src.p - pk;
      m.tag = Tag::mul(Tag::shifted(m.offset, src.tag.conj()), src.tag);
      m.source = static_cast<int>(i);
      out.members.push_back(std::move(m));
      continue;
    }
    Member sh;
    sh.p = src.p.shift(hn) - pk;
    sh.tag = src.tag.conj();
    sh.source = static_cast<int>(i);
    sh.shifted = true;
    out.members.push_back(std::move(sh));
    if (i != res.pk) {
      Member un;
      un.p = src.p - pk;
      un.tag = src.tag;
      un.source = static_cast<int>(i);
      out.members.push_back(std::move(un));
    }
  }
  require_distinct(out, "reduction produced a degenerate family");
  res.family = std::move(out);
  return res;
}

std::vector<FamilyType> ReductionTrace::types() const {
  std::vector<FamilyType> t;
  for (const auto& s : steps) t.push_back(s.type);
  t.push_back(final_type);
  return t;
}

ReductionTrace reduce_to_linear(const PolyFamily& fam, int max_steps, std::size_t max_members) {
  ReductionTrace tr;
  PolyFamily cur = fam;
  require_distinct(cur, "input family is not essentially distinct");
  FamilyType t = family_type(cur);
  const int start_params = cur.params;
  while (t.d() > 1) {
    if (static_cast<int>(tr.steps.size()) >= max_steps) {
      throw Error("reduction exceeded " + std::to_string(max_steps) + " steps");
    }
    StepResult r = vdc_step(cur);
    if (r.family.size() > max_members) {
      throw Error("reduction grew past " + std::to_string(max_members) + " members at type " + t.to_string());
    }
    FamilyType nt = family_type(r.family);
    if (!type_less(nt, t)) {
      throw Error("type did not decrease: " + t.to_string() + " -> " + nt.to_string());
    }
    tr.steps.push_back({std::move(cur), t, r.kind, r.pk, r.new_param});
    cur = std::move(r.family);
    t = nt;
  }
  tr.final_family = std::move(cur);
  tr.final_type = t;
  tr.s = tr.final_family.size();
  tr.r_tilde = tr.final_family.params - start_params;
  return tr;
}

LeadingStructure leading_coeff_structure(int k, const std::vector<ShiftTerm>& terms, int r) {
  if (k < 1) throw PreconditionError("degree k must be positive");
  if (r < 0) throw PreconditionError("parameter count must be non-negative");
  // Variables: n, h_1..h_r, m, q_0..q_{k-1}.
  const int m_var = r + 1;
  auto q_var = [&](int i) { return r + 2 + i; };
  Poly p = Poly::h(m_var) * Poly::n().pow(static_cast<unsigned>(k));
  for (int i = 0; i < k; ++i) p += Poly::h(q_var(i)) * Poly::n().pow(static_cast<unsigned>(i));

  Poly total;
  for (const auto& t : terms) {
    if (static_cast<int>(t.h.size()) > r) throw PreconditionError("shift uses more than r parameters");
    Poly by;
    for (std::size_t j = 0; j < t.h.size(); ++j) by += mpz_class(t.h[j]) * Poly::h(static_cast<int>(j) + 1);
    total += mpz_class(t.l) * p.shift(by);
  }
  if (total.is_zero()) throw DomainError("combination is identically zero");

  LeadingStructure out;
  out.degree = total.degree();
  out.leading = total.leading();
  out.factors = true;
  for (const auto& [e, c] : out.leading.terms()) {
    for (std::size_t i = 1; i < e.size(); ++i) {
      const int v = static_cast<int>(i);
      if ((v == m_var && e[i] != 1) || (v > m_var && e[i] != 0)) out.factors = false;
    }
    if (static_cast<int>(e.size()) <= m_var) out.factors = false;
  }
  if (out.factors) {
    Poly P;
    for (const auto& [e, c] : out.leading.terms()) {
      Exponents f = e;
      f[static_cast<std::size_t>(m_var)] = 0;
      P += Poly::monomial(std::move(f), c);
    }
    out.P = std::move(P);
  }
  return out;
}

}  // namespace hr::pet
