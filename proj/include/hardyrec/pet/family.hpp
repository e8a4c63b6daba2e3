#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hardyrec/pet/poly.hpp"

namespace hr::pet {

// Opaque label for the function carried by a family member.  The engine only
// tracks conjugation, shifts by T^{p(h)} and products, never a meaning.
struct Tag {
  enum class Kind { Atom, Conj, Shift, Mul };
  Kind kind = Kind::Atom;
  std::string name;
  Poly shift;
  std::vector<Tag> kids;

  static Tag atom(std::string name);
  static Tag shifted(Poly by, Tag t);
  static Tag mul(Tag a, Tag b);
  Tag conj() const;
  std::string to_string() const;
  friend bool operator==(const Tag& a, const Tag& b);
};

struct Member {
  Poly p;
  Tag tag;
  // Provenance after a reduction step: p = src(n [+ h_new]) - p_k(n), where
  // merged linear members drop the constant `offset` = src(n + h_new) - src(n).
  int source = -1;
  bool shifted = false;
  Poly offset;
};

struct PolyFamily {
  std::vector<Member> members;
  int params = 0;

  std::size_t size() const { return members.size(); }
  int degree() const;
  std::vector<Poly> polys() const;
  std::string to_string() const;
};

// Members tagged f1, f2, ... in input order.
PolyFamily make_family(const std::vector<Poly>& polys);

// Pairs (i, j) whose difference has degree < 1, and members of degree < 1 as (i, i).
std::vector<std::pair<std::size_t, std::size_t>> distinctness_violations(const PolyFamily& fam);

// (d, w_d, ..., w_1).
struct FamilyType {
  std::vector<int> v;
  int d() const { return v.empty() ? 0 : v.front(); }
  std::string to_string() const;
  friend bool operator==(const FamilyType& a, const FamilyType& b) { return a.v == b.v; }
};

FamilyType family_type(const PolyFamily& fam);
bool type_less(const FamilyType& a, const FamilyType& b);

enum class StepCase { Case1, Case2 };
const char* to_string(StepCase c);

struct StepResult {
  PolyFamily family;
  StepCase kind = StepCase::Case1;
  std::size_t pk = 0;       // index of the subtracted member in the input family
  int new_param = 0;        // index j of the fresh parameter h_j
  bool dominated = true;    // p_k met the degree-domination condition
};

// One van der Corput step.  members[0] must have maximal degree.
StepResult vdc_step(const PolyFamily& fam);

struct TraceStep {
  PolyFamily family;  // family before the step
  FamilyType type;
  StepCase kind = StepCase::Case1;
  std::size_t pk = 0;
  int new_param = 0;
};

struct ReductionTrace {
  std::vector<TraceStep> steps;
  PolyFamily final_family;
  FamilyType final_type;
  std::size_t s = 0;  // size of the final linear family
  int r_tilde = 0;    // parameters introduced
  std::vector<FamilyType> types() const;
};

// Families roughly double per step, so a member cap guards against runaway inputs.
ReductionTrace reduce_to_linear(const PolyFamily& fam, int max_steps = 64, std::size_t max_members = 4096);

// sum_i l_i p(n + sum_j c_ij h_j) for p(n) = m n^k + q_{k-1} n^{k-1} + ... + q_0 with
// symbolic m and q.
struct ShiftTerm {
  long l = 0;
  std::vector<long> h;  // h[j] multiplies h_{j+1}
};

struct LeadingStructure {
  int degree = 0;         // degree in n of the combination
  Poly leading;           // its leading-in-n coefficient, over h and the symbols
  Poly P;                 // leading / m when it factors
  bool factors = false;   // leading = m * P(h) with P free of q
};

LeadingStructure leading_coeff_structure(int k, const std::vector<ShiftTerm>& terms, int r);

}  // namespace hr::pet
