#include <algorithm>
#include <cmath>
#include <numbers>

#include "hardyrec/core/evaluate.hpp"
#include "hardyrec/core/growth.hpp"
#include "hardyrec/equi/equi.hpp"
#include "hardyrec/error.hpp"
#include "hardyrec/numeric/angle.hpp"
#include "hardyrec/sequence/certified.hpp"
#include "hardyrec/util/parallel.hpp"

namespace hr::equi {

namespace {

constexpr double kPhaseTol = 1e-9;
constexpr long kMaxTerms = 50000000;

std::complex<double> e_of(double t) {
  const double th = 2.0 * std::numbers::pi * t;
  return {std::cos(th), std::sin(th)};
}

double lower_abs(const Interval& v) {
  if (v.positive()) return v.lo().to_double(MPFR_RNDD);
  if (v.negative()) return -v.hi().to_double(MPFR_RNDU);
  return 0.0;
}

// a + b*c with a, b rational, b != 0 and c a named constant.
bool certified_irrational(const HardyExpr& e) {
  const HardyExpr s = simplify(e);
  auto scaled_named = [](const HardyExpr& t) {
    if (t.kind() == Kind::Named) return true;
    if (t.kind() != Kind::Product || t.kids().size() != 2) return false;
    return t.kid(0).kind() == Kind::Constant && t.kid(1).kind() == Kind::Named;
  };
  if (scaled_named(s)) return true;
  if (s.kind() != Kind::Sum || s.kids().size() != 2) return false;
  return (s.kid(0).kind() == Kind::Constant && scaled_named(s.kid(1))) ||
         (s.kid(1).kind() == Kind::Constant && scaled_named(s.kid(0)));
}

Interval constant_value(const HardyExpr& e, mpfr_prec_t prec) {
  if (!e.is_constant_expr()) throw PreconditionError("expected a constant, got " + to_string(e));
  return eval_interval(e, Interval::from_si(1, prec), prec);
}

mpq_class frac_q(const mpq_class& x) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return x - f;
}

Angle angle_of(const mpq_class& x) { return Angle::from_interval(Interval::from_q(frac_q(x), 256)); }

// Position of x relative to [lo, hi): -1 below, 0 inside, 1 at or above hi.
int locate(const HardyExpr& f, const mpz_class& n, const mpq_class& lo, const mpq_class& hi) {
  for (int bits = 0; bits <= kPrecisionCap; bits = bits == 0 ? 256 : bits * 2) {
    const FloorResult r = floor_eval(f, n, bits);
    const Interval& fr = r.frac.enclosure();
    const mpfr_prec_t p = fr.prec() + 64;
    const Interval L = Interval::from_q(lo, p), H = Interval::from_q(hi, p);
    const bool above_lo = cmp(fr.lo(), L.hi()) >= 0, below_lo = cmp(fr.hi(), L.lo()) < 0;
    const bool below_hi = cmp(fr.hi(), H.lo()) < 0, above_hi = cmp(fr.lo(), H.hi()) >= 0;
    if (below_lo) return -1;
    if (above_hi) return 1;
    if (above_lo && below_hi) return 0;
    if (auto q = exact_value(f, mpq_class(n))) {
      const mpq_class x = frac_q(*q);
      return x < lo ? -1 : (x >= hi ? 1 : 0);
    }
  }
  throw FloorAmbiguity(n.get_str(), kPrecisionCap);
}

}  // namespace

Interval certified_frac(const HardyExpr& f, const mpz_class& n, double tol) {
  int bits = 0;
  for (;;) {
    const FloorResult r = floor_eval(f, n, bits);
    if (r.frac.radius_d() < tol) return r.frac.enclosure();
    bits = std::max(2 * r.bits, 128);
    if (bits > kPrecisionCap) throw PrecisionCapExceeded("fractional part of " + to_string(f) + " at " + n.get_str());
  }
}

Discrepancy discrepancy(const std::vector<double>& points) {
  if (points.empty()) throw PreconditionError("discrepancy of an empty point set");
  std::vector<double> x(points);
  std::sort(x.begin(), x.end());
  const double N = static_cast<double>(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d = std::max({d, (static_cast<double>(i) + 1) / N - x[i], x[i] - static_cast<double>(i) / N});
  }
  return {std::min(d, 1.0), 0};
}

Discrepancy discrepancy(const Eigen::MatrixXd& points, int grid) {
  const long N = points.rows();
  const long d = points.cols();
  if (N == 0) throw PreconditionError("discrepancy of an empty point set");
  if (d < 1 || d > 3) throw PreconditionError("discrepancy supports dimensions 1 to 3");
  if (d == 1) {
    std::vector<double> x(points.data(), points.data() + N);
    return discrepancy(x);
  }
  if (grid < 1) throw PreconditionError("grid resolution must be positive");
  const long g = grid, side = g + 1;
  const long cells = d == 2 ? side * side : side * side * side;
  // cnt[j] = #points with floor(x_i g) < j_i for all i, indexed over corners j in {0..g}^d.
  std::vector<long> cnt(static_cast<std::size_t>(cells), 0);
  auto index = [&](const long* j) {
    long idx = 0;
    for (long i = 0; i < d; ++i) idx = idx * side + j[i];
    return idx;
  };
  for (long r = 0; r < N; ++r) {
    long j[3];
    for (long i = 0; i < d; ++i) {
      const double v = points(r, i);
      if (!(v >= 0.0 && v < 1.0)) throw PreconditionError("point outside [0,1)^d");
      j[i] = std::min(g - 1, static_cast<long>(std::floor(v * static_cast<double>(g)))) + 1;
    }
    ++cnt[static_cast<std::size_t>(index(j))];
  }
  for (long axis = 0; axis < d; ++axis) {
    const long stride = axis == d - 1 ? 1 : (axis == d - 2 ? side : side * side);
    for (long idx = 0; idx < cells; ++idx) {
      if ((idx / stride) % side != 0) cnt[static_cast<std::size_t>(idx)] += cnt[static_cast<std::size_t>(idx - stride)];
    }
  }
  // Any anchored box lies between the grid boxes with corners b - 1 and b.
  double best = 0;
  const double Nd = static_cast<double>(N), gd = static_cast<double>(g);
  long j[3] = {1, 1, 1};
  for (;;) {
    long jl[3];
    double vol_hi = 1, vol_lo = 1;
    for (long i = 0; i < d; ++i) {
      jl[i] = j[i] - 1;
      vol_hi *= static_cast<double>(j[i]) / gd;
      vol_lo *= static_cast<double>(jl[i]) / gd;
    }
    const double a_hi = static_cast<double>(cnt[static_cast<std::size_t>(index(j))]) / Nd;
    const double a_lo = static_cast<double>(cnt[static_cast<std::size_t>(index(jl))]) / Nd;
    best = std::max({best, a_hi - vol_lo, vol_hi - a_lo});
    long i = d - 1;
    while (i >= 0 && j[i] == g) j[i--] = 1;
    if (i < 0) break;
    ++j[i];
  }
  return {std::min(best, 1.0), grid};
}

std::complex<double> exp_sum(const HardyExpr& f, const mpz_class& k, const mpz_class& l, long s, int jobs) {
  if (l < k) throw PreconditionError("empty summation range");
  if (s == 0) throw PreconditionError("frequency s must be non-zero");
  const mpz_class len = l - k + 1;
  if (len > kMaxTerms) throw PreconditionError("summation range too long");
  const auto count = static_cast<std::size_t>(len.get_ui());
  std::vector<std::complex<double>> terms(count);
  const double tol = kPhaseTol / (2.0 * std::numbers::pi * static_cast<double>(std::labs(s)));
  const std::size_t chunk = 1024;
  parallel_for((count + chunk - 1) / chunk, jobs, [&](std::size_t c) {
    const std::size_t end = std::min(count, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      const Interval fr = certified_frac(f, k + static_cast<unsigned long>(i), tol);
      // s * frac is reduced in double; |s| * 2^-53 stays far below the tolerance.
      const double t = static_cast<double>(s) * fr.mid_d();
      terms[i] = e_of(t - std::floor(t));
    }
  });
  std::complex<double> acc = 0;
  for (const auto& t : terms) acc += t;
  return acc;
}

std::complex<double> weyl_sum(const HardyExpr& f, const mpz_class& k, const mpz_class& l, long s, int jobs) {
  const std::complex<double> sum = exp_sum(f, k, l, s, jobs);
  return sum / mpz_class(l - k + 1).get_d();
}

VdcBoundInput make_vdc_input(const HardyExpr& f, const mpz_class& k, const mpz_class& l) {
  if (l <= k) throw PreconditionError("van der Corput needs k < l");
  if (k < 1) throw PreconditionError("van der Corput range must start at 1 or later");
  VdcBoundInput in;
  in.f = f;
  in.k = k;
  in.l = l;
  const HardyExpr f2 = simplify(differentiate(f, 2));
  const HardyExpr f3 = simplify(differentiate(f, 3));
  constexpr mpfr_prec_t prec = 160;

  bool monotone = f3.is_const(0) || f2.is_constant_expr();
  if (!monotone) {
    try {
      monotone = eventual_sign(f3).threshold <= k;
    } catch (const Error&) {
      monotone = false;
    }
  }
  if (monotone) {
    const Interval a = eval_interval(f2, Interval::from_z(k, prec), prec);
    const Interval b = eval_interval(f2, Interval::from_z(l, prec), prec);
    if (a.positive() && b.positive()) in.sign = 1;
    else if (a.negative() && b.negative()) in.sign = -1;
    else throw PreconditionError("f'' does not have constant sign on [k, l]");
    in.rho = std::min(lower_abs(a), lower_abs(b));
    return in;
  }
  // Enclose f'' on 64 subintervals.
  constexpr long pieces = 64;
  in.rho = INFINITY;
  const mpz_class width = l - k;
  for (long i = 0; i < pieces; ++i) {
    const mpz_class lo = k + width * i / pieces, hi = k + width * (i + 1) / pieces;
    const Interval x(Interval::from_z(lo, prec).lo(), Interval::from_z(hi, prec).hi());
    const Interval v = eval_interval(f2, x, prec);
    const int sg = v.positive() ? 1 : (v.negative() ? -1 : 0);
    if (sg == 0 || (in.sign != 0 && sg != in.sign)) {
      throw PreconditionError("f'' does not have certified constant sign on [k, l]");
    }
    in.sign = sg;
    in.rho = std::min(in.rho, lower_abs(v));
  }
  return in;
}

double vdc_bound(const VdcBoundInput& in) {
  if (!(in.rho > 0)) throw PreconditionError("rho must be positive");
  const VdcBoundInput cert = make_vdc_input(in.f, in.k, in.l);
  if (in.sign != 0 && in.sign != cert.sign) throw PreconditionError("sign of f'' disagrees with the certified sign");
  if (in.rho > cert.rho) throw PreconditionError("rho exceeds the certified lower bound of |f''|");
  constexpr mpfr_prec_t prec = 160;
  const HardyExpr f1 = simplify(differentiate(in.f, 1));
  const Interval d = abs(eval_interval(f1, Interval::from_z(in.l, prec), prec) -
                         eval_interval(f1, Interval::from_z(in.k, prec), prec));
  BigFloat r(prec);
  mpfr_set_d(r.get(), in.rho, MPFR_RNDN);
  const Interval rho = Interval::from_point(r, prec);
  const Interval four = Interval::from_si(4, prec);
  const Interval bound = (d + 2) * (four / sqrt(rho) + 3);
  return bound.hi().to_double(MPFR_RNDU);
}

double SmallFracThreshold::operator()(long m) const {
  switch (kind) {
    case Kind::InvLog: return 1.0 / std::log(static_cast<double>(m) + 2.0);
    case Kind::Power: return std::pow(static_cast<double>(m), -theta);
    case Kind::Constant: return theta;
  }
  return 0;
}

double density_smallfrac(const std::vector<HardyExpr>& B, const std::vector<int>& K, const SmallFracThreshold& e,
                         long M, int jobs) {
  if (M < 1) throw PreconditionError("M must be positive");
  if (B.empty() || K.empty()) throw PreconditionError("B and K must be non-empty");
  if (e.kind == SmallFracThreshold::Kind::Constant) throw PreconditionError("e_m must decrease to 0, got a constant");
  if (e.kind == SmallFracThreshold::Kind::Power && !(e.theta > 0)) {
    throw PreconditionError("e_m = m^-theta needs theta > 0");
  }
  for (int k : K) {
    if (k < 1 || k > 3) throw PreconditionError("exponents in K must lie in 1..3");
  }
  const double kmax = *std::max_element(K.begin(), K.end());
  if (kmax * std::log2(static_cast<double>(M)) > 100) throw PreconditionError("m^k exceeds 2^100");
  std::vector<Angle> alpha;
  std::vector<Interval> alpha_iv;
  for (const auto& b : B) {
    if (exact_value(simplify(b), 1)) throw PreconditionError("alpha " + to_string(b) + " is rational");
    if (!certified_irrational(b)) throw PreconditionError("irrationality of " + to_string(b) + " is not certified");
    alpha_iv.push_back(constant_value(b, 320));
    alpha.push_back(Angle::from_interval(alpha_iv.back()));
  }

  auto hit_exact = [&](std::size_t ai, long m, int k) {
    constexpr mpfr_prec_t p = 320;
    mpz_class fl;
    const Interval fr = floor_mod1(alpha_iv[ai] * pow_z(Interval::from_si(m, p), k), &fl);
    const Interval d1 = fr, d2 = Interval::from_si(1, p) - fr;
    Interval em(p);
    if (e.kind == SmallFracThreshold::Kind::InvLog) {
      em = Interval::from_si(1, p) / log(Interval::from_si(m + 2, p));
    } else {
      BigFloat th(p);
      mpfr_set_d(th.get(), e.theta, MPFR_RNDN);
      em = pow(Interval::from_si(m, p), -Interval::from_point(th, p));
    }
    auto le = [&](const Interval& x) -> int {
      if (cmp(x.hi(), em.lo()) <= 0) return 1;
      if (cmp(x.lo(), em.hi()) > 0) return 0;
      return -1;
    };
    const int a = le(d1), b = le(d2);
    if (a == 1 || b == 1) return true;
    if (a == 0 && b == 0) return false;
    throw FloorAmbiguity(std::to_string(m), p);
  };

  const long chunk = 8192;
  const long nchunks = (M + chunk - 1) / chunk;
  std::vector<long> counts(static_cast<std::size_t>(nchunks), 0);
  parallel_for(static_cast<std::size_t>(nchunks), jobs, [&](std::size_t c) {
    const long m_lo = static_cast<long>(c) * chunk + 1, m_hi = std::min(M, m_lo + chunk - 1);
    long cnt = 0;
    for (long m = m_lo; m <= m_hi; ++m) {
      const double em = e(m);
      bool hit = false;
      for (std::size_t ai = 0; ai < alpha.size() && !hit; ++ai) {
        for (int k : K) {
          u128 mk = 1;
          for (int i = 0; i < k; ++i) mk *= static_cast<u128>(m);
          const double d = (alpha[ai] * mk).dist();
          // Angle error is below m^k 2^-127, far inside this margin.
          if (std::abs(d - em) < 1e-9 * std::max(em, 1e-300)) {
            if (hit_exact(ai, m, k)) hit = true;
          } else if (d <= em) {
            hit = true;
          }
          if (hit) break;
        }
      }
      cnt += hit ? 1 : 0;
    }
    counts[c] = cnt;
  });
  long total = 0;
  for (long c : counts) total += c;
  return static_cast<double>(total) / static_cast<double>(M);
}

TorusEquiVerdict torus_equi_check(const HardyExpr& alpha, int d, const std::vector<mpq_class>& q, long N, double delta,
                                  double C) {
  if (!(delta > 0 && delta < 1)) throw PreconditionError("delta must lie in (0, 1)");
  if (d < 1) throw PreconditionError("degree d must be at least 1");
  if (static_cast<int>(q.size()) > d) throw PreconditionError("q must have degree below d");
  if (N < 1) throw PreconditionError("N must be positive");
  if (!(C > 0)) throw PreconditionError("C must be positive");
  if (d * std::log2(static_cast<double>(N)) > 96) throw PreconditionError("N^d exceeds 2^96");

  const std::optional<mpq_class> exact = exact_value(simplify(alpha), 1);
  Angle a_ang;
  if (!exact) a_ang = Angle::from_interval(constant_value(alpha, 320));

  std::vector<double> pts(static_cast<std::size_t>(N));
  for (long n = 1; n <= N; ++n) {
    mpq_class qn = 0;
    mpz_class pw = 1;
    for (const auto& c : q) {
      qn += c * pw;
      pw *= n;
    }
    mpz_class nd;
    mpz_ui_pow_ui(nd.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(d));
    double v;
    if (exact) {
      v = frac_q(*exact * nd + qn).get_d();
    } else {
      u128 ndu = 1;
      for (int i = 0; i < d; ++i) ndu *= static_cast<u128>(n);
      v = (a_ang * ndu + angle_of(qn)).to_double();
    }
    pts[static_cast<std::size_t>(n - 1)] = v;
  }

  TorusEquiVerdict out;
  out.discrepancy = discrepancy(pts).value;
  out.equidistributed = out.discrepancy < delta;
  if (out.equidistributed) return out;

  const double kmax_d = std::floor(std::pow(delta, -C));
  if (kmax_d > 1e8) throw PreconditionError("witness search range delta^-C exceeds 1e8");
  const long kmax = std::max(1L, static_cast<long>(kmax_d));
  double best = INFINITY;
  long best_k = 1;
  for (long k = 1; k <= kmax; ++k) {
    double dist;
    if (exact) {
      const double f = frac_q(*exact * k).get_d();
      dist = std::min(f, 1.0 - f);
    } else {
      dist = (a_ang * static_cast<std::int64_t>(k)).dist();
    }
    if (dist < best) {
      best = dist;
      best_k = k;
    }
  }
  out.k = best_k;
  out.norm_k_alpha = best;
  out.witness_bound = best * std::pow(static_cast<double>(N), d);
  return out;
}

TestFunction TestFunction::character(std::vector<long> l) {
  TestFunction t;
  t.kind = Kind::Character;
  t.l = std::move(l);
  return t;
}

TestFunction TestFunction::box_of(std::vector<std::pair<mpq_class, mpq_class>> b) {
  for (const auto& [lo, hi] : b) {
    if (lo < 0 || hi > 1 || lo > hi) throw PreconditionError("box sides must satisfy 0 <= lo <= hi <= 1");
  }
  TestFunction t;
  t.kind = Kind::Box;
  t.box = std::move(b);
  return t;
}

std::complex<double> TestFunction::integral() const {
  if (kind == Kind::Character) {
    return std::all_of(l.begin(), l.end(), [](long v) { return v == 0; }) ? 1.0 : 0.0;
  }
  mpq_class vol = 1;
  for (const auto& [lo, hi] : box) vol *= hi - lo;
  return vol.get_d();
}

std::complex<double> eval_test_function(const TestFunction& phi, const std::vector<HardyExpr>& comps,
                                        const mpz_class& n) {
  if (phi.dim() != comps.size()) throw PreconditionError("test function dimension differs from component count");
  if (phi.kind == TestFunction::Kind::Character) {
    double t = 0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (phi.l[i] == 0) continue;
      const double tol = kPhaseTol / (2.0 * std::numbers::pi * static_cast<double>(std::labs(phi.l[i])));
      const double x = static_cast<double>(phi.l[i]) * certified_frac(comps[i], n, tol).mid_d();
      t += x - std::floor(x);
    }
    return e_of(t - std::floor(t));
  }
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (locate(comps[i], n, phi.box[i].first, phi.box[i].second) != 0) return 0.0;
  }
  return 1.0;
}

namespace {

std::vector<const IntervalEntry*> used_entries(const IntervalSeq& seq, long M) {
  if (M < 1) throw PreconditionError("M must be positive");
  if (seq.entries.empty() || seq.entries.back().m < M) {
    throw PreconditionError("interval sequence does not reach m = " + std::to_string(M));
  }
  std::vector<const IntervalEntry*> out;
  mpz_class terms = 0;
  for (const auto& e : seq.entries) {
    if (e.m > M) break;
    if (e.empty()) continue;
    out.push_back(&e);
    terms += e.length();
  }
  if (terms > kMaxTerms) throw PreconditionError("intervals up to M hold more than 5e7 points");
  return out;
}

}  // namespace

std::complex<double> cesaro_interval_average(const TestFunction& phi, const std::vector<HardyExpr>& comps,
                                             const IntervalSeq& seq, long M, int jobs) {
  if (phi.dim() != comps.size()) throw PreconditionError("test function dimension differs from component count");
  const auto used = used_entries(seq, M);
  if (used.empty()) throw DomainError("every interval up to M is empty");
  std::vector<std::complex<double>> per(used.size());
  parallel_for(used.size(), jobs, [&](std::size_t i) {
    const IntervalEntry& e = *used[i];
    std::complex<double> acc = 0;
    for (mpz_class n = e.k_m; n <= e.l_m; ++n) acc += eval_test_function(phi, comps, n);
    per[i] = acc / e.length().get_d();
  });
  std::complex<double> acc = 0;
  for (const auto& v : per) acc += v;
  return acc / static_cast<double>(used.size());
}

Eigen::MatrixXd interval_points(const std::vector<HardyExpr>& comps, const IntervalSeq& seq, long M, int jobs) {
  if (comps.empty()) throw PreconditionError("no components");
  const auto used = used_entries(seq, M);
  std::vector<long> offset(used.size() + 1, 0);
  for (std::size_t i = 0; i < used.size(); ++i) offset[i + 1] = offset[i] + used[i]->length().get_si();
  Eigen::MatrixXd pts(offset.back(), static_cast<long>(comps.size()));
  parallel_for(used.size(), jobs, [&](std::size_t i) {
    long row = offset[i];
    for (mpz_class n = used[i]->k_m; n <= used[i]->l_m; ++n, ++row) {
      for (std::size_t c = 0; c < comps.size(); ++c) {
        const double v = certified_frac(comps[c], n, 1e-12).mid_d();
        pts(row, static_cast<long>(c)) = std::min(v, std::nextafter(1.0, 0.0));
      }
    }
  });
  return pts;
}

}  // namespace hr::equi
