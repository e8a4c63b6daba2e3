#include "hardyrec/nil/heisenberg.hpp"

#include <random>

#include "hardyrec/util/parallel.hpp"

namespace hr::nil {

double affine_orbit_radius(const AffineMap<Angle>& S, long long j) {
  using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
  const int d = S.dim();
  const IMat N = S.linear - IMat::Identity(d, d);
  IMat P = IMat::Identity(d, d);
  double worst = 0;
  std::vector<double> row(static_cast<std::size_t>(d), 0.0);
  for (int r = 0; r < d; ++r) {
    mpz_class c0, c1;
    mpz_bin_uiui(c0.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(r));
    mpz_bin_uiui(c1.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(r + 1));
    const double w = c0.get_d() + c1.get_d();
    for (int i = 0; i < d; ++i) row[i] += w * static_cast<double>(P.row(i).cwiseAbs().sum());
    P = P * N;
  }
  for (double v : row) worst = std::max(worst, v);
  return 0.5 * kAngleUlp * worst;
}

TorusFunction TorusFunction::character(long p, long q) {
  TorusFunction f;
  f.kind = Kind::Character;
  f.modes = {{1.0, p, q}};
  return f;
}

TorusFunction TorusFunction::box(double a1, double b1, double a2, double b2) {
  if (!(0 <= a1 && a1 <= b1 && b1 <= 1 && 0 <= a2 && a2 <= b2 && b2 <= 1)) {
    throw PreconditionError("box must lie inside [0,1)^2");
  }
  TorusFunction f;
  f.kind = Kind::Box;
  f.a1 = a1;
  f.b1 = b1;
  f.a2 = a2;
  f.b2 = b2;
  return f;
}

TorusFunction TorusFunction::trig(std::vector<Mode> modes) {
  TorusFunction f;
  f.kind = Kind::TrigPoly;
  f.modes = std::move(modes);
  return f;
}

std::complex<double> TorusFunction::operator()(Angle t1, Angle t2) const {
  if (kind == Kind::Box) {
    const double u = t1.to_double(), v = t2.to_double();
    return (a1 <= u && u < b1 && a2 <= v && v < b2) ? 1.0 : 0.0;
  }
  std::complex<double> s = 0;
  for (const auto& md : modes) {
    const Angle ph = t1 * static_cast<std::int64_t>(md.p) + t2 * static_cast<std::int64_t>(md.q);
    s += md.c * ph.character(1);
  }
  return s;
}

std::complex<double> TorusFunction::integral() const {
  if (kind == Kind::Box) return (b1 - a1) * (b2 - a2);
  std::complex<double> s = 0;
  for (const auto& md : modes) {
    if (md.p == 0 && md.q == 0) s += md.c;
  }
  return s;
}

std::vector<ScheduleEntry> random_schedule(int M, int k, std::uint64_t seed, long long c_max) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> d(0, c_max - 1);
  std::vector<ScheduleEntry> out;
  for (int m = 1; m <= M; ++m) {
    ScheduleEntry e;
    e.N = m;
    for (int i = 0; i < std::max(1, k); ++i) e.q.push_back(d(rng));
    out.push_back(std::move(e));
  }
  return out;
}

NilAverage nil_cesaro_average(const TorusFunction& F, const HeisenbergElement<Angle>& a,
                              const std::vector<ScheduleEntry>& schedule, int k, int jobs) {
  if (k < 1) throw PreconditionError("k must be positive");
  if (schedule.empty()) throw PreconditionError("empty schedule");
  const std::size_t M = schedule.size();
  for (std::size_t i = 0; i < M; ++i) {
    if (schedule[i].N < 1) throw PreconditionError("schedule entry with N_m < 1");
    if (static_cast<int>(schedule[i].q.size()) > k) throw PreconditionError("q_m must have degree at most k-1");
    if (i >= M / 2 && i > 0 && schedule[i].N < schedule[i - 1].N) {
      throw PreconditionError("N_m must be non-decreasing along the tail of the schedule");
    }
  }
  std::vector<std::complex<double>> inner(M);
  parallel_for(M, jobs, [&](std::size_t i) {
    const ScheduleEntry& e = schedule[i];
    const mpz_class m(static_cast<unsigned long>(i + 1));
    std::complex<double> s = 0;
    for (long long n = 1; n <= e.N; ++n) {
      const mpz_class nz(static_cast<long>(n));
      mpz_class ex, nk;
      mpz_pow_ui(nk.get_mpz_t(), nz.get_mpz_t(), static_cast<unsigned long>(k));
      ex = m * nk;
      mpz_class np = 1;
      for (long long c : e.q) {
        ex += np * static_cast<long>(c);
        np *= nz;
      }
      const auto g = nil_power(a, ex);
      s += F(g.x1, g.x2);
    }
    inner[i] = s / static_cast<double>(e.N);
  });
  NilAverage out;
  std::complex<double> acc = 0;
  for (std::size_t i = 0; i < M; ++i) {
    acc += inner[i];
    out.running.push_back(acc / static_cast<double>(i + 1));
  }
  out.average = out.running.back();
  out.integral = F.integral();
  out.gap = std::abs(out.average - out.integral);
  return out;
}

}  // namespace hr::nil
