#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "hardyrec/core/evaluate.hpp"
#include "hardyrec/equi/equi.hpp"
#include "hardyrec/error.hpp"
#include "hardyrec/nil/heisenberg.hpp"
#include "hardyrec/pattern/miner.hpp"
#include "hardyrec/pet/family.hpp"
#include "hardyrec/recur/recur.hpp"
#include "hardyrec/sequence/certified.hpp"

namespace hrcli {

using hr::PreconditionError;
using hr::ValidationError;

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

std::pair<mpq_class, mpq_class> parse_box(const Params& p) {
  const auto parts = p.list("box");
  if (parts.size() != 2) throw ValidationError("box must be lo,hi");
  auto q = [](const std::string& s) {
    const hr::HardyExpr e = hr::parse(s);
    const auto v = e.is_constant_expr() ? hr::exact_value(e, 0) : std::nullopt;
    if (!v) throw ValidationError("box endpoint '" + s + "' must be rational");
    return *v;
  };
  return {q(parts[0]), q(parts[1])};
}

int cmd_seq_eval(const Params& p, Writer& w) {
  const hr::HardyExpr a = p.expr("expr");
  const mpz_class n = p.big("n");
  const long bits = p.integer("bits");
  if (bits < 0) throw PreconditionError("bits must be non-negative");
  const hr::FloorResult r = hr::floor_eval(a, n, static_cast<int>(bits));
  w.emit("floor", {{"expr", hr::to_string(a)},
                   {"n", n.get_str()},
                   {"floor", r.floor.get_str()},
                   {"frac", r.frac.to_string(25)},
                   {"frac_radius", r.frac.radius_d()},
                   {"bits", r.bits},
                   {"exact", r.exact}});
  w.csv_header({"n", "floor", "frac"});
  w.csv_row({n.get_str(), r.floor.get_str(), num(r.frac.to_double())});
  return 0;
}

int cmd_seq_range(const Params& p, Writer& w) {
  const hr::HardyExpr a = p.expr("expr");
  const mpz_class lo = p.big("from"), hi = p.big("to");
  const auto vals = hr::range_enumerate(a, lo, hi);
  json arr = json::array();
  w.csv_header({"value"});
  for (const auto& v : vals) {
    arr.push_back(v.get_str());
    w.csv_row({v.get_str()});
  }
  w.emit("range", {{"expr", hr::to_string(a)}, {"from", lo.get_str()}, {"to", hi.get_str()}, {"count", vals.size()},
                   {"values", arr}});
  return 0;
}

int cmd_equi(const Params& p, Writer& w) {
  const hr::HardyExpr a = p.expr("expr");
  const long k = p.integer("k");
  const mpq_class eps = p.rational("eps");
  const long d = p.integer("d");
  const auto [lo, hi] = p.range("m");
  const long s = p.integer("s");
  const long max_len = p.integer("max_len");
  const int jobs = static_cast<int>(p.integer("jobs"));

  const hr::equi::IntervalSeq seq = hr::equi::build_intervals(a, static_cast<int>(k), eps, d, lo, hi, {true, jobs});
  w.emit("intervals", {{"case", hr::equi::to_string(seq.kase)},
                       {"probe_delta", seq.probe_delta.get_str()},
                       {"threshold_m", seq.threshold_m},
                       {"lengths_grow", seq.lengths_grow()}});
  w.csv_header({"m", "k_m", "l_m", "length", "weyl_re", "weyl_im", "discrepancy"});
  for (const auto& e : seq.entries) {
    json rec{{"m", e.m}, {"k_m", e.k_m.get_str()}, {"l_m", e.l_m.get_str()}, {"length", e.length().get_str()},
             {"condition_i", e.condition_i}};
    std::string wre, wim, disc;
    if (!e.empty() && e.length() <= max_len) {
      const auto ws = hr::equi::weyl_sum(a, e.k_m, e.l_m, s, jobs);
      std::vector<double> pts;
      for (mpz_class n = e.k_m; n <= e.l_m; ++n) pts.push_back(hr::equi::certified_frac(a, n, 1e-12).mid_d());
      const auto D = hr::equi::discrepancy(pts);
      rec["weyl"] = complex_json(ws);
      rec["discrepancy"] = D.value;
      wre = num(ws.real());
      wim = num(ws.imag());
      disc = num(D.value);
    } else {
      rec["weyl"] = nullptr;
      rec["discrepancy"] = nullptr;
    }
    w.emit("interval", std::move(rec));
    w.csv_row({std::to_string(e.m), e.k_m.get_str(), e.l_m.get_str(), e.length().get_str(), wre, wim, disc});
  }
  return 0;
}

int cmd_nil(const Params& p, Writer& w) {
  auto angle = [&](const std::string& key) {
    const hr::HardyExpr e = p.expr(key);
    if (!e.is_constant_expr()) throw PreconditionError(key + " must be a constant");
    return hr::Angle::from_interval(hr::eval_interval(e, hr::Interval::from_si(1, 256), 256));
  };
  const hr::nil::HeisenbergElement<hr::Angle> a{p.integer("step"), angle("alpha"), angle("beta")};
  const long M = p.integer("M");
  const long k = p.integer("k");
  const auto ch = p.list("char");
  if (ch.size() != 2) throw ValidationError("char must be p,q");
  long cp = 0, cq = 0;
  try {
    cp = std::stol(ch[0]);
    cq = std::stol(ch[1]);
  } catch (const std::exception&) {
    throw ValidationError("char must be two integers");
  }
  const long c_max = p.integer("c_max");
  if (M < 1 || k < 1 || c_max < 1) throw PreconditionError("M, k and c_max must be positive");
  const auto seed = static_cast<std::uint64_t>(p.big("seed").get_ui());
  const auto sched = hr::nil::random_schedule(static_cast<int>(M), static_cast<int>(k), seed, c_max);
  const auto avg = hr::nil::nil_cesaro_average(hr::nil::TorusFunction::character(cp, cq), a, sched, static_cast<int>(k),
                                               static_cast<int>(p.integer("jobs")));
  w.csv_header({"m", "N_m", "running_re", "running_im"});
  for (std::size_t i = 0; i < avg.running.size(); ++i) {
    w.emit("block", {{"m", i + 1}, {"N_m", sched[i].N}, {"partial_average", complex_json(avg.running[i])}});
    w.csv_row({std::to_string(i + 1), std::to_string(sched[i].N), num(avg.running[i].real()),
               num(avg.running[i].imag())});
  }
  w.emit("result", {{"average", complex_json(avg.average)}, {"integral", complex_json(avg.integral)}, {"gap", avg.gap}});
  return 0;
}

json anchor_json(const hr::pattern::AnchorResult& an) {
  json floors = json::array();
  for (const auto& f : an.floors) floors.push_back(f.get_str());
  return {{"n_anchor", an.n_anchor.get_str()}, {"eps", an.eps.get_str()},   {"eps_achieved", an.eps_achieved},
          {"floors", floors},                  {"fracs", an.fracs},         {"k_m", an.interval.k_m.get_str()},
          {"l_m", an.interval.l_m.get_str()},  {"scanned", an.scanned.get_str()}};
}

int cmd_mine(const Params& p, Writer& w) {
  const hr::HardyExpr a = p.expr("expr");
  const long r = p.integer("r");
  const auto [lo, hi] = p.range("m");
  hr::pattern::MineOptions opt;
  opt.eps = p.str("eps") == "log" ? hr::pattern::EpsSchedule::inv_ceil_log()
                                  : hr::pattern::EpsSchedule::constant(p.rational("eps"));
  opt.N_try = p.integer("ntry");
  opt.jobs = static_cast<int>(p.integer("jobs"));
  const auto rep = hr::pattern::mine_patterns(a, r, lo, hi, opt);
  w.csv_header({"m", "N_m", "n_anchor", "eps_achieved"});
  for (const auto& e : rep.entries) {
    if (!e.cert) {
      w.emit("miss", {{"m", e.m}, {"eps", e.eps.get_str()}, {"reason", e.failure}});
      w.csv_row({std::to_string(e.m), "", "", ""});
      continue;
    }
    const auto& c = *e.cert;
    json coeffs = json::array();
    for (const auto& v : c.c) coeffs.push_back(v.get_str());
    w.emit("certificate", {{"r", c.r},
                           {"m", c.m},
                           {"k", c.k},
                           {"c", coeffs},
                           {"N", c.N},
                           {"verified_through", c.verified_through},
                           {"predicted_N", c.predicted_N},
                           {"anchor", anchor_json(c.anchor)}});
    w.csv_row({std::to_string(c.m), std::to_string(c.N), c.anchor.n_anchor.get_str(), num(c.anchor.eps_achieved)});
  }
  w.emit("summary", {{"k", rep.k},
                     {"r", rep.r},
                     {"certificates", rep.certificates().size()},
                     {"first_third_max", rep.first_third_max},
                     {"last_third_max", rep.last_third_max},
                     {"trend_up", rep.trend_up}});
  return 0;
}

json poly_json(const hr::pet::Poly& q) {
  json terms = json::array();
  for (const auto& [e, c] : q.terms()) terms.push_back({{"exp", e}, {"coef", c.get_str()}});
  return terms;
}

json family_json(const hr::pet::PolyFamily& f) {
  json arr = json::array();
  for (const auto& m : f.members) {
    arr.push_back({{"poly", m.p.to_string()}, {"terms", poly_json(m.p)}, {"tag", m.tag.to_string()}});
  }
  return arr;
}

int cmd_pet(const Params& p, Writer& w) {
  const auto polys = hr::pet::parse_poly_list(p.str("family"));
  const long max_steps = p.integer("max_steps");
  const long max_members = p.integer("max_members");
  if (max_steps < 1 || max_members < 1) throw PreconditionError("max_steps and max_members must be positive");
  const auto trace = hr::pet::reduce_to_linear(hr::pet::make_family(polys), static_cast<int>(max_steps),
                                               static_cast<std::size_t>(max_members));
  std::ostream* text = w.text();
  w.csv_header({"step", "type", "size", "case"});
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& st = trace.steps[i];
    w.emit("step", {{"step", i},
                    {"type", st.type.v},
                    {"case", hr::pet::to_string(st.kind)},
                    {"p_k", st.pk},
                    {"new_param", st.new_param},
                    {"family", family_json(st.family)}});
    w.csv_row({std::to_string(i), st.type.to_string(), std::to_string(st.family.size()),
               hr::pet::to_string(st.kind)});
    if (text) {
      *text << "step " << i << "  type " << st.type.to_string() << "  " << hr::pet::to_string(st.kind)
            << "  p_k = member " << st.pk + 1 << "  new h" << st.new_param << '\n'
            << "  " << st.family.to_string() << '\n';
    }
  }
  w.emit("final", {{"type", trace.final_type.v},
                   {"s", trace.s},
                   {"r_tilde", trace.r_tilde},
                   {"family", family_json(trace.final_family)}});
  w.csv_row({std::to_string(trace.steps.size()), trace.final_type.to_string(),
             std::to_string(trace.final_family.size()), ""});
  if (text) {
    *text << "final type " << trace.final_type.to_string() << "  s = " << trace.s << "  r~ = " << trace.r_tilde
          << '\n'
          << "  " << trace.final_family.to_string() << '\n';
  }
  return 0;
}

hr::recur::FiniteSet build_lambda(const Params& p, long window) {
  const std::string spec = p.str("lambda");
  std::vector<std::string> parts;
  {
    std::string cur;
    for (char c : spec) {
      if (c == ':' && parts.size() < 2) {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
  }
  const std::string kind = parts[0];
  auto to_long = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const long v = std::stol(s, &pos);
      if (pos == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ValidationError("lambda '" + spec + "': bad integer '" + s + "'");
  };
  if (kind == "full" && parts.size() == 1) return hr::recur::FiniteSet::full(window);
  if (kind == "congruence" && parts.size() == 3) {
    return hr::recur::FiniteSet::congruence(window, to_long(parts[1]), to_long(parts[2]));
  }
  if (kind == "rotation" && parts.size() == 1) {
    return hr::recur::FiniteSet::rotation(window, p.expr("alpha"), {parse_box(p)});
  }
  if (kind == "random" && parts.size() == 2) {
    const hr::HardyExpr e = hr::parse(parts[1]);
    const auto q = e.is_constant_expr() ? hr::exact_value(e, 0) : std::nullopt;
    if (!q) throw ValidationError("lambda random drop must be rational");
    return hr::recur::FiniteSet::random(window, q->get_d(), p.big("seed").get_ui());
  }
  if (kind == "file" && parts.size() >= 2) {
    std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open lambda file '" + path + "'");
    std::vector<long> members;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      members.push_back(to_long(line));
    }
    return hr::recur::FiniteSet::from_members(window, members);
  }
  throw ValidationError("lambda '" + spec + "' is not one of full, congruence:q:c, rotation, random:drop, file:path");
}

std::vector<long> build_steps(const Params& p, long window) {
  const std::string spec = p.str("steps");
  if (p.has("steps_expr")) {
    const auto [lo, hi] = p.range("steps");
    return hr::recur::floor_sequence(p.expr("steps_expr"), lo, hi, window);
  }
  if (spec == "factorial") return hr::recur::factorial_sequence(window);
  if (spec.find("..") != std::string::npos) {
    const auto [lo, hi] = p.range("steps");
    if (hi - lo > 10000000) throw PreconditionError("step range is too long");
    std::vector<long> out;
    for (long s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  }
  std::vector<long> out;
  for (const auto& s : p.list("steps")) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stol(s, &pos));
      if (pos != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw ValidationError("steps must be a..b, factorial or a comma list of integers");
    }
  }
  return out;
}

void emit_counts(Writer& w, const std::map<long, long>& counts) {
  w.csv_header({"s", "count"});
  for (const auto& [s, c] : counts) {
    w.emit("step", {{"s", s}, {"count", c}});
    w.csv_row({std::to_string(s), std::to_string(c)});
  }
}

int cmd_recur(const Params& p, Writer& w) {
  const std::string mode = p.str("mode");
  const int jobs = static_cast<int>(p.integer("jobs"));
  if (mode == "parity") {
    const long window = p.integer("window");
    const auto blocks = hr::recur::parity_blocks(window);
    bool all = true;
    w.csv_header({"l", "lo", "hi", "value", "pass"});
    for (const auto& b : blocks) {
      json rec{{"l", b.l}, {"lo", b.lo.get_str()}, {"hi", b.hi.get_str()}, {"value", b.value}, {"pass", b.pass}};
      if (b.counterexample) rec["counterexample"] = b.counterexample->get_str();
      w.emit("block", std::move(rec));
      w.csv_row({std::to_string(b.l), b.lo.get_str(), b.hi.get_str(), std::to_string(b.value), b.pass ? "1" : "0"});
      all = all && b.pass;
    }
    w.emit("result", {{"blocks", blocks.size()}, {"pass", all}});
    return 0;
  }
  if (mode == "scan" || mode == "rotation") {
    const long window = p.integer("window");
    const int l = static_cast<int>(p.integer("l"));
    const std::string wm = p.str("witnesses");
    if (wm != "first" && wm != "all") throw ValidationError("witnesses must be first or all");
    const auto steps = build_steps(p, window);
    if (mode == "rotation") {
      const auto rep = hr::recur::rotation_recurrence_test(p.expr("alpha"), {parse_box(p)}, steps, window, l, jobs);
      emit_counts(w, rep.counts);
      w.emit("result", {{"lambda_density", rep.lambda_density},
                        {"steps", rep.steps.size()},
                        {"with_witness", rep.with_witness},
                        {"fraction", rep.fraction},
                        {"total_witnesses", rep.total_witnesses}});
      return 0;
    }
    const auto lambda = build_lambda(p, window);
    const auto rep = hr::recur::find_progressions(
        lambda, steps, l, wm == "all" ? hr::recur::WitnessMode::All : hr::recur::WitnessMode::FirstPerS, jobs);
    emit_counts(w, rep.counts);
    json wit = json::array();
    for (const auto& x : rep.witnesses) wit.push_back({x.m, x.s});
    w.emit("result", {{"l", rep.l},
                      {"density", lambda.density()},
                      {"exhaustive", rep.exhaustive},
                      {"steps_with_witness", rep.steps_with_witness()},
                      {"verified", hr::recur::verify_witnesses(lambda, rep)},
                      {"witnesses", wit}});
    return 0;
  }
  if (mode == "appendix") {
    const long M = p.integer("M");
    const auto rep = hr::recur::appendix_average(p.expr("p"), p.expr("beta"), p.expr("t"), parse_box(p),
                                                 hr::recur::AppendixSchedule::linear(), M, jobs);
    w.csv_header({"M", "magnitude"});
    json trend = json::array();
    for (const auto& [m, v] : rep.trend) {
      trend.push_back({m, v});
      w.csv_row({std::to_string(m), num(v)});
    }
    w.emit("result", {{"value", complex_json(rep.value)}, {"trend", trend}, {"decaying", rep.decaying}});
    return 0;
  }
  if (mode == "theoremc") {
    hr::recur::TheoremCOptions opt;
    opt.M = p.integer("M");
    opt.samples = p.integer("samples");
    opt.seed = p.big("seed").get_ui();
    opt.jobs = jobs;
    const auto rep = hr::recur::theoremC_experiment(p.expr("c"), p.expr("poly"), p.expr("b"), p.expr("beta"), opt);
    w.csv_header({"m", "n_m", "N_m", "sup_dev"});
    for (const auto& I : rep.intervals) {
      w.emit("interval", {{"m", I.m}, {"n_m", I.n_m.get_str()}, {"N_m", I.N_m}, {"sup_dev", I.sup_dev}});
      w.csv_row({std::to_string(I.m), I.n_m.get_str(), std::to_string(I.N_m), num(I.sup_dev)});
    }
    w.emit("result", {{"S_size", rep.S_size},
                      {"J_size", rep.J_size},
                      {"J_density", rep.J_density},
                      {"tolerance", rep.tolerance},
                      {"checked", rep.checked},
                      {"agreed", rep.agreed},
                      {"agreement", rep.agreement}});
    return 0;
  }
  throw ValidationError("mode must be scan, parity, rotation, appendix or theoremc");
}

}  // namespace

int run_command(const Params& p, Writer& w) {
  const std::string& c = p.command();
  if (p.integer("jobs") < 1) throw PreconditionError("jobs must be at least 1");
  if (const mpz_class seed = p.big("seed"); seed < 0 || mpz_sizeinbase(seed.get_mpz_t(), 2) > 64) {
    throw PreconditionError("seed must be a 64-bit unsigned integer");
  }
  if (c == "seq eval") return cmd_seq_eval(p, w);
  if (c == "seq range") return cmd_seq_range(p, w);
  if (c == "equi") return cmd_equi(p, w);
  if (c == "nil") return cmd_nil(p, w);
  if (c == "mine") return cmd_mine(p, w);
  if (c == "pet") return cmd_pet(p, w);
  if (c == "recur") return cmd_recur(p, w);
  throw ValidationError("unknown command '" + c + "'");
}

}  // namespace hrcli
