#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <set>

#include "hardyrec/core/evaluate.hpp"
#include "hardyrec/error.hpp"

namespace hrcli {

using hr::ValidationError;

const std::vector<Key>& global_keys() {
  static const std::vector<Key> keys{
      {"out", "-", "JSON-lines output path, - for stdout"},
      {"csv", "", "CSV summary path"},
      {"jobs", "1", "worker threads"},
      {"seed", "1", "64-bit seed"},
  };
  return keys;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"seq eval", "seq range", "equi", "nil", "mine", "pet", "recur"};
  return names;
}

const std::vector<Key>& command_keys(const std::string& command) {
  static const std::map<std::string, std::vector<Key>> table{
      {"seq eval",
       {{"expr", "", "expression in x"}, {"n", "", "integer argument"}, {"bits", "0", "starting precision"}}},
      {"seq range",
       {{"expr", "", "expression in x"}, {"from", "1", "first n"}, {"to", "", "last n"}}},
      {"equi",
       {{"expr", "", "a(x) with x^k < a < x^(k+1)"},
        {"k", "", "growth exponent"},
        {"eps", "1/10", "interval tolerance"},
        {"d", "1", "scale d_k"},
        {"m", "10..50", "m range a..b"},
        {"s", "1", "Weyl frequency"},
        {"max_len", "1000000", "skip sums over longer intervals"}}},
      {"nil",
       {{"alpha", "sqrt(2)", "x1 of the group element"},
        {"beta", "sqrt(3)", "x2 of the group element"},
        {"step", "1", "integer m of the group element"},
        {"M", "300", "number of blocks"},
        {"k", "1", "exponent of m n^k"},
        {"char", "1,0", "character (p,q) on the torus"},
        {"c_max", "1000000", "offset bound of the seeded schedule"}}},
      {"mine",
       {{"expr", "", "a(x)"},
        {"r", "1", "scale r"},
        {"m", "10..200", "m range a..b"},
        {"eps", "log", "log for 1/ceil(log(m+2)), or a constant"},
        {"ntry", "1000", "pattern length attempted"}}},
      {"pet",
       {{"family", "", "comma separated polynomials in n"},
        {"max_steps", "64", "step limit"},
        {"max_members", "4096", "family size limit"},
        {"text", "", "human-readable trace path"}}},
      {"recur",
       {{"mode", "scan", "scan, parity, rotation, appendix or theoremc"},
        {"lambda", "congruence:2:0", "full, congruence:q:c, rotation, random:drop or file:path"},
        {"window", "100000", "window size N"},
        {"steps", "1..100", "a..b, comma list or factorial"},
        {"steps_expr", "", "when set, steps are [expr(n)] over the steps range"},
        {"l", "1", "progression length"},
        {"witnesses", "first", "first or all"},
        {"alpha", "sqrt(5)", "rotation angle"},
        {"box", "1/2,3/4", "closed target interval lo,hi"},
        {"p", "sqrt(2)*x^2", "appendix polynomial"},
        {"beta", "pi", "shift constant"},
        {"t", "1/2", "appendix frequency in (0,1)"},
        {"M", "400", "number of blocks"},
        {"c", "sqrt(2)", "coefficient c of a = c p + b"},
        {"poly", "x^2", "integer polynomial p of a = c p + b"},
        {"b", "log(x)^2", "slow part b of a = c p + b"},
        {"samples", "2000", "identity checks"}}},
  };
  const auto it = table.find(command);
  if (it == table.end()) throw ValidationError("unknown command '" + command + "'");
  return it->second;
}

namespace {

const std::set<std::string> kUnhashed{"out", "csv", "text", "jobs"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

void merge_config(const json& cfg, const std::string& command, std::map<std::string, std::string>& values) {
  if (!cfg.is_object()) throw ValidationError("config must be a JSON object");
  std::set<std::string> allowed{"command"};
  for (const auto& k : global_keys()) allowed.insert(k.name);
  for (const auto& k : command_keys(command)) allowed.insert(k.name);
  for (const auto& [k, v] : cfg.items()) {
    if (!allowed.count(k)) throw ValidationError("unknown config key '" + k + "' for command '" + command + "'");
    if (k == "command") continue;
    if (v.is_string()) {
      values[k] = v.get<std::string>();
    } else if (v.is_number_integer() || v.is_boolean()) {
      values[k] = v.dump();
    } else if (v.is_number_float()) {
      throw ValidationError("config key '" + k + "': write real values as strings to keep them exact");
    } else {
      throw ValidationError("config key '" + k + "' must be a string, integer or boolean");
    }
  }
}

bool Params::has(const std::string& k) const {
  const auto it = v_.find(k);
  return it != v_.end() && !it->second.empty();
}

std::string Params::str(const std::string& k) const {
  const auto it = v_.find(k);
  if (it == v_.end() || it->second.empty()) throw ValidationError("missing required parameter '" + k + "'");
  return it->second;
}

long Params::integer(const std::string& k) const {
  const std::string s = str(k);
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw ValidationError("parameter '" + k + "' must be an integer, got '" + s + "'");
  return v;
}

mpz_class Params::big(const std::string& k) const {
  const std::string s = str(k);
  mpz_class v;
  if (v.set_str(s, 10) != 0) throw ValidationError("parameter '" + k + "' must be an integer, got '" + s + "'");
  return v;
}

double Params::real(const std::string& k) const { return rational(k).get_d(); }

mpq_class Params::rational(const std::string& k) const {
  const hr::HardyExpr e = expr(k);
  const auto q = e.is_constant_expr() ? hr::exact_value(e, 0) : std::nullopt;
  if (!q) throw ValidationError("parameter '" + k + "' must be a rational number, got '" + str(k) + "'");
  return *q;
}

bool Params::flag(const std::string& k) const {
  const std::string s = str(k);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ValidationError("parameter '" + k + "' must be true or false");
}

hr::HardyExpr Params::expr(const std::string& k) const {
  try {
    return hr::parse(str(k));
  } catch (const hr::ParseError& e) {
    throw hr::ParseError("parameter '" + k + "': " + std::string(e.what()).substr(0, std::string(e.what()).rfind(" at position")),
                         e.position());
  }
}

std::pair<long, long> Params::range(const std::string& k) const {
  const std::string s = str(k);
  const auto dots = s.find("..");
  if (dots == std::string::npos) throw ValidationError("parameter '" + k + "' must be a range a..b, got '" + s + "'");
  try {
    std::size_t p1 = 0, p2 = 0;
    const std::string a = trim(s.substr(0, dots)), b = trim(s.substr(dots + 2));
    const long lo = std::stol(a, &p1), hi = std::stol(b, &p2);
    if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument("trailing");
    if (hi < lo) throw ValidationError("parameter '" + k + "' has an empty range");
    return {lo, hi};
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw ValidationError("parameter '" + k + "' must be a range a..b, got '" + s + "'");
  }
}

std::vector<std::string> Params::list(const std::string& k, char sep) const {
  std::vector<std::string> out;
  std::string cur;
  for (char c : str(k)) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

json Params::to_json() const {
  json j;
  j["command"] = command_;
  for (const auto& [k, v] : v_) {
    if (!kUnhashed.count(k)) j[k] = v;
  }
  return j;
}

std::string Params::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_json().dump())));
  return buf;
}

Writer::Writer(const Params& p) : hash_(p.hash()) {
  const std::string out = p.has("out") ? p.str("out") : "-";
  if (out == "-") {
    out_ = &std::cout;
  } else {
    out_file_ = std::make_unique<std::ofstream>(out, std::ios::binary);
    if (!*out_file_) throw ValidationError("cannot open output file '" + out + "'");
    out_ = out_file_.get();
  }
  if (p.has("csv")) {
    csv_file_ = std::make_unique<std::ofstream>(p.str("csv"), std::ios::binary);
    if (!*csv_file_) throw ValidationError("cannot open CSV file '" + p.str("csv") + "'");
  }
  if (p.has("text")) {
    text_file_ = std::make_unique<std::ofstream>(p.str("text"), std::ios::binary);
    if (!*text_file_) throw ValidationError("cannot open text file '" + p.str("text") + "'");
  }
}

void Writer::emit(const std::string& event, json body) {
  json rec;
  rec["schema"] = kSchema;
  rec["version"] = kVersion;
  rec["config_hash"] = hash_;
  rec["event"] = event;
  for (auto& [k, v] : body.items()) rec[k] = std::move(v);
  *out_ << rec.dump() << '\n';
  out_->flush();
}

void Writer::csv_header(const std::vector<std::string>& cols) {
  if (!csv_file_) return;
  *csv_file_ << "config_hash,version";
  for (const auto& c : cols) *csv_file_ << ',' << c;
  *csv_file_ << '\n';
}

void Writer::csv_row(const std::vector<std::string>& cells) {
  if (!csv_file_) return;
  *csv_file_ << hash_ << ',' << kVersion;
  for (const auto& c : cells) *csv_file_ << ',' << c;
  *csv_file_ << '\n';
}

std::ostream* Writer::text() { return text_file_.get(); }

std::string exact_string(const mpq_class& q) { return q.get_str(); }

}  // namespace hrcli
