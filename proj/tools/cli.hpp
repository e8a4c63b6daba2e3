#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hardyrec/core/expr.hpp"
#include "json.hpp"

namespace hrcli {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "hardyrec.events/1";
inline constexpr const char* kVersion = "0.3.0";

struct Key {
  std::string name;
  std::string def;  // empty: no default
  std::string help;
};

// Keys every command accepts.
const std::vector<Key>& global_keys();
// Keys of one command ("seq eval", "seq range", "equi", "nil", "mine", "pet", "recur").
const std::vector<Key>& command_keys(const std::string& command);
const std::vector<std::string>& command_names();

// Resolved configuration: defaults, then the config file, then flags.
class Params {
 public:
  Params(std::string command, std::map<std::string, std::string> values)
      : command_(std::move(command)), v_(std::move(values)) {}

  const std::string& command() const { return command_; }
  bool has(const std::string& k) const;
  std::string str(const std::string& k) const;
  long integer(const std::string& k) const;
  mpz_class big(const std::string& k) const;
  double real(const std::string& k) const;
  mpq_class rational(const std::string& k) const;
  bool flag(const std::string& k) const;
  hr::HardyExpr expr(const std::string& k) const;
  std::pair<long, long> range(const std::string& k) const;  // "a..b"
  std::vector<std::string> list(const std::string& k, char sep = ',') const;

  // FNV-1a 64 of the canonical (sorted key) rendering, as 16 hex digits.
  std::string hash() const;
  json to_json() const;

 private:
  std::string command_;
  std::map<std::string, std::string> v_;
};

// Merges a JSON config object into values; unknown keys raise ValidationError.
void merge_config(const json& cfg, const std::string& command, std::map<std::string, std::string>& values);

std::uint64_t fnv1a(const std::string& s);

// Serialized JSON-lines writer; every record carries schema, version and config hash.
class Writer {
 public:
  Writer(const Params& p);
  void emit(const std::string& event, json body);
  void csv_header(const std::vector<std::string>& cols);
  void csv_row(const std::vector<std::string>& cells);
  std::ostream* text();

 private:
  std::string hash_;
  std::unique_ptr<std::ofstream> out_file_, csv_file_, text_file_;
  std::ostream* out_ = nullptr;
};

int run_command(const Params& p, Writer& w);

std::string exact_string(const mpq_class& q);

}  // namespace hrcli
