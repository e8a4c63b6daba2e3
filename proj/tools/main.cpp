#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "hardyrec/error.hpp"

namespace {

struct Bound {
  CLI::App* app = nullptr;
  std::string command;
  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::Option*> opts;
};

void bind(Bound& b, std::string& config) {
  b.app->add_option("--config", config, "JSON config file; flags override it");
  auto add = [&](const hrcli::Key& k) {
    std::string help = k.help;
    if (!k.def.empty()) help += " (default " + k.def + ")";
    b.opts[k.name] = b.app->add_option("--" + k.name, b.flags[k.name], help);
  };
  for (const auto& k : hrcli::global_keys()) add(k);
  for (const auto& k : hrcli::command_keys(b.command)) add(k);
}

const char* kind_of(const std::exception& e) {
  if (dynamic_cast<const hr::ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const hr::PreconditionError*>(&e)) return "PreconditionError";
  if (dynamic_cast<const hr::ValidationError*>(&e)) return "ValidationError";
  if (dynamic_cast<const hr::OverflowError*>(&e)) return "OverflowError";
  if (dynamic_cast<const hr::DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const hr::PrecisionCapExceeded*>(&e)) return "PrecisionCapExceeded";
  if (dynamic_cast<const hr::FloorAmbiguity*>(&e)) return "FloorAmbiguity";
  if (dynamic_cast<const hr::Inconclusive*>(&e)) return "Inconclusive";
  if (dynamic_cast<const hr::NotFound*>(&e)) return "NotFound";
  if (dynamic_cast<const hr::NeedsPrecision*>(&e)) return "NeedsPrecision";
  return "Error";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments on Hardy-field sequences: floors, intervals, patterns, PET, nil-orbits, recurrence"};
  app.require_subcommand(0, 1);
  std::string config;
  app.add_option("--config", config, "JSON config file; flags override it");

  std::vector<Bound> bound;
  bound.reserve(hrcli::command_names().size());
  CLI::App* seq = app.add_subcommand("seq", "certified evaluation of [a(n)]");
  seq->require_subcommand(1);
  for (const auto& name : hrcli::command_names()) {
    Bound b;
    b.command = name;
    if (name == "seq eval") {
      b.app = seq->add_subcommand("eval", "certified floor and fractional part of a(n)");
    } else if (name == "seq range") {
      b.app = seq->add_subcommand("range", "distinct values of [a(n)] over an n range");
    } else {
      b.app = app.add_subcommand(name, name + " experiment");
    }
    bound.push_back(std::move(b));
  }
  for (auto& b : bound) bind(b, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::unique_ptr<hrcli::Writer> writer;
  try {
    hrcli::json cfg = hrcli::json::object();
    if (!config.empty()) {
      std::ifstream in(config);
      if (!in) throw hr::ValidationError("cannot open config file '" + config + "'");
      try {
        cfg = hrcli::json::parse(in);
      } catch (const hrcli::json::parse_error& e) {
        throw hr::ValidationError(std::string("config file is not valid JSON: ") + e.what());
      }
      if (!cfg.is_object()) throw hr::ValidationError("config must be a JSON object");
    }

    const Bound* chosen = nullptr;
    for (const auto& b : bound) {
      if (b.app->parsed()) chosen = &b;
    }
    std::string command;
    if (chosen) {
      command = chosen->command;
      if (cfg.contains("command") && cfg["command"] != command) {
        throw hr::ValidationError("config command '" + cfg["command"].dump() + "' differs from '" + command + "'");
      }
    } else if (cfg.contains("command") && cfg["command"].is_string()) {
      command = cfg["command"].get<std::string>();
      for (const auto& b : bound) {
        if (b.command == command) chosen = &b;
      }
      if (!chosen) throw hr::ValidationError("config names unknown command '" + command + "'");
    } else {
      std::cerr << app.help();
      return 2;
    }

    std::map<std::string, std::string> values;
    for (const auto& k : hrcli::global_keys()) values[k.name] = k.def;
    for (const auto& k : hrcli::command_keys(command)) values[k.name] = k.def;
    hrcli::merge_config(cfg, command, values);
    for (const auto& [name, opt] : chosen->opts) {
      if (opt->count() > 0) values[name] = chosen->flags.at(name);
    }
    const hrcli::Params params(command, std::move(values));
    writer = std::make_unique<hrcli::Writer>(params);
    writer->emit("config", {{"config", params.to_json()}});
    const int rc = hrcli::run_command(params, *writer);
    writer->emit("done", {{"status", "ok"}});
    return rc;
  } catch (const std::exception& e) {
    const bool validation = dynamic_cast<const hr::ValidationError*>(&e) != nullptr;
    std::cerr << "error: " << e.what() << '\n';
    if (writer) {
      hrcli::json rec{{"kind", kind_of(e)}, {"message", e.what()}, {"exit_code", validation ? 2 : 1}};
      if (auto* pe = dynamic_cast<const hr::ParseError*>(&e)) rec["position"] = pe->position();
      writer->emit("error", std::move(rec));
    }
    return validation ? 2 : 1;
  }
}
