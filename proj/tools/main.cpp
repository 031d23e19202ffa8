// scriptcausal: command-line entry point for every pipeline stage.
//
// Settings resolve as command line > --config file > defaults. After a
// command succeeds, a manifest line (command, config hash, seed, outputs) is
// appended to the run log.
//
// Exit codes: 0 success, 1 usage/config error, 2 data-format error,
// 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "run_config.hpp"
#include "scriptcausal/errors.hpp"

using namespace scriptcausal;
using namespace scriptcausal::cli;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFormat = 2;
constexpr int kExitNumerical = 3;

const std::vector<std::string> kGlobalKeys{"seed", "threads", "run_log"};

std::string flag_name(const std::string& key) {
  std::string s = "--" + key;
  for (auto& c : s)
    if (c == '_') c = '-';
  return s;
}

std::string describe(const FieldSpec& f) {
  std::string h = f.help;
  if (*f.fallback) h += " [default: " + std::string(f.fallback) + "]";
  return h;
}

// Raw command-line values for one subcommand.
struct Bound {
  std::map<std::string, std::string> text;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::Option*> options;
};

void bind(CLI::App& app, const std::string& key, Bound& b) {
  const auto& f = field_spec(key);
  if (f.kind == FieldKind::flag) {
    b.options[key] = app.add_flag(flag_name(key) + ",!--no-" + flag_name(key).substr(2),
                                  b.flags[key], describe(f));
  } else {
    static const std::map<FieldKind, const char*> kTypeNames{
        {FieldKind::input_path, "PATH"}, {FieldKind::output_path, "PATH"},
        {FieldKind::output_dir, "DIR"},  {FieldKind::text, "TEXT"},
        {FieldKind::count, "UINT"},      {FieldKind::real, "FLOAT"},
        {FieldKind::counts, "UINT,..."}, {FieldKind::texts, "TEXT,..."}};
    b.options[key] =
        app.add_option(flag_name(key), b.text[key], describe(f))->type_name(kTypeNames.at(f.kind));
  }
}

RunConfig resolve(const Command& cmd, const Bound& global, const Bound& local,
                  const std::string& config_path) {
  std::vector<std::string> keys = kGlobalKeys;
  keys.insert(keys.end(), cmd.keys.begin(), cmd.keys.end());
  RunConfig cfg;
  for (const auto& key : keys) cfg.set_raw(key, field_spec(key).fallback);
  if (!config_path.empty()) {
    const auto doc = read_config_file(config_path);
    for (const auto& key : keys)
      if (doc.contains(key)) cfg.set_json(key, doc.at(key));
  }
  for (const Bound* b : {&global, &local}) {
    for (const auto& [key, opt] : b->options) {
      if (opt->count() == 0) continue;
      if (b->flags.count(key))
        cfg.set_json(key, b->flags.at(key));
      else
        cfg.set_raw(key, b->text.at(key));
    }
  }
  cfg.validate(keys, cmd.required);
  return cfg;
}

void append_manifest(const Command& cmd, const RunConfig& cfg, const std::vector<std::string>& outputs) {
  const auto log = cfg.text("run_log");
  if (log.empty() || log == "none") return;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(cfg.hash()));
  nlohmann::json line{{"command", cmd.name},
                      {"config_hash", hash},
                      {"seed", cfg.count("seed")},
                      {"outputs", outputs},
                      {"config", cfg.values()}};
  std::ofstream out(log, std::ios::app);
  if (!out) {
    std::fprintf(stderr, "warning: cannot append to run log %s\n", log.c_str());
    return;
  }
  out << line.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scriptcausal: causal script induction from narrative event chains"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "flat JSON config file")->check(CLI::ExistingFile);
  Bound global;
  for (const auto& key : kGlobalKeys) bind(app, key, global);

  std::map<std::string, Bound> locals;
  std::map<CLI::App*, const Command*> by_app;
  for (const auto& cmd : commands()) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    auto& bound = locals[cmd.name];
    for (const auto& key : cmd.keys) bind(*sub, key, bound);
    by_app[sub] = &cmd;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const Command* cmd = nullptr;
  for (const auto& [sub, c] : by_app)
    if (sub->parsed()) cmd = c;

  try {
    const auto cfg = resolve(*cmd, global, locals.at(cmd->name), config_path);
    const auto outputs = cmd->run(cfg);
    append_manifest(*cmd, cfg, outputs);
    return 0;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "format error: %s\n", e.what());
    return kExitFormat;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
}
