// Scenario runner: JSON configs in, CSV / PGM out.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "prdsim/scenario/builtins.hpp"
#include "prdsim/scenario/config.hpp"
#include "prdsim/scenario/runner.hpp"

namespace fs = std::filesystem;
using namespace prdsim::scenario;

namespace {

enum Exit { ok = 0, parse_failure = 2, validation_failure = 3, runtime_failure = 4 };

int report(const OutputBundle& b, prdsim::scenario::Mode mode) {
  std::cout << "scenario " << b.name << " (" << to_string(mode) << ")\n" << format_ledger(b.ledger);
  for (const ManifestEntry& f : b.files) std::cout << "wrote " << f.path << "  sha256 " << f.sha256 << '\n';
  if (!b.manifest_path.empty()) std::cout << "manifest " << b.manifest_path.string() << '\n';
  for (const std::string& w : b.warnings) std::cerr << "warning: " << w << '\n';
  return ok;
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    std::cerr << "parse error at line " << e.line() << ", column " << e.column() << ": " << e.what() << '\n';
    return parse_failure;
  } catch (const ValidationError& e) {
    std::cerr << "invalid config field '" << e.field() << "': " << e.what() << '\n';
    return validation_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return runtime_failure;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incoherent-light interferometer simulator"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a scenario config");
  run->add_option("config", config_path, "Scenario JSON file")->required();

  auto* list = app.add_subcommand("list-builtins", "List the built-in scenarios");

  std::string show_name;
  auto* show = app.add_subcommand("show-builtin", "Print a built-in scenario as JSON");
  show->add_option("name", show_name)->required();

  std::string builtin_name;
  std::string out_dir;
  auto* run_builtin = app.add_subcommand("run-builtin", "Run a built-in scenario");
  run_builtin->add_option("name", builtin_name)->required();
  run_builtin->add_option("--out", out_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    return guarded([&] {
      const fs::path path(config_path);
      const ScenarioConfig config = load_config(path);
      const fs::path base = path.parent_path().empty() ? fs::path(".") : path.parent_path();
      return report(run_scenario(config, base), config.mode);
    });
  }
  if (*list) {
    for (const ScenarioConfig& c : builtin_scenarios()) std::cout << c.name << '\n';
    return ok;
  }
  if (*show) {
    const auto c = find_builtin(show_name);
    if (!c) {
      std::cerr << "unknown builtin '" << show_name << "'\n";
      return validation_failure;
    }
    std::cout << to_json(*c).dump(2) << '\n';
    return ok;
  }
  if (*run_builtin) {
    return guarded([&] {
      const auto c = find_builtin(builtin_name);
      if (!c) throw ValidationError("name", "unknown builtin '" + builtin_name + "'");
      fs::create_directories(out_dir);
      return report(run_scenario(*c, fs::path(out_dir)), c->mode);
    });
  }
  return ok;
}
