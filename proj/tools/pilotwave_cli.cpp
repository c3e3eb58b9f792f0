//
//  pilotwave: trajectory simulations of quantum relaxation in a square box.
//
//  Copyright 2026 The pilotwave Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.
//
// Command-line front end: run experiments, render tables, run the acceptance checks.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pilotwave/check.hpp"
#include "pilotwave/runner.hpp"

namespace fs = std::filesystem;
using namespace pilotwave;

namespace {

RunConfig resolve_config(const std::string& what) {
  for (const auto& name : preset_names())
    if (name == what) return preset_config(name);
  if (!fs::exists(what))
    throw std::invalid_argument("'" + what + "' is neither a preset nor a config file");
  return load_config(what);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory simulations of quantum relaxation in a square box"};
  app.set_version_flag("--version", std::string(PILOTWAVE_VERSION));
  app.require_subcommand(1);

  std::string target;
  std::string outputs;
  int workers = 0;
  bool quiet = false;
  bool print_config = false;
  auto* run_cmd = app.add_subcommand("run", "Run a config file or a preset");
  run_cmd->add_option("config", target, "Config JSON path or preset name")->required();
  run_cmd->add_option("-o,--outputs", outputs, "Override the output directory");
  run_cmd->add_option("-j,--workers", workers, "Worker threads (0 = default)");
  run_cmd->add_flag("-q,--quiet", quiet, "No progress lines");
  run_cmd->add_flag("--print-config", print_config, "Print the resolved config and exit");

  std::string manifest_path;
  auto* tables_cmd = app.add_subcommand("tables", "Render tables from a manifest.json");
  tables_cmd->add_option("manifest", manifest_path, "Path to manifest.json")->required();

  auto* presets_cmd = app.add_subcommand("presets", "List built-in presets");

  int check_workers = 0;
  auto* check_cmd = app.add_subcommand("check", "Run the acceptance criteria");
  check_cmd->add_option("-j,--workers", check_workers, "Worker threads (0 = default)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      RunConfig cfg = resolve_config(target);
      if (!outputs.empty()) cfg.outputs = outputs;
      if (workers > 0) cfg.workers = workers;
      cfg.validate();
      if (print_config) {
        std::cout << config_to_json(cfg).dump(2) << '\n';
        return 0;
      }
      const auto manifest = run(cfg, quiet ? nullptr : &std::cerr);
      std::cout << table_render(manifest);
      return 0;
    }
    if (*tables_cmd) {
      std::ifstream in(manifest_path);
      if (!in) throw std::runtime_error("cannot open " + manifest_path);
      const auto manifest = RunManifest::from_json(nlohmann::json::parse(in));
      std::cout << table_render(manifest);
      return 0;
    }
    if (*presets_cmd) {
      for (const auto& name : preset_names()) std::cout << name << '\n';
      return 0;
    }
    if (*check_cmd) {
      AcceptanceSuite suite(check_workers, &std::cerr);
      int failed = 0;
      for (const auto& r : suite.run_all()) {
        std::cout << format_result(r) << '\n';
        failed += r.passed ? 0 : 1;
      }
      std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " failed")
                << '\n';
      return failed == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "pilotwave: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
