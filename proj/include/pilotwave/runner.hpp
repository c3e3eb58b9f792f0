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
#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pilotwave/ensemble.hpp"
#include "pilotwave/guidance.hpp"
#include "pilotwave/integrate.hpp"
#include "pilotwave/wavefield.hpp"

namespace pilotwave {

/// One experiment: every (guidance x density x time) combination on one
/// wave state.
struct RunConfig {
  std::string name{"run"};
  std::string wavefunction{"psi1"};  // builder name, or "custom" with modes
  std::vector<Mode> modes;
  std::vector<GuidanceSpec> guidance;
  std::vector<DensityKind> densities;
  std::vector<double> times;
  Lattice lattice;
  IntegratorConfig integrator;
  std::filesystem::path outputs{"out"};
  bool figures{false};
  bool density_grids{false};
  bool timings{true};
  /// Multiplies hbar for the scaled table column; unset means no column.
  std::optional<double> hbar_scale;
  int workers{0};  // 0 = default_workers()

  WaveState make_state() const;
  /// Throws std::invalid_argument on anything that cannot be evaluated.
  void validate() const;
};

/// Parses a time such as 12.5, "4pi", "pi/2", "0.5 pi".
double parse_time(const nlohmann::json& j);
std::string time_label(double t);

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path);

/// Built-in experiment presets: "psi1_f1", "psi1_f2f3", "psi2".
std::vector<std::string> preset_names();
RunConfig preset_config(const std::string& name);

struct ReportRow {
  DensityKind density{DensityKind::Rho0};
  GuidanceSpec spec;
  double t{0.0};
  double hbar{0.0};
  double backtrack_pct{100.0};
  double runtime_s{0.0};
  std::size_t ok_points{0};
  std::size_t attempted_points{0};
  double mass{0.0};
};

struct RunManifest {
  nlohmann::json config;
  std::vector<ReportRow> rows;
  double wall_seconds{0.0};
  std::string version;
  IntegratorConfig integrator;
  std::optional<double> hbar_scale;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

/// Executes every task, writes report.csv, manifest.json and the optional
/// grid files under cfg.outputs, and returns the manifest. `log` receives
/// one progress line per task.
RunManifest run(const RunConfig& cfg, std::ostream* log = nullptr);

/// Report CSV: density,mu,f,t,hbar,backtrack_pct,runtime_s.
std::string report_csv(const RunManifest& manifest);

/// Aligned text tables of backtrack percentages and hbar values.
std::string table_render(const RunManifest& manifest);

/// Writes trajectories from the box centre over one period for every
/// guidance spec, and the node path when the state has a single node.
void figure_dump(const RunConfig& cfg, const WaveState& state, std::ostream* log = nullptr);

}  // namespace pilotwave
