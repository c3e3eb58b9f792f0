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

#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "pilotwave/ensemble.hpp"
#include "pilotwave/guidance.hpp"
#include "pilotwave/wavefield.hpp"

namespace pilotwave {

struct CriterionResult {
  int id{0};
  std::string title;
  bool passed{false};
  std::string detail;
  double seconds{0.0};
};

/// One line per criterion: "AC<id> PASS|FAIL <title> (<seconds> s): <detail>".
std::string format_result(const CriterionResult& r);

/// The acceptance presets. Backtracked lattices are cached so criteria that
/// share a (state, guidance, time) triple integrate it once.
class AcceptanceSuite {
 public:
  static constexpr int kReducedResolution = 256;
  static constexpr int kFullResolution = 1024;

  explicit AcceptanceSuite(int workers = 0, std::ostream* log = nullptr);

  CriterionResult t0_hbar_ratios();
  CriterionResult backtrack_ordering();
  CriterionResult relaxation_ordering();
  CriterionResult equivariance();
  CriterionResult fine_h_conservation();
  CriterionResult circulation_quantization();
  CriterionResult divergence_free();
  CriterionResult flow_composition();
  CriterionResult psi2_contrast();

  std::vector<CriterionResult> run_all();

 private:
  using Key = std::tuple<std::string, double, int, double, int>;

  const WaveState& state(const std::string& name) const;
  const BacktrackField& backtrack(const std::string& state_name, const GuidanceSpec& spec,
                                  double t, int resolution = kReducedResolution);
  double hbar_at(const std::string& state_name, const GuidanceSpec& spec, DensityKind kind,
                 double t, int resolution = kReducedResolution);
  double pct_at(const std::string& state_name, const GuidanceSpec& spec, double t);

  int workers_;
  std::ostream* log_;
  WaveState psi1_;
  WaveState psi2_;
  std::map<Key, BacktrackField> cache_;
};

}  // namespace pilotwave
