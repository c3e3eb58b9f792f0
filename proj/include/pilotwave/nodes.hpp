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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pilotwave/wavefield.hpp"

namespace pilotwave {

struct NodePath {
  std::string state_id;
  std::vector<std::pair<double, Vec2>> samples;  // (t, node position)
};

struct NodeTrack {
  std::vector<NodePath> segments;
  std::vector<std::string> warnings;
};

/// Damped Newton iteration on x -> (Re psi, Im psi) from `start`. Returns a
/// transversal zero strictly inside the box or nothing.
std::optional<Vec2> refine_node(const WaveState& state, double t, const Vec2& start);

/// Isolated interior zeros of psi at time t. Seeds are the cells of a
/// seed_resolution^2 grid whose corners change sign in both Re psi and
/// Im psi. Roots closer than 1e-6 are merged. Line zeros (a single
/// eigenmode) are not isolated and are never reported.
std::vector<Vec2> find_nodes(const WaveState& state, double t, int seed_resolution = 64,
                             std::vector<std::string>* warnings = nullptr);

/// Follows the single node present at t0 up to t1 in steps of about dt,
/// continuing Newton from the previous position and falling back to a
/// global search. A change in node count ends the current segment.
/// Throws std::invalid_argument unless exactly one node exists at t0.
NodeTrack track_node(const WaveState& state, double t0, double t1, double dt,
                     int seed_resolution = 64);

}  // namespace pilotwave
