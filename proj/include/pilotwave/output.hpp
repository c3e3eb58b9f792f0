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
#include <ostream>
#include <string>
#include <vector>

#include "pilotwave/ensemble.hpp"
#include "pilotwave/integrate.hpp"
#include "pilotwave/nodes.hpp"

namespace pilotwave {

/// Header lines are "# key value"; masked points are written as "nan".
void write_density_grid(std::ostream& os, const DensityField& field, const std::string& spec);
void write_smoothed_grid(std::ostream& os, const SmoothedGrid& grid, const std::string& spec);
/// Rows of "t x1 x2".
void write_node_path(std::ostream& os, const NodePath& path);
void write_trajectory(std::ostream& os, const TrajectoryResult& traj, const std::string& spec);

/// Reads back a grid written by write_density_grid.
DensityField read_density_grid(std::istream& is);

/// Writes `text` to `path`, creating parent directories. Throws
/// std::runtime_error when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// "%.17g"-style round-trip formatting used by every text output.
std::string format_double(double v);

}  // namespace pilotwave
