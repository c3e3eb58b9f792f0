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
#include "pilotwave/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pilotwave {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void write_row(std::ostream& os, const double* row, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    if (j) os << ' ';
    os << format_double(row[j]);
  }
  os << '\n';
}

}  // namespace

void write_density_grid(std::ostream& os, const DensityField& field, const std::string& spec) {
  os << "# resolution " << field.resolution << '\n'
     << "# time " << format_double(field.time) << '\n'
     << "# spec " << spec << '\n'
     << "# mask_count " << field.mask_count() << '\n';
  const std::size_t R = static_cast<std::size_t>(field.resolution);
  std::vector<double> row(R);
  for (std::size_t i = 0; i < R; ++i) {
    for (std::size_t j = 0; j < R; ++j) {
      const std::size_t k = i * R + j;
      row[j] = field.mask[k] ? field.values[k] : std::numeric_limits<double>::quiet_NaN();
    }
    write_row(os, row.data(), R);
  }
}

void write_smoothed_grid(std::ostream& os, const SmoothedGrid& grid, const std::string& spec) {
  os << "# points " << SmoothedGrid::kPoints << '\n'
     << "# time " << format_double(grid.time) << '\n'
     << "# spec " << spec << '\n'
     << "# origin " << format_double(SmoothedGrid::kOrigin) << '\n'
     << "# spacing " << format_double(SmoothedGrid::kSpacing) << '\n';
  for (int k = 0; k < SmoothedGrid::kPoints; ++k)
    write_row(os, grid.values.data() + static_cast<std::size_t>(k) * SmoothedGrid::kPoints,
              SmoothedGrid::kPoints);
}

void write_node_path(std::ostream& os, const NodePath& path) {
  os << "# node path " << path.state_id << '\n' << "# t x1 x2\n";
  for (const auto& [t, x] : path.samples)
    os << format_double(t) << ' ' << format_double(x.x) << ' ' << format_double(x.y) << '\n';
}

void write_trajectory(std::ostream& os, const TrajectoryResult& traj, const std::string& spec) {
  os << "# trajectory " << spec << '\n'
     << "# status " << to_string(traj.status) << " steps " << traj.steps_taken << '\n'
     << "# t x1 x2\n";
  for (const auto& [t, x] : traj.path)
    os << format_double(t) << ' ' << format_double(x.x) << ' ' << format_double(x.y) << '\n';
}

DensityField read_density_grid(std::istream& is) {
  DensityField field;
  std::string line;
  while (is.peek() == '#' && std::getline(is, line)) {
    std::istringstream hs(line.substr(1));
    std::string key;
    hs >> key;
    if (key == "resolution") hs >> field.resolution;
    if (key == "time") {
      std::string v;
      hs >> v;
      field.time = std::stod(v);
    }
  }
  if (field.resolution <= 0) throw std::runtime_error("density grid without resolution header");
  const std::size_t n = static_cast<std::size_t>(field.resolution) * field.resolution;
  field.values.assign(n, 0.0);
  field.mask.assign(n, 0);
  std::string token;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(is >> token)) throw std::runtime_error("density grid truncated");
    if (token == "nan") continue;
    field.values[k] = std::stod(token);
    field.mask[k] = 1;
  }
  return field;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace pilotwave
