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

#include <cstdint>
#include <string>
#include <vector>

#include "pilotwave/guidance.hpp"
#include "pilotwave/integrate.hpp"
#include "pilotwave/wavefield.hpp"

namespace pilotwave {

/// Initial ensemble densities: |psi(x,0)|^2, the ground-state density rho0,
/// and rho1..rho4, which are rho0 contracted into one quadrant each.
enum class DensityKind { Equilibrium, Rho0, Rho1, Rho2, Rho3, Rho4 };

std::string to_string(DensityKind k);
/// Parses "equilibrium", "rho0" .. "rho4". Throws std::invalid_argument.
DensityKind parse_density_kind(const std::string& s);

double initial_density(DensityKind kind, const WaveState& state, const Vec2& x);

/// Uniform R x R lattice over the box, coarse cells of R/C points a side,
/// and an excluded band `margin` cells wide along every wall.
///
/// Lattice index (i, j) is 0-based; its point is ((i + 1/2) pi/R,
/// (j + 1/2) pi/R). Storage is row-major with i (the x1 index) as the row.
struct Lattice {
  int resolution{1024};
  int cells{32};
  int margin{2};

  /// Throws std::invalid_argument unless C divides R and 2 margin < C.
  void validate() const;
  double spacing() const { return kBoxSide / resolution; }
  int points_per_cell() const { return resolution / cells; }
  std::size_t size() const {
    return static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
  }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(resolution) +
           static_cast<std::size_t>(j);
  }
  Vec2 point(int i, int j) const { return {(i + 0.5) * spacing(), (j + 0.5) * spacing()}; }
  /// True for lattice points inside the excluded boundary band.
  bool excluded(int i, int j) const;
  std::size_t attempted_count() const;
};

/// Backtracked origins of every lattice point from time `time` to 0.
struct BacktrackField {
  Lattice lattice;
  double time{0.0};
  std::vector<Vec2> origin;
  std::vector<std::uint8_t> attempted;
  std::vector<std::uint8_t> ok;
  std::size_t attempted_count{0};
  std::size_t ok_count{0};
  long total_steps{0};

  /// Percentage of attempted points whose backtracking finished with Ok.
  double backtrack_pct() const;
};

struct DensityField {
  int resolution{0};
  double time{0.0};
  std::vector<double> values;
  std::vector<std::uint8_t> mask;

  std::size_t mask_count() const;
  /// Sum of values (pi/R)^2 over mask-true points.
  double mass() const;
};

struct CoarseField {
  int resolution{0};
  int cells{0};
  int excluded_margin{0};
  std::vector<double> values;  // NaN where the cell carries no value
  std::vector<int> counts;

  bool has_value(int a, int b) const;
  double at(int a, int b) const {
    return values[static_cast<std::size_t>(a) * static_cast<std::size_t>(cells) +
                  static_cast<std::size_t>(b)];
  }
  double cell_area() const { return (kBoxSide / cells) * (kBoxSide / cells); }
};

/// Window averages of side pi/16 centred on the points
/// (k pi/128 + 3 pi/32, l pi/128 + 3 pi/32), k, l = 0..104.
struct SmoothedGrid {
  static constexpr int kPoints = 105;
  static constexpr double kSpacing = kBoxSide / 128.0;
  static constexpr double kOrigin = 3.0 * kBoxSide / 32.0;

  double time{0.0};
  std::vector<double> values;  // NaN where the window had no valid points
  std::vector<int> counts;

  static double coordinate(int k) { return k * kSpacing + kOrigin; }
  double at(int k, int l) const { return values[static_cast<std::size_t>(k) * kPoints + l]; }
};

/// Backtracks every non-excluded lattice point from t to 0 on `workers`
/// threads. Results are stored by lattice index.
BacktrackField backtrack_lattice(const WaveState& state, const GuidanceSpec& spec,
                                 const Lattice& lattice, double t, const IntegratorConfig& cfg,
                                 int workers);

/// rho(x, t) = |psi(x, t)|^2 rho(x0, 0) / |psi(x0, 0)|^2 at Ok points.
DensityField density_from_backtrack(const WaveState& state, DensityKind kind,
                                    const BacktrackField& backtrack, int workers = 1);

DensityField evolve_density(const WaveState& state, const GuidanceSpec& spec, DensityKind kind,
                            double t, const Lattice& lattice, const IntegratorConfig& cfg,
                            int workers);

/// Per-cell mean over mask-true points; margin cells and cells without
/// valid points carry no value.
CoarseField coarse_grain(const DensityField& field, int cells, int margin);

/// Sum over valid cells of area * rho ln(rho / eq). Throws
/// std::invalid_argument when the geometries or valid-cell sets differ or
/// an equilibrium cell is not positive.
double hbar(const CoarseField& rho, const CoarseField& eq);

/// Factor that turns hbar into the plain cell sum (1 / cell area).
double cell_sum_scale(int cells);

/// Requires R divisible by 128.
SmoothedGrid smooth(const DensityField& field);

/// Lattice sum of (pi/R)^2 rho ln(rho / eq) over points valid in both
/// fields. Throws std::invalid_argument on mismatched resolution or a
/// non-positive equilibrium value.
double fine_H(const DensityField& rho, const DensityField& eq);

}  // namespace pilotwave
