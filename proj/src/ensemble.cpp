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
#include "pilotwave/ensemble.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "pilotwave/parallel.hpp"

namespace pilotwave {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kHalfPi = kBoxSide / 2.0;

double rho0(double x1, double x2) {
  const double s = (2.0 / kBoxSide) * std::sin(x1) * std::sin(x2);
  return s * s;
}

// 4 rho0(2(x1 - o1), 2(x2 - o2)) on the quadrant with lower corner (o1, o2).
double quadrant_density(const Vec2& x, double o1, double o2) {
  if (x.x < o1 || x.x > o1 + kHalfPi || x.y < o2 || x.y > o2 + kHalfPi) return 0.0;
  return 4.0 * rho0(2.0 * (x.x - o1), 2.0 * (x.y - o2));
}

// Row-major (R + 1)^2 prefix sums of masked values and mask counts.
struct PrefixSums {
  int n;
  std::vector<double> sum;
  std::vector<long> count;

  explicit PrefixSums(const DensityField& f)
      : n(f.resolution),
        sum(static_cast<std::size_t>(n + 1) * (n + 1), 0.0),
        count(static_cast<std::size_t>(n + 1) * (n + 1), 0) {
    for (int i = 0; i < n; ++i) {
      double row_sum = 0.0;
      long row_count = 0;
      for (int j = 0; j < n; ++j) {
        const std::size_t k = static_cast<std::size_t>(i) * n + j;
        if (f.mask[k]) {
          row_sum += f.values[k];
          ++row_count;
        }
        sum[at(i + 1, j + 1)] = sum[at(i, j + 1)] + row_sum;
        count[at(i + 1, j + 1)] = count[at(i, j + 1)] + row_count;
      }
    }
  }

  std::size_t at(int i, int j) const { return static_cast<std::size_t>(i) * (n + 1) + j; }

  // Over the half-open index block [i0, i1) x [j0, j1).
  std::pair<double, long> block(int i0, int i1, int j0, int j1) const {
    const double s = sum[at(i1, j1)] - sum[at(i0, j1)] - sum[at(i1, j0)] + sum[at(i0, j0)];
    const long c = count[at(i1, j1)] - count[at(i0, j1)] - count[at(i1, j0)] + count[at(i0, j0)];
    return {s, c};
  }
};

}  // namespace

std::string to_string(DensityKind k) {
  switch (k) {
    case DensityKind::Equilibrium:
      return "equilibrium";
    case DensityKind::Rho0:
      return "rho0";
    case DensityKind::Rho1:
      return "rho1";
    case DensityKind::Rho2:
      return "rho2";
    case DensityKind::Rho3:
      return "rho3";
    case DensityKind::Rho4:
      return "rho4";
  }
  return "equilibrium";
}

DensityKind parse_density_kind(const std::string& s) {
  if (s == "equilibrium") return DensityKind::Equilibrium;
  if (s == "rho0") return DensityKind::Rho0;
  if (s == "rho1") return DensityKind::Rho1;
  if (s == "rho2") return DensityKind::Rho2;
  if (s == "rho3") return DensityKind::Rho3;
  if (s == "rho4") return DensityKind::Rho4;
  throw std::invalid_argument("unknown density '" + s + "'");
}

double initial_density(DensityKind kind, const WaveState& state, const Vec2& x) {
  switch (kind) {
    case DensityKind::Equilibrium:
      return state.density(x, 0.0);
    case DensityKind::Rho0:
      return rho0(x.x, x.y);
    case DensityKind::Rho1:
      return quadrant_density(x, 0.0, 0.0);
    case DensityKind::Rho2:
      return quadrant_density(x, kHalfPi, 0.0);
    case DensityKind::Rho3:
      return quadrant_density(x, 0.0, kHalfPi);
    case DensityKind::Rho4:
      return quadrant_density(x, kHalfPi, kHalfPi);
  }
  return 0.0;
}

void Lattice::validate() const {
  if (resolution < 1 || cells < 1) throw std::invalid_argument("lattice sizes must be positive");
  if (resolution % cells != 0)
    throw std::invalid_argument("lattice resolution must be a multiple of the cell count");
  if (margin < 0 || 2 * margin >= cells)
    throw std::invalid_argument("lattice margin must leave interior cells");
}

bool Lattice::excluded(int i, int j) const {
  const int band = margin * points_per_cell();
  return i < band || j < band || i >= resolution - band || j >= resolution - band;
}

std::size_t Lattice::attempted_count() const {
  const std::size_t inner = static_cast<std::size_t>(resolution - 2 * margin * points_per_cell());
  return inner * inner;
}

double BacktrackField::backtrack_pct() const {
  if (attempted_count == 0) return 100.0;
  return 100.0 * static_cast<double>(ok_count) / static_cast<double>(attempted_count);
}

std::size_t DensityField::mask_count() const {
  std::size_t n = 0;
  for (auto m : mask) n += m ? 1 : 0;
  return n;
}

double DensityField::mass() const {
  const double cell = (kBoxSide / resolution) * (kBoxSide / resolution);
  double total = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k)
    if (mask[k]) total += values[k];
  return total * cell;
}

BacktrackField backtrack_lattice(const WaveState& state, const GuidanceSpec& spec,
                                 const Lattice& lattice, double t, const IntegratorConfig& cfg,
                                 int workers) {
  lattice.validate();
  cfg.validate();
  if (t < 0.0) throw std::invalid_argument("evolution time must be >= 0");

  BacktrackField out;
  out.lattice = lattice;
  out.time = t;
  const std::size_t n = lattice.size();
  out.origin.assign(n, Vec2{});
  out.attempted.assign(n, 0);
  out.ok.assign(n, 0);
  std::vector<long> steps(n, 0);

  const int R = lattice.resolution;
  const GuidedField field(state, spec);
  parallel_for(n, workers, [&](std::size_t k) {
    const int i = static_cast<int>(k / static_cast<std::size_t>(R));
    const int j = static_cast<int>(k % static_cast<std::size_t>(R));
    if (lattice.excluded(i, j)) return;
    out.attempted[k] = 1;
    const auto result = integrate_field(field, lattice.point(i, j), t, 0.0, cfg);
    out.origin[k] = result.x_final;
    out.ok[k] = result.ok() ? 1 : 0;
    steps[k] = result.steps_taken;
  });

  for (std::size_t k = 0; k < n; ++k) {
    out.attempted_count += out.attempted[k];
    out.ok_count += out.ok[k];
    out.total_steps += steps[k];
  }
  return out;
}

DensityField density_from_backtrack(const WaveState& state, DensityKind kind,
                                    const BacktrackField& backtrack, int workers) {
  const Lattice& lattice = backtrack.lattice;
  const int R = lattice.resolution;
  DensityField out;
  out.resolution = R;
  out.time = backtrack.time;
  out.values.assign(lattice.size(), 0.0);
  out.mask.assign(lattice.size(), 0);

  parallel_for(lattice.size(), workers, [&](std::size_t k) {
    if (!backtrack.ok[k]) return;
    const int i = static_cast<int>(k / static_cast<std::size_t>(R));
    const int j = static_cast<int>(k % static_cast<std::size_t>(R));
    const Vec2& x0 = backtrack.origin[k];
    const double eq0 = state.density(x0, 0.0);
    if (!(eq0 > 0.0)) return;
    const double f = initial_density(kind, state, x0) / eq0;
    out.values[k] = state.density(lattice.point(i, j), backtrack.time) * f;
    out.mask[k] = 1;
  }, 4096);
  return out;
}

DensityField evolve_density(const WaveState& state, const GuidanceSpec& spec, DensityKind kind,
                            double t, const Lattice& lattice, const IntegratorConfig& cfg,
                            int workers) {
  return density_from_backtrack(state, kind, backtrack_lattice(state, spec, lattice, t, cfg, workers),
                                workers);
}

CoarseField coarse_grain(const DensityField& field, int cells, int margin) {
  const int R = field.resolution;
  if (cells < 1 || R % cells != 0)
    throw std::invalid_argument("coarse cells must divide the lattice resolution");
  const int p = R / cells;
  const PrefixSums sums(field);

  CoarseField out;
  out.resolution = R;
  out.cells = cells;
  out.excluded_margin = margin;
  out.values.assign(static_cast<std::size_t>(cells) * cells, kNaN);
  out.counts.assign(static_cast<std::size_t>(cells) * cells, 0);
  for (int a = 0; a < cells; ++a) {
    for (int b = 0; b < cells; ++b) {
      const std::size_t k = static_cast<std::size_t>(a) * cells + b;
      const auto [s, c] = sums.block(a * p, (a + 1) * p, b * p, (b + 1) * p);
      out.counts[k] = static_cast<int>(c);
      const bool in_margin =
          a < margin || b < margin || a >= cells - margin || b >= cells - margin;
      if (!in_margin && c > 0) out.values[k] = s / static_cast<double>(c);
    }
  }
  return out;
}

bool CoarseField::has_value(int a, int b) const { return !std::isnan(at(a, b)); }

double hbar(const CoarseField& rho, const CoarseField& eq) {
  if (rho.cells != eq.cells || rho.resolution != eq.resolution ||
      rho.excluded_margin != eq.excluded_margin)
    throw std::invalid_argument("coarse fields have different geometry");
  double total = 0.0;
  for (int a = 0; a < rho.cells; ++a) {
    for (int b = 0; b < rho.cells; ++b) {
      if (rho.has_value(a, b) != eq.has_value(a, b))
        throw std::invalid_argument("coarse fields have different valid cells");
      if (!rho.has_value(a, b)) continue;
      const double r = rho.at(a, b);
      const double e = eq.at(a, b);
      if (!(e > 0.0)) throw std::invalid_argument("equilibrium cell is not positive");
      if (r > 0.0) total += r * std::log(r / e);
    }
  }
  return total * rho.cell_area();
}

double cell_sum_scale(int cells) {
  const double c = static_cast<double>(cells) / kBoxSide;
  return c * c;
}

SmoothedGrid smooth(const DensityField& field) {
  const int R = field.resolution;
  if (R % 128 != 0) throw std::invalid_argument("smoothing requires a resolution divisible by 128");
  const int scale = R / 128;
  const PrefixSums sums(field);

  SmoothedGrid out;
  out.time = field.time;
  const std::size_t n = static_cast<std::size_t>(SmoothedGrid::kPoints) * SmoothedGrid::kPoints;
  out.values.assign(n, kNaN);
  out.counts.assign(n, 0);
  // Window of side pi/16 around grid point k covers lattice indices
  // [scale (k + 8), scale (k + 16)).
  for (int k = 0; k < SmoothedGrid::kPoints; ++k) {
    for (int l = 0; l < SmoothedGrid::kPoints; ++l) {
      const auto [s, c] =
          sums.block(scale * (k + 8), scale * (k + 16), scale * (l + 8), scale * (l + 16));
      const std::size_t idx = static_cast<std::size_t>(k) * SmoothedGrid::kPoints + l;
      out.counts[idx] = static_cast<int>(c);
      if (c > 0) out.values[idx] = s / static_cast<double>(c);
    }
  }
  return out;
}

double fine_H(const DensityField& rho, const DensityField& eq) {
  if (rho.resolution != eq.resolution || rho.values.size() != eq.values.size())
    throw std::invalid_argument("density fields have different resolution");
  double total = 0.0;
  for (std::size_t k = 0; k < rho.values.size(); ++k) {
    if (!rho.mask[k] || !eq.mask[k]) continue;
    const double r = rho.values[k];
    const double e = eq.values[k];
    if (!(e > 0.0)) throw std::invalid_argument("equilibrium value is not positive");
    if (r > 0.0) total += r * std::log(r / e);
  }
  const double h = kBoxSide / rho.resolution;
  return total * h * h;
}

int default_workers() {
  if (const char* env = std::getenv("PILOTWAVE_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace pilotwave
