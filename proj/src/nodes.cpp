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
#include "pilotwave/nodes.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pilotwave {

namespace {

constexpr int kMaxIterations = 50;
constexpr double kResidual = 1e-13;
constexpr double kMergeDistance = 1e-6;
constexpr double kWallClearance = 1e-9;

bool interior(const Vec2& p) {
  return p.x > kWallClearance && p.x < kBoxSide - kWallClearance && p.y > kWallClearance &&
         p.y < kBoxSide - kWallClearance;
}

}  // namespace

std::optional<Vec2> refine_node(const WaveState& state, double t, const Vec2& start) {
  Vec2 x = start;
  ComplexJet jet = state.jet(x, t, JetOrder::First);
  double residual = std::abs(jet.value);
  for (int it = 0; it < kMaxIterations; ++it) {
    const cplx d1 = jet.grad[0], d2 = jet.grad[1];
    // Jacobian of (Re psi, Im psi) with respect to (x1, x2).
    const double a = d1.real(), b = d2.real(), c = d1.imag(), d = d2.imag();
    const double det = a * d - b * c;
    const double scale = std::norm(d1) + std::norm(d2);
    if (!(std::abs(det) > 1e-8 * scale) || scale == 0.0) return std::nullopt;
    const double fr = jet.value.real(), fi = jet.value.imag();
    Vec2 delta{(d * fr - b * fi) / det, (-c * fr + a * fi) / det};

    double damping = 1.0;
    Vec2 trial = x - delta;
    ComplexJet trial_jet = state.jet(trial, t, JetOrder::First);
    while (std::abs(trial_jet.value) > residual && damping > 1e-3) {
      damping *= 0.5;
      trial = x - damping * delta;
      trial_jet = state.jet(trial, t, JetOrder::First);
    }
    x = trial;
    jet = trial_jet;
    residual = std::abs(jet.value);
    if (!in_box(x)) return std::nullopt;
    if (residual < kResidual) break;
  }
  if (!(residual < kResidual) || !interior(x)) return std::nullopt;
  return x;
}

std::vector<Vec2> find_nodes(const WaveState& state, double t, int seed_resolution,
                             std::vector<std::string>* warnings) {
  if (seed_resolution < 32) throw std::invalid_argument("seed_resolution must be >= 32");
  const int n = seed_resolution;
  const double h = kBoxSide / n;
  std::vector<cplx> corner(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      corner[static_cast<std::size_t>(a) * (n + 1) + b] = state.value({a * h, b * h}, t);

  auto changes_sign = [](double p, double q, double r, double s) {
    const double lo = std::min(std::min(p, q), std::min(r, s));
    const double hi = std::max(std::max(p, q), std::max(r, s));
    return lo <= 0.0 && hi >= 0.0;
  };

  std::vector<Vec2> roots;
  int seeds = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const cplx c00 = corner[static_cast<std::size_t>(a) * (n + 1) + b];
      const cplx c10 = corner[static_cast<std::size_t>(a + 1) * (n + 1) + b];
      const cplx c01 = corner[static_cast<std::size_t>(a) * (n + 1) + b + 1];
      const cplx c11 = corner[static_cast<std::size_t>(a + 1) * (n + 1) + b + 1];
      if (!changes_sign(c00.real(), c10.real(), c01.real(), c11.real())) continue;
      if (!changes_sign(c00.imag(), c10.imag(), c01.imag(), c11.imag())) continue;
      ++seeds;
      const auto root = refine_node(state, t, {(a + 0.5) * h, (b + 0.5) * h});
      if (!root) continue;
      bool duplicate = false;
      for (const auto& r : roots) duplicate = duplicate || norm(r - *root) < kMergeDistance;
      if (!duplicate) roots.push_back(*root);
    }
  }
  if (seeds > 0 && roots.empty() && warnings) {
    std::ostringstream os;
    os << "node search at t=" << t << ": no convergence from " << seeds << " seed cells";
    warnings->push_back(os.str());
  }
  return roots;
}

NodeTrack track_node(const WaveState& state, double t0, double t1, double dt,
                     int seed_resolution) {
  if (!(dt > 0.0)) throw std::invalid_argument("track_node needs dt > 0");
  NodeTrack track;
  const auto start = find_nodes(state, t0, seed_resolution, &track.warnings);
  if (start.size() != 1)
    throw std::invalid_argument("track_node needs exactly one node at the start time");

  const long steps = std::max(1L, static_cast<long>(std::ceil(std::abs(t1 - t0) / dt - 1e-9)));
  const double step = (t1 - t0) / static_cast<double>(steps);

  NodePath current{state.name(), {{t0, start.front()}}};
  std::optional<Vec2> previous = start.front();
  for (long k = 1; k <= steps; ++k) {
    const double t = k == steps ? t1 : t0 + step * static_cast<double>(k);
    std::optional<Vec2> next;
    if (previous) next = refine_node(state, t, *previous);
    if (!next) {
      const auto found = find_nodes(state, t, seed_resolution, &track.warnings);
      if (found.size() == 1) {
        next = found.front();
      } else {
        std::ostringstream os;
        os << "node count changed to " << found.size() << " at t=" << t << "; path split";
        track.warnings.push_back(os.str());
        if (!current.samples.empty()) track.segments.push_back(std::move(current));
        current = NodePath{state.name(), {}};
        if (!found.empty() && previous) {
          next = found.front();
          for (const auto& f : found)
            if (norm(f - *previous) < norm(*next - *previous)) next = f;
        } else if (!found.empty()) {
          next = found.front();
        }
      }
    }
    if (next) current.samples.emplace_back(t, *next);
    previous = next;
  }
  if (!current.samples.empty()) track.segments.push_back(std::move(current));
  return track;
}

}  // namespace pilotwave
