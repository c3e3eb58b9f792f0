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
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pilotwave/wavefield.hpp"

namespace pilotwave {

/// Choice of the scalar f whose rotated gradient is added to the current.
enum class FChoice { None, F1, F2, F3 };

std::string to_string(FChoice f);
/// Parses "none", "f1", "f2", "f3". Throws std::invalid_argument.
FChoice parse_f_choice(const std::string& s);

/// Guidance law v = v_s + mu * eps grad f / |psi|^2 with eps_12 = +1.
struct GuidanceSpec {
  double mu{0.0};
  FChoice f{FChoice::None};

  bool has_extra_term() const { return f != FChoice::None && mu != 0.0; }
  std::string label() const;
  friend bool operator==(const GuidanceSpec&, const GuidanceSpec&) = default;
};

struct VelocitySample {
  Vec2 v;
  Vec2 v_s;
  double density{0.0};
};

/// Raised when the velocity is requested where |psi|^2 is too small to
/// divide by (nodes, walls).
class NodeSingularity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultDensityFloor = 1e-300;

/// Jet order needed to evaluate the velocity for a given f.
JetOrder velocity_order(FChoice f);

/// f and grad f. F1 -> |psi|^2, F2 -> curl j_s, F3 -> div j_s; None -> zeros.
std::pair<double, Vec2> f_value_and_grad(const WaveState& state, FChoice choice, const Vec2& x,
                                         double t);

/// Velocity without exceptions; empty when the density is below `floor`.
/// This is the integrator's entry point and does not check the box.
std::optional<VelocitySample> try_velocity(const WaveState& state, const GuidanceSpec& spec,
                                           const Vec2& x, double t,
                                           double floor = kDefaultDensityFloor);

/// Throws std::domain_error outside the closed box, NodeSingularity on a
/// wall or when the density is below `floor`.
VelocitySample velocity(const WaveState& state, const GuidanceSpec& spec, const Vec2& x, double t,
                        double floor = kDefaultDensityFloor);

/// Scalar curl d1 v2 - d2 v1 from the analytic jets.
/// Throws NodeSingularity when |psi| < clearance.
double vorticity(const WaveState& state, const GuidanceSpec& spec, const Vec2& x, double t,
                 double clearance = 1e-6);

/// Counter-clockwise square with the given center and half side.
std::vector<Vec2> square_loop(const Vec2& center, double half_side);

/// Line integral of v around the closed polyline `loop` (the last vertex
/// connects back to the first) using `quadrature_n` midpoint segments per
/// edge. Throws std::domain_error if a vertex leaves the open box and
/// NodeSingularity if |psi| < clearance at a quadrature node.
double circulation(const WaveState& state, const GuidanceSpec& spec, std::span<const Vec2> loop,
                   double t, int quadrature_n, double clearance = 1e-6);

}  // namespace pilotwave
