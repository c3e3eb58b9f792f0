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
#include "pilotwave/integrate.hpp"

#include <stdexcept>

namespace pilotwave {

void IntegratorConfig::validate() const {
  if (!(min_step > 0.0 && min_step <= initial_step && initial_step <= max_step))
    throw std::invalid_argument("integrator requires 0 < min_step <= initial_step <= max_step");
  if (max_steps < 1) throw std::invalid_argument("integrator max_steps must be >= 1");
  if (!(abs_tol > 0.0) || !(rel_tol >= 0.0))
    throw std::invalid_argument("integrator tolerances must be positive");
  if (!(safety > 0.0 && safety <= 1.0))
    throw std::invalid_argument("integrator safety factor must be in (0, 1]");
}

IntegratorConfig IntegratorConfig::tightened(double factor) const {
  IntegratorConfig out = *this;
  out.abs_tol *= factor;
  out.rel_tol *= factor;
  return out;
}

std::string to_string(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::Ok:
      return "ok";
    case TrajectoryStatus::MaxStepsExceeded:
      return "max-steps";
    case TrajectoryStatus::StepUnderflow:
      return "step-underflow";
    case TrajectoryStatus::LeftBox:
      return "left-box";
  }
  return "ok";
}

TrajectoryResult integrate(const WaveState& state, const GuidanceSpec& spec, const Vec2& x0,
                           double t0, double t1, const IntegratorConfig& cfg,
                           double sample_interval) {
  if (!strictly_inside(x0)) throw std::domain_error("trajectory must start inside the box");
  return integrate_field(GuidedField(state, spec), x0, t0, t1, cfg, sample_interval);
}

double flow_compose_check(const WaveState& state, const GuidanceSpec& spec, const Vec2& x0,
                          double t_a, const IntegratorConfig& cfg) {
  const double tau = period(state);
  const auto direct = integrate(state, spec, x0, 0.0, t_a + tau, cfg);
  const auto first = integrate(state, spec, x0, 0.0, tau, cfg);
  if (!direct.ok() || !first.ok()) throw std::runtime_error("flow composition leg failed");
  const auto second = integrate(state, spec, first.x_final, 0.0, t_a, cfg);
  if (!second.ok()) throw std::runtime_error("flow composition leg failed");
  return norm(direct.x_final - second.x_final);
}

}  // namespace pilotwave
