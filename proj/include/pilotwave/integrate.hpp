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

#include <algorithm>
#include <cmath>
#include <concepts>
#include <optional>
#include <string>
#include <vector>

#include "pilotwave/guidance.hpp"
#include "pilotwave/wavefield.hpp"

namespace pilotwave {

/// Step-size control for the embedded Cash-Karp integrator.
///
/// max_steps counts attempted steps (accepted and rejected).
struct IntegratorConfig {
  double initial_step{1e-5};
  long max_steps{100000};
  double abs_tol{1e-8};
  double rel_tol{1e-8};
  double safety{0.9};
  double min_step{1e-14};
  double max_step{1e-1};

  /// Throws std::invalid_argument when the step bounds are inconsistent.
  void validate() const;
  IntegratorConfig tightened(double factor) const;
};

enum class TrajectoryStatus { Ok, MaxStepsExceeded, StepUnderflow, LeftBox };

std::string to_string(TrajectoryStatus s);

struct TrajectoryResult {
  Vec2 x_final;
  TrajectoryStatus status{TrajectoryStatus::Ok};
  long steps_taken{0};
  std::vector<std::pair<double, Vec2>> path;

  bool ok() const { return status == TrajectoryStatus::Ok; }
};

/// A velocity field callable: (point, time) -> velocity, or nullopt where
/// the field is singular.
template <typename F>
concept VelocityField = requires(const F& f, Vec2 x, double t) {
  { f(x, t) } -> std::convertible_to<std::optional<Vec2>>;
};

struct RkStep {
  Vec2 x;      // fifth-order solution
  Vec2 error;  // fifth minus fourth order
};

/// Guidance velocity of a wave state as a VelocityField.
class GuidedField {
 public:
  GuidedField(const WaveState& state, GuidanceSpec spec, double floor = kDefaultDensityFloor)
      : state_(&state), spec_(spec), floor_(floor) {}

  std::optional<Vec2> operator()(const Vec2& x, double t) const {
    auto s = try_velocity(*state_, spec_, x, t, floor_);
    if (!s) return std::nullopt;
    return s->v;
  }

 private:
  const WaveState* state_;
  GuidanceSpec spec_;
  double floor_;
};

namespace cash_karp {
inline constexpr double a2 = 1.0 / 5, a3 = 3.0 / 10, a4 = 3.0 / 5, a5 = 1.0, a6 = 7.0 / 8;
inline constexpr double b21 = 1.0 / 5;
inline constexpr double b31 = 3.0 / 40, b32 = 9.0 / 40;
inline constexpr double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
inline constexpr double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27, b54 = 35.0 / 27;
inline constexpr double b61 = 1631.0 / 55296, b62 = 175.0 / 512, b63 = 575.0 / 13824,
                        b64 = 44275.0 / 110592, b65 = 253.0 / 4096;
inline constexpr double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594, c6 = 512.0 / 1771;
inline constexpr double dc1 = c1 - 2825.0 / 27648, dc3 = c3 - 18575.0 / 48384,
                        dc4 = c4 - 13525.0 / 55296, dc5 = -277.0 / 14336, dc6 = c6 - 1.0 / 4;
}  // namespace cash_karp

/// One embedded Cash-Karp 5(4) step of signed size h. Empty when any
/// stage lands on a singular point.
template <VelocityField F>
std::optional<RkStep> rk_step(const F& field, const Vec2& x, double t, double h) {
  using namespace cash_karp;
  const auto k1 = field(x, t);
  if (!k1) return std::nullopt;
  const auto k2 = field(x + (h * b21) * *k1, t + a2 * h);
  if (!k2) return std::nullopt;
  const auto k3 = field(x + h * (b31 * *k1 + b32 * *k2), t + a3 * h);
  if (!k3) return std::nullopt;
  const auto k4 = field(x + h * (b41 * *k1 + b42 * *k2 + b43 * *k3), t + a4 * h);
  if (!k4) return std::nullopt;
  const auto k5 =
      field(x + h * (b51 * *k1 + b52 * *k2 + b53 * *k3 + b54 * *k4), t + a5 * h);
  if (!k5) return std::nullopt;
  const auto k6 = field(x + h * (b61 * *k1 + b62 * *k2 + b63 * *k3 + b64 * *k4 + b65 * *k5),
                        t + a6 * h);
  if (!k6) return std::nullopt;

  RkStep out;
  out.x = x + h * (c1 * *k1 + c3 * *k3 + c4 * *k4 + c6 * *k6);
  out.error = h * (dc1 * *k1 + dc3 * *k3 + dc4 * *k4 + dc5 * *k5 + dc6 * *k6);
  return out;
}

/// Classic fixed-step RK4; used as a reference in tests and diagnostics.
template <VelocityField F>
std::optional<Vec2> rk4_fixed(const F& field, Vec2 x, double t0, double t1, long steps) {
  const double h = (t1 - t0) / static_cast<double>(steps);
  for (long i = 0; i < steps; ++i) {
    const double t = t0 + h * static_cast<double>(i);
    const auto k1 = field(x, t);
    if (!k1) return std::nullopt;
    const auto k2 = field(x + (0.5 * h) * *k1, t + 0.5 * h);
    if (!k2) return std::nullopt;
    const auto k3 = field(x + (0.5 * h) * *k2, t + 0.5 * h);
    if (!k3) return std::nullopt;
    const auto k4 = field(x + h * *k3, t + h);
    if (!k4) return std::nullopt;
    x += (h / 6.0) * (*k1 + 2.0 * *k2 + 2.0 * *k3 + *k4);
  }
  return x;
}

/// Adaptive integration of dX/dt = v(X, t) from t0 to t1 (either
/// direction). A step is accepted when every component error is within
/// abs_tol + rel_tol |x|. Singular stages and steps that leave the box by
/// more than 1e-12 count as rejections. When `sample_interval` > 0 the
/// accepted points are recorded about every sample_interval.
template <VelocityField F>
TrajectoryResult integrate_field(const F& field, const Vec2& x0, double t0, double t1,
                                 const IntegratorConfig& cfg, double sample_interval = 0.0) {
  constexpr double kBoxSlack = 1e-12;
  constexpr double kMaxGrow = 5.0;
  constexpr double kMaxShrink = 0.1;

  TrajectoryResult result;
  result.x_final = x0;
  const bool sampling = sample_interval > 0.0;
  if (sampling) result.path.emplace_back(t0, x0);
  if (t1 == t0) return result;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  double t = t0;
  Vec2 x = x0;
  double h_abs = std::clamp(cfg.initial_step, cfg.min_step, cfg.max_step);
  double next_sample = t0 + dir * sample_interval;

  while (true) {
    if (result.steps_taken >= cfg.max_steps) {
      result.status = TrajectoryStatus::MaxStepsExceeded;
      result.x_final = x;
      return result;
    }
    const double remaining = std::abs(t1 - t);
    const bool last = h_abs >= remaining;
    const double h_try = last ? remaining : h_abs;
    ++result.steps_taken;

    const auto step = rk_step(field, x, t, dir * h_try);
    bool accept = false;
    bool left_box = false;
    double err_ratio = 0.0;
    if (step) {
      const double sx = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(x.x), std::abs(step->x.x));
      const double sy = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(x.y), std::abs(step->x.y));
      err_ratio = std::max(std::abs(step->error.x) / sx, std::abs(step->error.y) / sy);
      left_box = !in_box(step->x, kBoxSlack);
      accept = !left_box && err_ratio <= 1.0 && std::isfinite(err_ratio);
    }

    if (accept) {
      x = step->x;
      t = last ? t1 : t + dir * h_try;
      if (sampling && (dir * (t - next_sample) >= 0.0 || last)) {
        result.path.emplace_back(t, x);
        while (dir * (t - next_sample) >= 0.0) next_sample += dir * sample_interval;
      }
      if (last) {
        result.x_final = x;
        result.status =
            strictly_inside(x) ? TrajectoryStatus::Ok : TrajectoryStatus::LeftBox;
        return result;
      }
      const double grow = err_ratio > 0.0
                              ? std::min(kMaxGrow, cfg.safety * std::pow(err_ratio, -0.2))
                              : kMaxGrow;
      h_abs = std::min(cfg.max_step, std::max(cfg.min_step, h_try * grow));
      continue;
    }

    if (h_try <= cfg.min_step) {
      result.x_final = x;
      result.status = left_box ? TrajectoryStatus::LeftBox : TrajectoryStatus::StepUnderflow;
      return result;
    }
    double shrink = 0.5;
    if (step && !left_box && std::isfinite(err_ratio))
      shrink = std::clamp(cfg.safety * std::pow(err_ratio, -0.25), kMaxShrink, 1.0);
    h_abs = std::max(cfg.min_step, h_try * shrink);
  }
}

TrajectoryResult integrate(const WaveState& state, const GuidanceSpec& spec, const Vec2& x0,
                           double t0, double t1, const IntegratorConfig& cfg = {},
                           double sample_interval = 0.0);

/// Distance between the direct flow X(t_a + tau) and the composition
/// x_{t_a}(x_tau(X)), where the second leg restarts at time 0 and relies on
/// the wave state's period tau. Throws std::runtime_error if a leg fails.
double flow_compose_check(const WaveState& state, const GuidanceSpec& spec, const Vec2& x0,
                          double t_a, const IntegratorConfig& cfg = {});

}  // namespace pilotwave
