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
#include "pilotwave/guidance.hpp"

#include <cmath>
#include <sstream>

namespace pilotwave {

namespace {

std::pair<double, Vec2> pick_f(const CurrentJet& cur, FChoice choice) {
  switch (choice) {
    case FChoice::F1:
      return {cur.density, cur.grad_density};
    case FChoice::F2:
      return {cur.curl_j, cur.grad_curl_j};
    case FChoice::F3:
      return {cur.div_j, cur.grad_div_j};
    case FChoice::None:
      break;
  }
  return {0.0, {}};
}

double pick_lap_f(const CurrentJet& cur, FChoice choice) {
  switch (choice) {
    case FChoice::F1:
      return cur.lap_density;
    case FChoice::F2:
      return cur.lap_curl_j;
    case FChoice::F3:
      return cur.lap_div_j;
    case FChoice::None:
      break;
  }
  return 0.0;
}

// eps_ij d_j f with eps_12 = +1.
Vec2 rotated(const Vec2& grad) { return {grad.y, -grad.x}; }

}  // namespace

std::string to_string(FChoice f) {
  switch (f) {
    case FChoice::None:
      return "none";
    case FChoice::F1:
      return "f1";
    case FChoice::F2:
      return "f2";
    case FChoice::F3:
      return "f3";
  }
  return "none";
}

FChoice parse_f_choice(const std::string& s) {
  if (s == "none") return FChoice::None;
  if (s == "f1") return FChoice::F1;
  if (s == "f2") return FChoice::F2;
  if (s == "f3") return FChoice::F3;
  throw std::invalid_argument("unknown f choice '" + s + "'");
}

std::string GuidanceSpec::label() const {
  std::ostringstream os;
  os << "mu=" << mu;
  if (f != FChoice::None) os << "," << to_string(f);
  return os.str();
}

JetOrder velocity_order(FChoice f) {
  switch (f) {
    case FChoice::F2:
      return JetOrder::Second;
    case FChoice::F3:
      return JetOrder::Third;
    default:
      return JetOrder::First;
  }
}

std::pair<double, Vec2> f_value_and_grad(const WaveState& state, FChoice choice, const Vec2& x,
                                         double t) {
  const JetOrder order = choice == FChoice::F3 ? JetOrder::Third : JetOrder::Second;
  return pick_f(current_jet(state, x, t, order), choice);
}

std::optional<VelocitySample> try_velocity(const WaveState& state, const GuidanceSpec& spec,
                                           const Vec2& x, double t, double floor) {
  const FChoice f = spec.f;
  const JetOrder order = velocity_order(f);
  const CurrentJet cur = current_from_jet(state.jet(x, t, order), order);
  if (!(cur.density >= floor) || cur.density == 0.0) return std::nullopt;

  VelocitySample out;
  out.density = cur.density;
  const double inv = 1.0 / cur.density;
  out.v_s = cur.j * inv;
  out.v = out.v_s;
  if (f != FChoice::None) out.v += (spec.mu * inv) * rotated(pick_f(cur, f).second);
  return out;
}

VelocitySample velocity(const WaveState& state, const GuidanceSpec& spec, const Vec2& x, double t,
                        double floor) {
  if (!in_box(x)) throw std::domain_error("velocity requested outside the box");
  if (!strictly_inside(x)) throw NodeSingularity("velocity requested on a wall");
  auto sample = try_velocity(state, spec, x, t, floor);
  if (!sample) throw NodeSingularity("density below floor; velocity undefined");
  return *sample;
}

double vorticity(const WaveState& state, const GuidanceSpec& spec, const Vec2& x, double t,
                 double clearance) {
  const JetOrder order = spec.f == FChoice::F3   ? JetOrder::Fourth
                         : spec.f == FChoice::F2 ? JetOrder::Third
                                                 : JetOrder::Second;
  const CurrentJet cur = current_jet(state, x, t, order);
  if (cur.density < clearance * clearance) throw NodeSingularity("vorticity requested at a node");

  // v = J / rho with J = j + mu eps grad f; curl(eps grad f) = -lap f.
  Vec2 current = cur.j;
  double curl_current = cur.curl_j;
  if (spec.f != FChoice::None) {
    current += spec.mu * rotated(pick_f(cur, spec.f).second);
    curl_current -= spec.mu * pick_lap_f(cur, spec.f);
  }
  const double rho = cur.density;
  const Vec2& g = cur.grad_density;
  return curl_current / rho - (g.x * current.y - g.y * current.x) / (rho * rho);
}

std::vector<Vec2> square_loop(const Vec2& center, double half_side) {
  const double h = half_side;
  return {center + Vec2{-h, -h}, center + Vec2{h, -h}, center + Vec2{h, h}, center + Vec2{-h, h}};
}

double circulation(const WaveState& state, const GuidanceSpec& spec, std::span<const Vec2> loop,
                   double t, int quadrature_n, double clearance) {
  if (loop.size() < 3) throw std::invalid_argument("loop needs at least three vertices");
  if (quadrature_n < 1) throw std::invalid_argument("quadrature_n must be positive");
  for (const auto& p : loop)
    if (!strictly_inside(p)) throw std::domain_error("loop leaves the open box");

  const double floor = clearance * clearance;
  double total = 0.0;
  for (std::size_t e = 0; e < loop.size(); ++e) {
    const Vec2 a = loop[e];
    const Vec2 b = loop[(e + 1) % loop.size()];
    const Vec2 dl = (b - a) * (1.0 / quadrature_n);
    double edge = 0.0;
    for (int k = 0; k < quadrature_n; ++k) {
      const Vec2 p = a + (k + 0.5) * dl;
      auto sample = try_velocity(state, spec, p, t, floor);
      if (!sample) throw NodeSingularity("circulation loop passes through a node");
      edge += sample->v.x * dl.x + sample->v.y * dl.y;
    }
    total += edge;
  }
  return total;
}

}  // namespace pilotwave
