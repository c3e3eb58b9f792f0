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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pilotwave/integrate.hpp"

using namespace pilotwave;
using std::numbers::pi;

namespace {

struct Constant {
  Vec2 v;
  std::optional<Vec2> operator()(const Vec2&, double) const { return v; }
};

struct Stretch {
  std::optional<Vec2> operator()(const Vec2& x, double) const { return Vec2{x.x, 0.0}; }
};

struct Singular {
  std::optional<Vec2> operator()(const Vec2&, double) const { return std::nullopt; }
};

}  // namespace

TEST_CASE("config validation") {
  IntegratorConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.min_step = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.max_step = 1e-6;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.abs_tol = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.max_steps = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  const auto tight = IntegratorConfig{}.tightened(1e-2);
  CHECK(tight.abs_tol == doctest::Approx(1e-10));
  CHECK(tight.rel_tol == doctest::Approx(1e-10));
  CHECK(to_string(TrajectoryStatus::MaxStepsExceeded) == "max-steps");
}

TEST_CASE("single step on stub fields") {
  const auto c = rk_step(Constant{{1.0, 0.0}}, {1.0, 1.0}, 0.0, 0.25);
  REQUIRE(c);
  CHECK(c->x.x == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(c->x.y == 1.0);
  CHECK(std::abs(c->error.x) < 1e-16);
  CHECK(std::abs(c->error.y) < 1e-16);

  const auto e = rk_step(Stretch{}, {1.0, 1.0}, 0.0, 0.1);
  REQUIRE(e);
  CHECK(std::abs(e->x.x - std::exp(0.1)) < 1e-8);
  CHECK(std::abs(e->error.x) < 1e-6);
  CHECK(e->x.y == 1.0);

  CHECK_FALSE(rk_step(Singular{}, {1.0, 1.0}, 0.0, 0.1).has_value());
}

TEST_CASE("guided step agrees with a fine fixed-step reference") {
  const auto s = make_psi1();
  const GuidedField field(s, {});
  const Vec2 x0{pi / 2, pi / 2};
  const auto step = rk_step(field, x0, 0.0, 1e-5);
  const auto ref = rk4_fixed(field, x0, 0.0, 1e-5, 100);
  REQUIRE(step);
  REQUIRE(ref);
  CHECK(norm(step->x - *ref) < 1e-10);
}

TEST_CASE("adaptive integration of the exponential stub") {
  const auto r = integrate_field(Stretch{}, {0.1, 1.0}, 0.0, 2.0, IntegratorConfig{});
  CHECK(r.ok());
  CHECK(r.x_final.x == doctest::Approx(0.1 * std::exp(2.0)).epsilon(1e-7));
  const auto back = integrate_field(Stretch{}, r.x_final, 2.0, 0.0, IntegratorConfig{});
  CHECK(back.x_final.x == doctest::Approx(0.1).epsilon(1e-7));
}

TEST_CASE("zero-length interval") {
  const auto s = make_psi1();
  const auto r = integrate(s, {}, {1.0, 2.0}, 3.0, 3.0);
  CHECK(r.ok());
  CHECK(r.steps_taken == 0);
  CHECK(r.x_final == Vec2{1.0, 2.0});
}

TEST_CASE("failure statuses") {
  IntegratorConfig cfg;
  cfg.max_steps = 10;
  const auto many = integrate_field(Stretch{}, {0.1, 1.0}, 0.0, 2.0, cfg);
  CHECK(many.status == TrajectoryStatus::MaxStepsExceeded);
  CHECK(many.steps_taken == 10);

  const auto singular = integrate_field(Singular{}, {1.0, 1.0}, 0.0, 1.0, IntegratorConfig{});
  CHECK(singular.status == TrajectoryStatus::StepUnderflow);

  const auto out = integrate_field(Constant{{1.0, 0.0}}, {3.0, 1.0}, 0.0, 1.0, IntegratorConfig{});
  CHECK(out.status == TrajectoryStatus::LeftBox);
  CHECK(in_box(out.x_final, 1e-12));

  CHECK_THROWS_AS(integrate(make_psi1(), {}, {0.0, 1.0}, 0.0, 1.0), std::domain_error);
}

TEST_CASE("centre trajectory over one period converges") {
  const auto s = make_psi1();
  const Vec2 x0{pi / 2, pi / 2};
  const auto a = integrate(s, {}, x0, 0.0, 4 * pi);
  const auto b = integrate(s, {}, x0, 0.0, 4 * pi, IntegratorConfig{}.tightened(0.5));
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(norm(a.x_final - b.x_final) < 1e-5);
  CHECK(strictly_inside(a.x_final));
}

TEST_CASE("time reversal and determinism") {
  const auto s = make_psi1();
  for (const GuidanceSpec g : {GuidanceSpec{}, GuidanceSpec{2.0, FChoice::F1}}) {
    const Vec2 x0{0.8, 2.0};
    const auto tight = IntegratorConfig{}.tightened(1e-2);
    const auto fwd = integrate(s, g, x0, 0.0, 2.0, tight);
    REQUIRE(fwd.ok());
    const auto back = integrate(s, g, fwd.x_final, 2.0, 0.0, tight);
    REQUIRE(back.ok());
    CHECK(norm(back.x_final - x0) < 1e-6);

    const auto again = integrate(s, g, x0, 0.0, 2.0, tight);
    CHECK(again.x_final == fwd.x_final);
    CHECK(again.steps_taken == fwd.steps_taken);
  }
}

TEST_CASE("path sampling") {
  const auto s = make_psi1();
  const auto r = integrate(s, {}, {pi / 2, pi / 2}, 0.0, 4 * pi, {}, 0.1);
  REQUIRE(r.ok());
  REQUIRE(r.path.size() > 100);
  CHECK(r.path.front().first == 0.0);
  CHECK(r.path.back().first == doctest::Approx(4 * pi));
  CHECK(r.path.back().second == r.x_final);
  for (std::size_t k = 1; k < r.path.size(); ++k) CHECK(r.path[k].first > r.path[k - 1].first);
}

TEST_CASE("flow composition") {
  const auto s = make_psi1();
  const auto tight = IntegratorConfig{}.tightened(1e-3);
  CHECK(flow_compose_check(s, {}, {1.0, 2.0}, 0.0) == 0.0);
  CHECK(flow_compose_check(s, {}, {1.0, 2.0}, pi, tight) < 1e-4);
  CHECK(flow_compose_check(s, {2.0, FChoice::F1}, {2.0, 1.0}, 2 * pi, tight) < 1e-4);
}

TEST_CASE("flow carries |psi|^2 (Jacobian of the backtrack map)") {
  // rho(x, t) = rho(x0, 0) det(dx0/dx), so |psi(x,t)|^2 = |psi(x0,0)|^2 det.
  const auto s = make_psi1();
  const auto tight = IntegratorConfig{}.tightened(1e-3);
  // Central differences converge like h^2; strongly sheared points need small h.
  const double t = 2.0, h = 1e-5;
  for (const GuidanceSpec g : {GuidanceSpec{}, GuidanceSpec{2.0, FChoice::F1},
                               GuidanceSpec{1.0, FChoice::F3}}) {
    for (const Vec2 x : {Vec2{0.8, 2.0}, Vec2{2.2, 0.9}, Vec2{1.9, 2.4}}) {
      const auto back = [&](const Vec2& p) {
        const auto r = integrate(s, g, p, t, 0.0, tight);
        REQUIRE(r.ok());
        return r.x_final;
      };
      const Vec2 dx = (back(x + Vec2{h, 0}) - back(x - Vec2{h, 0})) * (1 / (2 * h));
      const Vec2 dy = (back(x + Vec2{0, h}) - back(x - Vec2{0, h})) * (1 / (2 * h));
      const double det = dx.x * dy.y - dx.y * dy.x;
      const Vec2 x0 = back(x);
      const double lhs = std::norm(s.value(x, t));
      const double rhs = std::norm(s.value(x0, 0.0)) * det;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-3));
    }
  }
}
