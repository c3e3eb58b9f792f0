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
#include <random>

#include "pilotwave/guidance.hpp"
#include "pilotwave/nodes.hpp"

using namespace pilotwave;
using std::numbers::pi;

namespace {

const WaveState kGround({{1, 1, 1.0, 0.0}}, "ground");

const GuidanceSpec kSpecs[4] = {
    {0.0, FChoice::None}, {1.0, FChoice::F1}, {1.0, FChoice::F2}, {1.0, FChoice::F3}};

}  // namespace

TEST_CASE("f choice names round trip") {
  for (auto f : {FChoice::None, FChoice::F1, FChoice::F2, FChoice::F3})
    CHECK(parse_f_choice(to_string(f)) == f);
  CHECK_THROWS_AS(parse_f_choice("f4"), std::invalid_argument);
  CHECK(GuidanceSpec{2.0, FChoice::F1}.label() == "mu=2,f1");
  CHECK(GuidanceSpec{}.label() == "mu=0");
  CHECK_FALSE(GuidanceSpec{0.0, FChoice::F1}.has_extra_term());
}

TEST_CASE("f values") {
  const auto [f, g] = f_value_and_grad(kGround, FChoice::F1, {pi / 2, pi / 2}, 0.0);
  CHECK(f == doctest::Approx(4.0 / (pi * pi)));
  CHECK(std::abs(g.x) < 1e-15);
  CHECK(std::abs(g.y) < 1e-15);

  for (double u : {0.3, 1.1, 2.9}) {
    const auto [f2, g2] = f_value_and_grad(kGround, FChoice::F2, {u, 3.0 - u}, 0.7 * u);
    CHECK(std::abs(f2) < 1e-14);
    CHECK(std::abs(g2.x) + std::abs(g2.y) < 1e-14);
  }
}

TEST_CASE("f3 gradient matches finite differences") {
  const auto s = make_psi1();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(0.2, pi - 0.2), time(0.0, 4 * pi);
  const double h = 1e-5;
  for (int k = 0; k < 20; ++k) {
    const Vec2 x{pos(rng), pos(rng)};
    const double t = time(rng);
    const auto g = f_value_and_grad(s, FChoice::F3, x, t).second;
    const auto f = [&](const Vec2& p) { return f_value_and_grad(s, FChoice::F3, p, t).first; };
    const double g1 = (f(x + Vec2{h, 0}) - f(x - Vec2{h, 0})) / (2 * h);
    const double g2 = (f(x + Vec2{0, h}) - f(x - Vec2{0, h})) / (2 * h);
    const double scale = std::max(1.0, std::hypot(g.x, g.y));
    CHECK(std::abs(g1 - g.x) < 1e-5 * scale);
    CHECK(std::abs(g2 - g.y) < 1e-5 * scale);
  }
}

TEST_CASE("mu = 0 is the standard guidance") {
  const auto s = make_psi1();
  const Vec2 x{0.9, 2.3};
  const auto v = velocity(s, {}, x, 1.3);
  const auto c = current_jet(s, x, 1.3);
  CHECK(v.v == v.v_s);
  CHECK(v.v.x == doctest::Approx(c.j.x / c.density));
  CHECK(v.v.y == doctest::Approx(c.j.y / c.density));
}

TEST_CASE("f1 term for the ground mode") {
  const auto v = velocity(kGround, {1.0, FChoice::F1}, {pi / 4, pi / 2}, 0.0);
  CHECK(std::abs(v.v.x) < 1e-14);
  CHECK(v.v.y == doctest::Approx(-2.0));
}

TEST_CASE("extra term is linear in mu") {
  const auto s = make_psi1();
  const Vec2 x{1.2, 0.6};
  const double t = 2.2;
  for (auto f : {FChoice::F1, FChoice::F2, FChoice::F3}) {
    const auto v0 = velocity(s, {0.0, f}, x, t).v;
    const auto v1 = velocity(s, {1.0, f}, x, t).v;
    const auto v2 = velocity(s, {2.5, f}, x, t).v;
    CHECK((v2 - v0).x == doctest::Approx(2.5 * (v1 - v0).x));
    CHECK((v2 - v0).y == doctest::Approx(2.5 * (v1 - v0).y));
  }
}

TEST_CASE("velocity errors") {
  const auto s = make_psi1();
  CHECK_THROWS_AS(velocity(s, {}, {-0.1, 1.0}, 0.0), std::domain_error);
  CHECK_THROWS_AS(velocity(s, {}, {0.0, 1.0}, 0.0), NodeSingularity);
  const auto node = find_nodes(s, 0.0).at(0);
  CHECK_THROWS_AS(velocity(s, {}, node, 0.0, 1e-20), NodeSingularity);
  CHECK_FALSE(try_velocity(s, {}, {0.0, 1.0}, 0.0).has_value());
}

TEST_CASE("normal flux vanishes at the walls") {
  // (j + mu eps grad f) . n -> 0 for every spec as the wall is approached.
  const auto s = make_psi1();
  for (const auto& g : kSpecs) {
    for (double eps : {1e-5, 1e-6}) {
      const Vec2 left{eps, pi / 2}, bottom{pi / 2, eps};
      const auto vl = velocity(s, g, left, 0.3);
      const auto vb = velocity(s, g, bottom, 0.3);
      CHECK(std::abs(vl.v.x * vl.density) < 1e-9);
      CHECK(std::abs(vb.v.y * vb.density) < 1e-9);
    }
  }
}

TEST_CASE("normal velocity at the walls") {
  const auto s = make_psi1();
  const auto normal = [&](const GuidanceSpec& g, double eps) {
    return velocity(s, g, {eps, pi / 2}, 0.3).v.x;
  };
  // Standard guidance: v.n is O(eps).
  CHECK(std::abs(normal({}, 1e-7)) < 1e-6);
  CHECK(std::abs(normal({}, 1e-9)) < 1e-8);
  // With mu != 0 the normal velocity keeps a finite limit (f1, f3) or
  // grows like 1/eps (f2); only the flux vanishes.
  CHECK(normal({1.0, FChoice::F1}, 1e-7) ==
        doctest::Approx(normal({1.0, FChoice::F1}, 1e-5)).epsilon(1e-4));
  CHECK(std::abs(normal({1.0, FChoice::F1}, 1e-7)) > 0.1);
  CHECK(std::abs(normal({1.0, FChoice::F3}, 1e-7)) > 0.1);
  CHECK(normal({1.0, FChoice::F2}, 1e-7) ==
        doctest::Approx(100.0 * normal({1.0, FChoice::F2}, 1e-5)).epsilon(1e-2));
}

TEST_CASE("vorticity") {
  const auto s = make_psi1();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> pos(0.3, pi - 0.3);
  const auto node = find_nodes(s, 0.0).at(0);
  int nonzero = 0;
  for (int k = 0; k < 20; ++k) {
    const Vec2 x{pos(rng), pos(rng)};
    if (norm(x - node) < 0.1) continue;
    CHECK(std::abs(vorticity(s, {}, x, 0.0)) < 1e-8);
    nonzero += std::abs(vorticity(s, {2.0, FChoice::F1}, x, 0.0)) > 1e-3;
  }
  CHECK(nonzero > 10);

  // Ground mode with mu=1, f1: v = (2 cot x2, -2 cot x1), curl = 2/sin^2 x1 + 2/sin^2 x2.
  const GuidanceSpec g{1.0, FChoice::F1};
  CHECK(vorticity(kGround, g, {pi / 2, pi / 2}, 0.0) == doctest::Approx(4.0));
  const Vec2 x{1.0, 0.7};
  CHECK(vorticity(kGround, g, x, 0.0) ==
        doctest::Approx(2 / std::pow(std::sin(1.0), 2) + 2 / std::pow(std::sin(0.7), 2)));

  CHECK_THROWS_AS(vorticity(s, {}, node, 0.0), NodeSingularity);
}

TEST_CASE("vorticity matches the finite-difference curl for every f") {
  const auto s = make_psi1();
  const Vec2 x{1.9, 0.8};
  const double t = 1.0, h = 1e-5;
  for (const auto& g : {GuidanceSpec{1.0, FChoice::F1}, GuidanceSpec{1.0, FChoice::F2},
                        GuidanceSpec{1.0, FChoice::F3}}) {
    const auto v = [&](const Vec2& p) { return velocity(s, g, p, t).v; };
    const double fd = (v(x + Vec2{h, 0}).y - v(x - Vec2{h, 0}).y - v(x + Vec2{0, h}).x +
                       v(x - Vec2{0, h}).x) /
                      (2 * h);
    CHECK(vorticity(s, g, x, t) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("square loop orientation") {
  const auto loop = square_loop({1.0, 1.0}, 0.5);
  REQUIRE(loop.size() == 4);
  double area2 = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& a = loop[k];
    const auto& b = loop[(k + 1) % 4];
    area2 += a.x * b.y - b.x * a.y;
  }
  CHECK(area2 / 2 == doctest::Approx(1.0));
}

TEST_CASE("circulation") {
  const auto s = make_psi1();
  const auto node = find_nodes(s, 0.0).at(0);
  const auto around = square_loop(node, 0.1);
  const double c = circulation(s, {}, around, 0.0, 2000);
  CHECK(std::abs(std::abs(c) - 2 * pi) < 1e-6);

  const auto away = square_loop({0.6, 0.6}, 0.2);
  CHECK(std::abs(circulation(s, {}, away, 0.0, 2000)) < 1e-8);

  const auto any = square_loop({1.0, 2.0}, 0.5);
  CHECK(std::abs(circulation(kGround, {}, any, 0.0, 100)) < 1e-15);

  // Stokes: a small loop with vorticity from the extra term.
  const GuidanceSpec g{2.0, FChoice::F1};
  const Vec2 centre{0.6, 0.6};
  const double half = 1e-3;
  const double stokes = vorticity(s, g, centre, 0.0) * 4 * half * half;
  CHECK(circulation(s, g, square_loop(centre, half), 0.0, 50) ==
        doctest::Approx(stokes).epsilon(1e-5));

  CHECK_THROWS_AS(circulation(s, {}, square_loop({0.05, 1.0}, 0.1), 0.0, 10), std::domain_error);
  const std::vector<Vec2> through{node - Vec2{0.1, 0.0}, node + Vec2{0.1, 0.0},
                                  node + Vec2{0.1, 0.2}};
  CHECK_THROWS_AS(circulation(s, {}, through, 0.0, 1), NodeSingularity);
}
