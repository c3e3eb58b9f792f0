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

#include <array>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace pilotwave {

using cplx = std::complex<double>;

/// Side length of the square box [0, pi]^2 (hbar = mass = 1).
inline constexpr double kBoxSide = std::numbers::pi;

struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

double norm(const Vec2& v);

/// True when p lies in the closed box, allowing `slack` outside each wall.
bool in_box(const Vec2& p, double slack = 0.0);
/// True when p lies in the open box.
bool strictly_inside(const Vec2& p);

/// A box eigenmode (m, n) with its superposition weight and phase.
struct Mode {
  int m{1};
  int n{1};
  double amplitude{0.0};
  double phase{0.0};

  /// (m^2 + n^2) / 2
  double energy() const { return 0.5 * static_cast<double>(m * m + n * n); }
};

/// Value and spatial derivatives of psi at one point and time.
///
/// Mixed partials are stored once per multi-index. `bilaplacian` is the
/// fourth-order quantity needed for the vorticity of the div-j guidance
/// field; it is exact because every mode is a Laplacian eigenfunction.
struct ComplexJet {
  cplx value{};
  std::array<cplx, 2> grad{};    // d1, d2
  std::array<cplx, 3> hess{};    // d11, d12, d22
  std::array<cplx, 4> third{};   // d111, d112, d122, d222
  cplx bilaplacian{};

  cplx laplacian() const { return hess[0] + hess[2]; }
  /// Gradient of the Laplacian: (d111 + d122, d112 + d222).
  std::array<cplx, 2> grad_laplacian() const {
    return {third[0] + third[2], third[1] + third[3]};
  }
};

/// Standard current j_s = Im(psi* grad psi) and the derived quantities
/// the guidance fields need.
struct CurrentJet {
  Vec2 j;
  double div_j{0.0};
  double curl_j{0.0};  // d1 j2 - d2 j1
  Vec2 grad_div_j;
  Vec2 grad_curl_j;
  double density{0.0};
  Vec2 grad_density;
  // Laplacians of the three f candidates, used by the vorticity.
  double lap_density{0.0};
  double lap_div_j{0.0};
  double lap_curl_j{0.0};
};

/// Highest derivative order required from a jet evaluation.
enum class JetOrder { Value = 0, First = 1, Second = 2, Third = 3, Fourth = 4 };

/// Finite superposition of box eigenmodes. Immutable after construction.
class WaveState {
 public:
  /// Throws std::invalid_argument on an empty mode list, a non-positive
  /// quantum number, a negative amplitude, or amplitudes whose squares do
  /// not sum to 1 within 1e-12.
  explicit WaveState(std::vector<Mode> modes, std::string name = "custom");

  std::span<const Mode> modes() const { return modes_; }
  const std::string& name() const { return name_; }
  double box_side() const { return kBoxSide; }

  ComplexJet jet(const Vec2& x, double t, JetOrder order = JetOrder::Fourth) const;
  cplx value(const Vec2& x, double t) const;
  double density(const Vec2& x, double t) const { return std::norm(value(x, t)); }

 private:
  struct Term {
    int m;
    int n;
    int energy_slot;  // index into the distinct values of m^2 + n^2
    double wr, wi;    // amplitude * (2/pi) * exp(i phase)
  };

  template <int Order>
  void accumulate(const Vec2& x, double t, ComplexJet& jet) const;

  std::vector<Mode> modes_;
  std::vector<Term> terms_;
  // Distinct m^2 + n^2 in increasing order; exp(-i E t) = exp(-i t/2)^(m^2+n^2).
  std::vector<int> energy2_;
  std::string name_;
  int max_m_{1};
  int max_n_{1};
};

/// (2/pi) sin(m x1) sin(n x2). Throws std::domain_error outside the box.
double eigenmode(int m, int n, const Vec2& x);

/// Equal-weight superposition of the four lowest modes; one moving node.
WaveState make_psi1();
/// Ground-state dominated superposition of the same modes; nodeless.
WaveState make_psi2();
/// Builder lookup by name ("psi1", "psi2"). Throws std::invalid_argument.
WaveState make_named_state(const std::string& name);

/// Phases shared by both builders, ordered (1,1), (1,2), (2,1), (2,2).
inline constexpr std::array<double, 4> kReferencePhases = {
    1.1525988926093297, 4.2775762116024665, 2.1660329888555025, 2.8960554218806349};

ComplexJet eval_jet(const WaveState& state, const Vec2& x, double t);
CurrentJet current_jet(const WaveState& state, const Vec2& x, double t,
                       JetOrder order = JetOrder::Fourth);
/// Assembles the current quantities from an existing jet. Entries that need
/// derivatives above `order` are left at zero.
CurrentJet current_from_jet(const ComplexJet& jet, JetOrder order = JetOrder::Fourth);

/// Smallest tau > 0 with psi(x, t + tau) = psi(x, t), global phase included.
double period(const WaveState& state);

}  // namespace pilotwave
