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
#include "pilotwave/wavefield.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pilotwave {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;
constexpr int kMaxRecurrence = 64;
constexpr std::size_t kMaxEnergies = 64;

// sin(k a), cos(k a) for k = 0..count by angle addition.
void harmonics(double a, int count, double* s, double* c) {
  s[0] = 0.0;
  c[0] = 1.0;
  const double s1 = std::sin(a);
  const double c1 = std::cos(a);
  for (int k = 1; k <= count; ++k) {
    s[k] = s[k - 1] * c1 + c[k - 1] * s1;
    c[k] = c[k - 1] * c1 - s[k - 1] * s1;
  }
}

cplx int_pow(cplx base, int e) {
  cplx r{1.0, 0.0};
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

}  // namespace

double norm(const Vec2& v) { return std::hypot(v.x, v.y); }

bool in_box(const Vec2& p, double slack) {
  return p.x >= -slack && p.x <= kBoxSide + slack && p.y >= -slack &&
         p.y <= kBoxSide + slack;
}

bool strictly_inside(const Vec2& p) {
  return p.x > 0.0 && p.x < kBoxSide && p.y > 0.0 && p.y < kBoxSide;
}

WaveState::WaveState(std::vector<Mode> modes, std::string name)
    : modes_(std::move(modes)), name_(std::move(name)) {
  if (modes_.empty()) throw std::invalid_argument("wave state needs at least one mode");
  double total = 0.0;
  for (const auto& mode : modes_) {
    if (mode.m < 1 || mode.n < 1)
      throw std::invalid_argument("mode quantum numbers must be positive");
    if (mode.m > kMaxRecurrence || mode.n > kMaxRecurrence)
      throw std::invalid_argument("mode quantum number too large");
    if (!(mode.amplitude >= 0.0)) throw std::invalid_argument("mode amplitude must be >= 0");
    total += mode.amplitude * mode.amplitude;
    max_m_ = std::max(max_m_, mode.m);
    max_n_ = std::max(max_n_, mode.n);
    energy2_.push_back(mode.m * mode.m + mode.n * mode.n);
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("mode amplitudes are not normalized");

  std::sort(energy2_.begin(), energy2_.end());
  energy2_.erase(std::unique(energy2_.begin(), energy2_.end()), energy2_.end());
  if (energy2_.size() > kMaxEnergies) throw std::invalid_argument("too many distinct energies");
  for (const auto& mode : modes_) {
    const int e2 = mode.m * mode.m + mode.n * mode.n;
    const auto slot = std::lower_bound(energy2_.begin(), energy2_.end(), e2) - energy2_.begin();
    const cplx w = mode.amplitude * kTwoOverPi * std::polar(1.0, mode.phase);
    terms_.push_back({mode.m, mode.n, static_cast<int>(slot), w.real(), w.imag()});
  }
}

template <int Order>
void WaveState::accumulate(const Vec2& x, double t, ComplexJet& jet) const {
  double s1[kMaxRecurrence + 1], c1[kMaxRecurrence + 1];
  double s2[kMaxRecurrence + 1], c2[kMaxRecurrence + 1];
  harmonics(x.x, max_m_, s1, c1);
  harmonics(x.y, max_n_, s2, c2);

  // exp(-i E t) for every distinct energy, by stepping powers of exp(-i t/2).
  double pr[kMaxEnergies], pi[kMaxEnergies];
  const std::size_t slots = energy2_.size();
  {
    const cplx w = std::polar(1.0, -0.5 * t);
    cplx acc = int_pow(w, energy2_[0]);
    pr[0] = acc.real();
    pi[0] = acc.imag();
    for (std::size_t k = 1; k < slots; ++k) {
      acc *= int_pow(w, energy2_[k] - energy2_[k - 1]);
      pr[k] = acc.real();
      pi[k] = acc.imag();
    }
  }

  double v_r = 0, v_i = 0;
  double g_r[2] = {0, 0}, g_i[2] = {0, 0};
  double h_r[3] = {0, 0, 0}, h_i[3] = {0, 0, 0};
  double d_r[4] = {0, 0, 0, 0}, d_i[4] = {0, 0, 0, 0};
  double b_r = 0, b_i = 0;
  for (const auto& term : terms_) {
    const double er = pr[term.energy_slot], ei = pi[term.energy_slot];
    const double cr = term.wr * er - term.wi * ei;
    const double ci = term.wr * ei + term.wi * er;
    const double m = term.m, n = term.n;
    const double sx = s1[term.m], cx = c1[term.m];
    const double sy = s2[term.n], cy = c2[term.n];
    const double ss = sx * sy;
    v_r += cr * ss;
    v_i += ci * ss;
    if constexpr (Order >= 1) {
      const double a = m * cx * sy, b = n * sx * cy;
      g_r[0] += cr * a;
      g_i[0] += ci * a;
      g_r[1] += cr * b;
      g_i[1] += ci * b;
    }
    if constexpr (Order >= 2) {
      const double a = -m * m * ss, b = m * n * cx * cy, c = -n * n * ss;
      h_r[0] += cr * a;
      h_i[0] += ci * a;
      h_r[1] += cr * b;
      h_i[1] += ci * b;
      h_r[2] += cr * c;
      h_i[2] += ci * c;
    }
    if constexpr (Order >= 3) {
      const double q[4] = {-m * m * m * cx * sy, -m * m * n * sx * cy, -m * n * n * cx * sy,
                           -n * n * n * sx * cy};
      for (int k = 0; k < 4; ++k) {
        d_r[k] += cr * q[k];
        d_i[k] += ci * q[k];
      }
    }
    if constexpr (Order >= 4) {
      const double k2 = m * m + n * n;
      const double q = k2 * k2 * ss;
      b_r += cr * q;
      b_i += ci * q;
    }
  }
  jet.value = {v_r, v_i};
  if constexpr (Order >= 1) jet.grad = {cplx{g_r[0], g_i[0]}, cplx{g_r[1], g_i[1]}};
  if constexpr (Order >= 2)
    jet.hess = {cplx{h_r[0], h_i[0]}, cplx{h_r[1], h_i[1]}, cplx{h_r[2], h_i[2]}};
  if constexpr (Order >= 3)
    jet.third = {cplx{d_r[0], d_i[0]}, cplx{d_r[1], d_i[1]}, cplx{d_r[2], d_i[2]},
                 cplx{d_r[3], d_i[3]}};
  if constexpr (Order >= 4) jet.bilaplacian = {b_r, b_i};
}

ComplexJet WaveState::jet(const Vec2& x, double t, JetOrder order) const {
  ComplexJet jet;
  switch (order) {
    case JetOrder::Value:
      accumulate<0>(x, t, jet);
      break;
    case JetOrder::First:
      accumulate<1>(x, t, jet);
      break;
    case JetOrder::Second:
      accumulate<2>(x, t, jet);
      break;
    case JetOrder::Third:
      accumulate<3>(x, t, jet);
      break;
    case JetOrder::Fourth:
      accumulate<4>(x, t, jet);
      break;
  }
  return jet;
}

cplx WaveState::value(const Vec2& x, double t) const { return jet(x, t, JetOrder::Value).value; }

double eigenmode(int m, int n, const Vec2& x) {
  if (!in_box(x)) throw std::domain_error("eigenmode evaluated outside the box");
  return kTwoOverPi * std::sin(m * x.x) * std::sin(n * x.y);
}

WaveState make_psi1() {
  const auto& th = kReferencePhases;
  return WaveState({{1, 1, 0.5, th[0]}, {1, 2, 0.5, th[1]}, {2, 1, 0.5, th[2]}, {2, 2, 0.5, th[3]}},
                   "psi1");
}

WaveState make_psi2() {
  const auto& th = kReferencePhases;
  const double big = std::sqrt(3.0) / 2.0;
  const double small = 1.0 / (2.0 * std::sqrt(3.0));
  return WaveState(
      {{1, 1, big, th[0]}, {1, 2, small, th[1]}, {2, 1, small, th[2]}, {2, 2, small, th[3]}},
      "psi2");
}

WaveState make_named_state(const std::string& name) {
  if (name == "psi1") return make_psi1();
  if (name == "psi2") return make_psi2();
  throw std::invalid_argument("unknown wavefunction builder '" + name + "'");
}

ComplexJet eval_jet(const WaveState& state, const Vec2& x, double t) { return state.jet(x, t); }

CurrentJet current_from_jet(const ComplexJet& jet, JetOrder order) {
  const int ord = static_cast<int>(order);
  const cplx psi_c = std::conj(jet.value);
  const cplx d1 = jet.grad[0], d2 = jet.grad[1];

  CurrentJet cur;
  cur.density = std::norm(jet.value);
  cur.j = {std::imag(psi_c * d1), std::imag(psi_c * d2)};
  cur.grad_density = {2.0 * std::real(psi_c * d1), 2.0 * std::real(psi_c * d2)};
  cur.curl_j = 2.0 * std::imag(std::conj(d1) * d2);
  if (ord < 2) return cur;

  const cplx lap = jet.laplacian();
  const cplx d11 = jet.hess[0], d12 = jet.hess[1], d22 = jet.hess[2];
  cur.div_j = std::imag(psi_c * lap);
  // d_l [2 Im(conj(d1 psi) d2 psi)]
  cur.grad_curl_j = {2.0 * std::imag(std::conj(d11) * d2 + std::conj(d1) * d12),
                     2.0 * std::imag(std::conj(d12) * d2 + std::conj(d1) * d22)};
  cur.lap_density =
      2.0 * std::real(psi_c * lap) + 2.0 * (std::norm(d1) + std::norm(d2));
  if (ord < 3) return cur;

  const auto glap = jet.grad_laplacian();
  cur.grad_div_j = {std::imag(std::conj(d1) * lap + psi_c * glap[0]),
                    std::imag(std::conj(d2) * lap + psi_c * glap[1])};
  cur.lap_curl_j = 2.0 * std::imag(std::conj(glap[0]) * d2 +
                                   2.0 * (std::conj(d11) * d12 + std::conj(d12) * d22) +
                                   std::conj(d1) * glap[1]);
  if (ord < 4) return cur;

  cur.lap_div_j = std::imag(2.0 * (std::conj(d1) * glap[0] + std::conj(d2) * glap[1]) +
                            psi_c * jet.bilaplacian);
  return cur;
}

CurrentJet current_jet(const WaveState& state, const Vec2& x, double t, JetOrder order) {
  return current_from_jet(state.jet(x, t, order), order);
}

double period(const WaveState& state) {
  int g = 0;
  for (const auto& mode : state.modes()) g = std::gcd(g, mode.m * mode.m + mode.n * mode.n);
  return 4.0 * std::numbers::pi / static_cast<double>(g);
}

}  // namespace pilotwave
