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
#include "pilotwave/check.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "pilotwave/integrate.hpp"
#include "pilotwave/nodes.hpp"
#include "pilotwave/parallel.hpp"

namespace pilotwave {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* pattern, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

// b is below a, or both sit on the numerical floor around zero.
bool decreases(double a, double b, double floor) {
  return b < a || (std::abs(a) <= floor && std::abs(b) <= floor);
}

class Timed {
 public:
  explicit Timed(CriterionResult& r) : r_(r) {}
  ~Timed() {
    r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  CriterionResult& r_;
  std::chrono::steady_clock::time_point start_{std::chrono::steady_clock::now()};
};

GuidanceSpec spec(double mu, FChoice f) { return {mu, f}; }

}  // namespace

std::string format_result(const CriterionResult& r) {
  std::ostringstream out;
  out << "AC" << r.id << ' ' << (r.passed ? "PASS" : "FAIL") << ' ' << r.title << " ("
      << fmt("%.1f", r.seconds) << " s): " << r.detail;
  return out.str();
}

AcceptanceSuite::AcceptanceSuite(int workers, std::ostream* log)
    : workers_(workers > 0 ? workers : default_workers()),
      log_(log),
      psi1_(make_psi1()),
      psi2_(make_psi2()) {}

const WaveState& AcceptanceSuite::state(const std::string& name) const {
  return name == "psi2" ? psi2_ : psi1_;
}

const BacktrackField& AcceptanceSuite::backtrack(const std::string& state_name,
                                                 const GuidanceSpec& g, double t,
                                                 int resolution) {
  const GuidanceSpec key_spec = g.has_extra_term() ? g : GuidanceSpec{};
  const Key key{state_name, key_spec.mu, static_cast<int>(key_spec.f), t, resolution};
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  Lattice lattice;
  lattice.resolution = resolution;
  const auto start = std::chrono::steady_clock::now();
  auto field = backtrack_lattice(state(state_name), key_spec, lattice, t, IntegratorConfig{},
                                 workers_);
  if (log_) {
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    *log_ << "  backtrack " << state_name << ' ' << key_spec.label() << " t=" << t
          << " R=" << resolution << ": " << fmt("%.3f", field.backtrack_pct()) << "% ok, "
          << fmt("%.1f", s) << " s" << std::endl;
  }
  return cache_.emplace(key, std::move(field)).first->second;
}

double AcceptanceSuite::hbar_at(const std::string& state_name, const GuidanceSpec& g,
                                DensityKind kind, double t, int resolution) {
  const auto& bt = backtrack(state_name, g, t, resolution);
  const auto& st = state(state_name);
  const auto rho = density_from_backtrack(st, kind, bt, workers_);
  const auto eq = density_from_backtrack(st, DensityKind::Equilibrium, bt, workers_);
  const int cells = bt.lattice.cells, margin = bt.lattice.margin;
  return hbar(coarse_grain(rho, cells, margin), coarse_grain(eq, cells, margin));
}

double AcceptanceSuite::pct_at(const std::string& state_name, const GuidanceSpec& g, double t) {
  return backtrack(state_name, g, t).backtrack_pct();
}

CriterionResult AcceptanceSuite::t0_hbar_ratios() {
  CriterionResult r{1, "t=0 H-bar ratios", false, "", 0.0};
  Timed timer(r);
  const double expected[6] = {54, 168, 169, 130, 300, 17};
  const DensityKind kinds[5] = {DensityKind::Rho0, DensityKind::Rho1, DensityKind::Rho2,
                                DensityKind::Rho3, DensityKind::Rho4};
  double h[6];
  for (int k = 0; k < 5; ++k) h[k] = hbar_at("psi1", {}, kinds[k], 0.0, kFullResolution);
  h[5] = hbar_at("psi2", {}, DensityKind::Rho0, 0.0, kFullResolution);

  double worst = 0.0;
  std::ostringstream d;
  d << "ratios";
  for (int k = 0; k < 6; ++k) {
    const double ratio = h[k] / h[0] * expected[0];
    worst = std::max(worst, std::abs(ratio / expected[k] - 1.0));
    d << ' ' << fmt("%.1f", ratio);
  }
  d << ", worst deviation " << fmt("%.2f", 100.0 * worst) << "% (limit 5%)";
  r.passed = worst <= 0.05;
  r.detail = d.str();
  return r;
}

CriterionResult AcceptanceSuite::backtrack_ordering() {
  CriterionResult r{2, "backtrack ordering", false, "", 0.0};
  Timed timer(r);
  const double p0_4 = pct_at("psi1", {}, 4 * kPi);
  const double p0_8 = pct_at("psi1", {}, 8 * kPi);
  const double p2f1_8 = pct_at("psi1", spec(2, FChoice::F1), 8 * kPi);
  const double p1f2 = pct_at("psi1", spec(1, FChoice::F2), 4 * kPi);
  const double others[3] = {pct_at("psi1", spec(0.5, FChoice::F2), 4 * kPi),
                            pct_at("psi1", spec(1, FChoice::F3), 4 * kPi),
                            pct_at("psi1", spec(2, FChoice::F3), 4 * kPi)};

  const bool a = p0_4 >= 99.0;
  const bool b = p2f1_8 < p0_8;
  const bool c = std::all_of(std::begin(others), std::end(others),
                             [&](double p) { return p1f2 < p; });
  std::ostringstream d;
  d << "mu=0 4pi " << fmt("%.3f", p0_4) << "%; 8pi mu=2,f1 " << fmt("%.3f", p2f1_8)
    << "% vs mu=0 " << fmt("%.3f", p0_8) << "%; 4pi mu=1,f2 " << fmt("%.3f", p1f2)
    << "% vs mu=0.5,f2 " << fmt("%.3f", others[0]) << "%, mu=1,f3 " << fmt("%.3f", others[1])
    << "%, mu=2,f3 " << fmt("%.3f", others[2]) << '%';
  r.passed = a && b && c;
  r.detail = d.str();
  return r;
}

CriterionResult AcceptanceSuite::relaxation_ordering() {
  CriterionResult r{3, "relaxation ordering", false, "", 0.0};
  Timed timer(r);
  const double h0 = hbar_at("psi1", {}, DensityKind::Rho0, 0.0);
  const double floor = 0.03 * h0;
  const double mus[3] = {0, 1, 2};
  double h[3][3];
  for (int m = 0; m < 3; ++m) {
    const auto g = spec(mus[m], FChoice::F1);
    h[m][0] = h0;
    h[m][1] = hbar_at("psi1", g, DensityKind::Rho0, 4 * kPi);
    h[m][2] = hbar_at("psi1", g, DensityKind::Rho0, 8 * kPi);
  }
  bool ok = true;
  for (int k = 1; k < 3; ++k)
    ok = ok && decreases(h[0][k], h[1][k], floor) && decreases(h[1][k], h[2][k], floor);
  for (int m = 0; m < 3; ++m)
    ok = ok && decreases(h[m][0], h[m][1], floor) && decreases(h[m][1], h[m][2], floor);

  std::ostringstream d;
  d << "scaled to 54 at t=0:";
  for (int m = 0; m < 3; ++m)
    d << " mu=" << mus[m] << ' ' << fmt("%.1f", 54 * h[m][1] / h0) << ','
      << fmt("%.1f", 54 * h[m][2] / h0) << ';';
  d << " floor " << fmt("%.4f", floor);
  r.passed = ok;
  r.detail = d.str();
  return r;
}

CriterionResult AcceptanceSuite::equivariance() {
  CriterionResult r{4, "equivariance", false, "", 0.0};
  Timed timer(r);
  const double h0 = hbar_at("psi1", {}, DensityKind::Rho0, 0.0);
  const GuidanceSpec specs[4] = {{}, spec(1, FChoice::F1), spec(2, FChoice::F1),
                                 spec(1, FChoice::F3)};
  double worst = 0.0;
  std::ostringstream d;
  for (const auto& g : specs) {
    const double h = hbar_at("psi1", g, DensityKind::Equilibrium, 4 * kPi);
    worst = std::max(worst, std::abs(h) / h0);
    d << g.label() << ' ' << fmt("%.2e", h) << "; ";
  }
  d << "worst " << fmt("%.3f", 100.0 * worst) << "% of H-bar(rho0, 0) (limit 2%)";
  r.passed = worst < 0.02;
  r.detail = d.str();
  return r;
}

CriterionResult AcceptanceSuite::fine_h_conservation() {
  CriterionResult r{5, "fine-grained H conservation", false, "", 0.0};
  Timed timer(r);
  const auto& st = psi1_;
  const auto& bt0 = backtrack("psi1", {}, 0.0);
  const auto& bt1 = backtrack("psi1", {}, 2 * kPi);
  auto rho0 = density_from_backtrack(st, DensityKind::Rho0, bt0, workers_);
  auto eq0 = density_from_backtrack(st, DensityKind::Equilibrium, bt0, workers_);
  auto rho1 = density_from_backtrack(st, DensityKind::Rho0, bt1, workers_);
  auto eq1 = density_from_backtrack(st, DensityKind::Equilibrium, bt1, workers_);
  std::size_t common = 0;
  for (std::size_t k = 0; k < rho0.mask.size(); ++k) {
    const std::uint8_t both = rho0.mask[k] && rho1.mask[k];
    rho0.mask[k] = eq0.mask[k] = rho1.mask[k] = eq1.mask[k] = both;
    common += both;
  }
  const double h0 = fine_H(rho0, eq0);
  const double h1 = fine_H(rho1, eq1);
  const double rel = std::abs(h1 / h0 - 1.0);
  r.passed = rel < 0.02;
  r.detail = "H(0) " + fmt("%.6f", h0) + ", H(2pi) " + fmt("%.6f", h1) + ", relative change " +
             fmt("%.3e", rel) + " over " + std::to_string(common) + " points (limit 2%)";
  return r;
}

CriterionResult AcceptanceSuite::circulation_quantization() {
  CriterionResult r{6, "circulation quantization", false, "", 0.0};
  Timed timer(r);
  constexpr int kQuadrature = 2000;
  constexpr double kHalf = 0.05;
  const auto& st = psi1_;
  const GuidanceSpec g{};
  // |psi1| repeats every 4pi/3, so the times stay inside one such interval.
  constexpr double kDt = 1e-3;
  const double times[3] = {0.0, 1.0, 2.0};
  const Vec2 candidates[5] = {{0.6, 0.6}, {2.5, 2.5}, {0.6, 2.5}, {2.5, 0.6}, {1.57, 2.7}};

  std::optional<long> winding;
  bool ok = true;
  double worst_rel = 0.0, worst_away = 0.0;
  std::ostringstream d;
  const auto track = track_node(st, times[0], times[2], kDt);
  if (track.segments.size() != 1) {
    r.detail = "node track split into " + std::to_string(track.segments.size()) + " segments";
    return r;
  }
  const auto& path = track.segments[0].samples;
  for (double t : times) {
    const auto k = static_cast<std::size_t>(std::lround((t - times[0]) / kDt));
    const auto nodes = find_nodes(st, t);
    if (k >= path.size() || nodes.size() != 1 || norm(nodes[0] - path[k].second) > 1e-8) {
      ok = false;
      d << "t=" << fmt("%.3f", t) << ": tracked node not confirmed; ";
      continue;
    }
    const auto around = square_loop(path[k].second, kHalf);
    const double c = circulation(st, g, around, t, kQuadrature);
    const long n = std::lround(c / (2 * kPi));
    const double rel = n != 0 ? std::abs(c - 2 * kPi * n) / std::abs(2 * kPi * n) : 1.0;
    worst_rel = std::max(worst_rel, rel);
    if (!winding) winding = n;
    ok = ok && n != 0 && n == *winding && rel < 1e-3;
    d << "t=" << fmt("%.3f", t) << " node (" << fmt("%.4f", path[k].second.x) << ','
      << fmt("%.4f", path[k].second.y) << ") n=" << n << "; ";

    int used = 0;
    for (const auto& center : candidates) {
      if (norm(center - path[k].second) < 0.5) continue;
      const auto away = square_loop(center, 0.1);
      worst_away = std::max(worst_away, std::abs(circulation(st, g, away, t, kQuadrature)));
      ++used;
    }
    ok = ok && used >= 2;
  }
  ok = ok && worst_away < 1e-4;
  d << "worst relative residual " << fmt("%.2e", worst_rel) << " (limit 1e-3), worst away "
    << fmt("%.2e", worst_away) << " (limit 1e-4)";
  r.passed = ok;
  r.detail = d.str();
  return r;
}

CriterionResult AcceptanceSuite::divergence_free() {
  CriterionResult r{7, "divergence-free modification", false, "", 0.0};
  Timed timer(r);
  constexpr int kSamples = 1000;
  constexpr double h = 1e-5;
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> pos(h, kBoxSide - h);
  std::uniform_real_distribution<double> time(0.0, 4 * kPi);

  double worst = 0.0;
  for (const WaveState* st : {&psi1_, &psi2_}) {
    for (FChoice f : {FChoice::F1, FChoice::F2, FChoice::F3}) {
      for (int k = 0; k < kSamples; ++k) {
        const Vec2 x{pos(rng), pos(rng)};
        const double t = time(rng);
        // mu-term eps grad f = (d2 f, -d1 f); the density factor is not part of it.
        const auto gx_p = f_value_and_grad(*st, f, x + Vec2{h, 0}, t).second;
        const auto gx_m = f_value_and_grad(*st, f, x - Vec2{h, 0}, t).second;
        const auto gy_p = f_value_and_grad(*st, f, x + Vec2{0, h}, t).second;
        const auto gy_m = f_value_and_grad(*st, f, x - Vec2{0, h}, t).second;
        const double div = ((gx_p.y - gx_m.y) - (gy_p.x - gy_m.x)) / (2 * h);
        worst = std::max(worst, std::abs(div));
      }
    }
  }
  r.passed = worst < 1e-6;
  r.detail = "max |div| " + fmt("%.2e", worst) + " over " + std::to_string(6 * kSamples) +
             " samples (limit 1e-6)";
  return r;
}

CriterionResult AcceptanceSuite::flow_composition() {
  CriterionResult r{8, "flow composition", false, "", 0.0};
  Timed timer(r);
  constexpr int kPoints = 10;
  constexpr double t_a = kPi;
  const auto cfg = IntegratorConfig{}.tightened(1e-3);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> pos(0.3, kBoxSide - 0.3);
  std::vector<Vec2> starts;
  for (int k = 0; k < kPoints; ++k) starts.push_back({pos(rng), pos(rng)});

  double worst = 0.0;
  int failures = 0;
  std::ostringstream d;
  for (const auto& g : {GuidanceSpec{}, spec(2, FChoice::F1)}) {
    double spec_worst = 0.0;
    for (const auto& x0 : starts) {
      try {
        spec_worst = std::max(spec_worst, flow_compose_check(psi1_, g, x0, t_a, cfg));
      } catch (const std::runtime_error&) {
        ++failures;
      }
    }
    worst = std::max(worst, spec_worst);
    d << g.label() << " max " << fmt("%.2e", spec_worst) << "; ";
  }
  d << failures << " failed legs (limit 1e-4, tau=4pi, t_a=pi)";
  r.passed = failures == 0 && worst < 1e-4;
  r.detail = d.str();
  return r;
}

CriterionResult AcceptanceSuite::psi2_contrast() {
  CriterionResult r{9, "psi2 contrast", false, "", 0.0};
  Timed timer(r);
  const double h0 = hbar_at("psi2", {}, DensityKind::Rho0, 0.0);
  const double still = hbar_at("psi2", {}, DensityKind::Rho0, 12 * kPi) / h0;
  const double driven = hbar_at("psi2", spec(2, FChoice::F1), DensityKind::Rho0, 12 * kPi) / h0;
  r.passed = still > 0.8 && driven < 0.15;
  r.detail = "H-bar(12pi)/H-bar(0): mu=0 " + fmt("%.3f", still) + " (need > 0.8), mu=2,f1 " +
             fmt("%.3f", driven) + " (need < 0.15)";
  return r;
}

std::vector<CriterionResult> AcceptanceSuite::run_all() {
  return {t0_hbar_ratios(),      backtrack_ordering(),        relaxation_ordering(),
          equivariance(),        fine_h_conservation(),       circulation_quantization(),
          divergence_free(),     flow_composition(),          psi2_contrast()};
}

}  // namespace pilotwave
