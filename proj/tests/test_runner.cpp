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
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pilotwave/output.hpp"
#include "pilotwave/runner.hpp"

using namespace pilotwave;
using nlohmann::json;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> data_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

json small_config(const std::string& outputs) {
  return {{"name", "small"},
          {"wavefunction", "psi1"},
          {"guidance", {{{"mu", 0}}, {{"mu", 1}, {"f", "f1"}}}},
          {"densities", {"rho0", "rho4"}},
          {"times", {0, "pi/8"}},
          {"lattice", {{"R", 32}, {"C", 8}, {"margin", 1}}},
          {"outputs", outputs},
          {"timings", false},
          {"workers", 1}};
}

}  // namespace

TEST_CASE("time parsing and labels") {
  CHECK(parse_time(12.5) == 12.5);
  CHECK(parse_time("4pi") == doctest::Approx(4 * pi));
  CHECK(parse_time("pi/2") == doctest::Approx(pi / 2));
  CHECK(parse_time("0.5 pi") == doctest::Approx(pi / 2));
  CHECK(parse_time("pi") == doctest::Approx(pi));
  CHECK(parse_time("3") == 3.0);
  CHECK_THROWS_AS(parse_time("four pi"), std::invalid_argument);
  CHECK_THROWS_AS(parse_time("pi/0"), std::invalid_argument);
  CHECK(time_label(0.0) == "0");
  CHECK(time_label(pi) == "pi");
  CHECK(time_label(8 * pi) == "8pi");
  CHECK(time_label(1.25) == "1.25");
}

TEST_CASE("config parsing") {
  const auto cfg = config_from_json(small_config("x"));
  CHECK(cfg.guidance.size() == 2);
  CHECK(cfg.guidance[1] == GuidanceSpec{1.0, FChoice::F1});
  CHECK(cfg.densities == std::vector<DensityKind>{DensityKind::Rho0, DensityKind::Rho4});
  CHECK(cfg.times[1] == doctest::Approx(pi / 8));
  CHECK(cfg.lattice.resolution == 32);
  CHECK_FALSE(cfg.hbar_scale.has_value());
  CHECK_NOTHROW(cfg.validate());

  const auto back = config_from_json(config_to_json(cfg));
  CHECK(config_to_json(back) == config_to_json(cfg));

  auto j = small_config("x");
  j["hbar_scale"] = "cell-sum";
  CHECK(*config_from_json(j).hbar_scale == doctest::Approx(64 / (pi * pi)));
  j["hbar_scale"] = 2.0;
  CHECK(*config_from_json(j).hbar_scale == 2.0);

  json custom = small_config("x");
  custom["wavefunction"] = {{"modes", {{1, 1, 0.6, 0.0}, {2, 1, 0.8, 1.0}}}};
  const auto c = config_from_json(custom);
  CHECK(c.make_state().modes().size() == 2);
}

TEST_CASE("config errors fail fast") {
  auto bad = [](auto edit) {
    json j = small_config("x");
    edit(j);
    return j;
  };
  CHECK_THROWS_AS(config_from_json(bad([](json& j) { j["colour"] = 1; })), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(bad([](json& j) { j["guidance"][0]["f"] = "f9"; })),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(bad([](json& j) { j["densities"][0] = "rho9"; })),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(bad([](json& j) { j["hbar_scale"] = "huge"; })),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(bad([](json& j) { j["times"] = {"soon"}; })),
                  std::invalid_argument);

  const auto invalid = [&](auto edit) { return config_from_json(bad(edit)); };
  CHECK_THROWS_AS(invalid([](json& j) { j["times"] = {1, 0}; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(invalid([](json& j) { j["times"] = {-1}; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(invalid([](json& j) { j["lattice"]["R"] = 30; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(invalid([](json& j) { j["wavefunction"] = "psi7"; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      invalid([](json& j) { j["wavefunction"] = {{"modes", {{1, 1, 0.5, 0.0}}}}; }).validate(),
      std::invalid_argument);
  CHECK_THROWS_AS(invalid([](json& j) { j["figures"] = true; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(invalid([](json& j) { j["integrator"] = {{"min_step", 0.0}}; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(invalid([](json& j) { j["guidance"] = json::array(); }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(load_config("does/not/exist.json"), std::invalid_argument);
}

TEST_CASE("presets") {
  CHECK(preset_names().size() == 3);
  const auto f1 = preset_config("psi1_f1");
  CHECK(f1.guidance.size() * f1.densities.size() * f1.times.size() == 45);
  CHECK(f1.lattice.resolution == 1024);
  CHECK(*f1.hbar_scale == doctest::Approx(cell_sum_scale(32)));
  for (const auto& name : preset_names()) CHECK_NOTHROW(preset_config(name).validate());
  CHECK_THROWS_AS(preset_config("psi3"), std::invalid_argument);
}

TEST_CASE("run with only t = 0") {
  auto j = small_config("out_t0");
  j["times"] = {0};
  const auto m = run(config_from_json(j));
  REQUIRE(m.rows.size() == 4);
  for (const auto& r : m.rows) {
    CHECK(r.backtrack_pct == 100.0);
    CHECK(r.hbar > 0.0);
    CHECK(r.t == 0.0);
  }
  // mu does not matter before any evolution.
  CHECK(m.rows[0].hbar == m.rows[2].hbar);
  CHECK(fs::exists("out_t0/report.csv"));
  CHECK(fs::exists("out_t0/manifest.json"));
  CHECK(fs::exists("out_t0/tables.txt"));
  CHECK(data_lines("out_t0/report.csv").size() == 5);
}

TEST_CASE("reports are reproducible") {
  const auto a = run(config_from_json(small_config("out_rep_a")));
  const auto b = run(config_from_json(small_config("out_rep_b")));
  REQUIRE(a.rows.size() == 8);
  CHECK(slurp("out_rep_a/report.csv") == slurp("out_rep_b/report.csv"));
  CHECK(slurp("out_rep_a/report.csv").rfind("density,mu,f,t,hbar,backtrack_pct,runtime_s\n", 0) ==
        0);
  for (const auto& r : a.rows) CHECK(r.runtime_s == 0.0);

  const auto parsed = RunManifest::from_json(json::parse(slurp("out_rep_a/manifest.json")));
  REQUIRE(parsed.rows.size() == a.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    CHECK(parsed.rows[k].hbar == a.rows[k].hbar);
    CHECK(parsed.rows[k].spec == a.rows[k].spec);
    CHECK(parsed.rows[k].density == a.rows[k].density);
  }
  CHECK(table_render(parsed) == table_render(a));
}

TEST_CASE("table rendering") {
  RunManifest m;
  ReportRow r;
  r.spec = {1.0, FChoice::F1};
  r.t = 4 * pi;
  r.hbar = 0.123456;
  r.backtrack_pct = 99.8949;
  m.rows.push_back(r);
  const auto text = table_render(m);
  CHECK(text.find("99.89") != std::string::npos);
  CHECK(text.find("t=4pi") != std::string::npos);
  CHECK(text.find("0.12346") != std::string::npos);
  CHECK(text.find("mu=1,f1") != std::string::npos);
  CHECK(text.find("rounded") == std::string::npos);

  m.hbar_scale = 100.0;
  CHECK(table_render(m).find("|    12\n") != std::string::npos);
}

TEST_CASE("figure outputs") {
  auto j = small_config("out_fig");
  j["lattice"] = {{"R", 128}, {"C", 32}, {"margin", 2}};
  j["times"] = {0};
  j["densities"] = {"rho0"};
  j["guidance"] = {{{"mu", 0}}};
  j["figures"] = true;
  j["density_grids"] = true;
  run(config_from_json(j));

  const auto traj = data_lines("out_fig/trajectories/mu0.txt");
  REQUIRE(traj.size() > 100);
  std::istringstream first(traj.front()), last(traj.back());
  double t0, x0, y0, t1, x1, y1;
  first >> t0 >> x0 >> y0;
  last >> t1 >> x1 >> y1;
  CHECK(t0 == 0.0);
  CHECK(x0 == doctest::Approx(pi / 2));
  CHECK(y0 == doctest::Approx(pi / 2));
  CHECK(t1 == doctest::Approx(4 * pi));

  const auto smoothed = data_lines("out_fig/smoothed/rho0_mu0_t0.txt");
  CHECK(smoothed.size() == 105);
  std::istringstream row(smoothed[0]);
  int cols = 0;
  for (std::string tok; row >> tok;) ++cols;
  CHECK(cols == 105);

  CHECK(data_lines("out_fig/nodes/node_path.txt").size() > 2000);

  std::ifstream grid("out_fig/densities/rho0_mu0_t0.txt");
  const auto field = read_density_grid(grid);
  CHECK(field.resolution == 128);
  CHECK(field.mask_count() == 112u * 112u);
}

TEST_CASE("unwritable output directory") {
  write_text_file("out_blocker", "x");
  CHECK_THROWS(run(config_from_json(small_config("out_blocker/sub"))));
}
