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
#include "pilotwave/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "pilotwave/nodes.hpp"
#include "pilotwave/output.hpp"
#include "pilotwave/parallel.hpp"

namespace pilotwave {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string file_tag(const GuidanceSpec& spec) {
  std::string s = "mu" + format_double(spec.mu);
  if (spec.f != FChoice::None) s += "_" + to_string(spec.f);
  return s;
}

json integrator_to_json(const IntegratorConfig& c) {
  return {{"initial_step", c.initial_step}, {"max_steps", c.max_steps},
          {"abs_tol", c.abs_tol},           {"rel_tol", c.rel_tol},
          {"safety", c.safety},             {"min_step", c.min_step},
          {"max_step", c.max_step}};
}

IntegratorConfig integrator_from_json(const json& j, IntegratorConfig base = {}) {
  for (const auto& [key, value] : j.items()) {
    if (key == "initial_step") base.initial_step = value.get<double>();
    else if (key == "max_steps") base.max_steps = value.get<long>();
    else if (key == "abs_tol") base.abs_tol = value.get<double>();
    else if (key == "rel_tol") base.rel_tol = value.get<double>();
    else if (key == "safety") base.safety = value.get<double>();
    else if (key == "min_step") base.min_step = value.get<double>();
    else if (key == "max_step") base.max_step = value.get<double>();
    else throw std::invalid_argument("unknown integrator setting '" + key + "'");
  }
  return base;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// Renders rows of cells with the first column left-aligned and the rest
// right-aligned.
std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream os;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == 0) {
        os << std::left << std::setw(static_cast<int>(width[c])) << row[c] << " |";
      } else {
        os << ' ' << std::right << std::setw(static_cast<int>(width[c])) << row[c];
      }
    }
    os << '\n';
    if (r == 0) {
      std::size_t total = width[0] + 2;
      for (std::size_t c = 1; c < width.size(); ++c) total += width[c] + 1;
      os << std::string(total, '-') << '\n';
    }
  }
  return os.str();
}

}  // namespace

double parse_time(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw std::invalid_argument("time must be a number or a string");
  const std::string s = j.get<std::string>();
  static const std::regex with_pi(R"(^\s*([0-9]*\.?[0-9]*)\s*\*?\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)");
  std::smatch m;
  if (std::regex_match(s, m, with_pi)) {
    const double factor = m[1].length() > 0 ? std::stod(m[1].str()) : 1.0;
    const double divisor = m[2].matched ? std::stod(m[2].str()) : 1.0;
    if (divisor == 0.0) throw std::invalid_argument("bad time '" + s + "'");
    return factor * kPi / divisor;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("bad time '" + s + "'");
}

std::string time_label(double t) {
  const double k = t / kPi;
  const double r = std::round(k);
  if (std::abs(k - r) < 1e-9) {
    if (r == 0.0) return "0";
    if (r == 1.0) return "pi";
    return format_double(r) + "pi";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", t);
  return buf;
}

WaveState RunConfig::make_state() const {
  if (!modes.empty()) return WaveState(modes, wavefunction);
  return make_named_state(wavefunction);
}

void RunConfig::validate() const {
  make_state();
  lattice.validate();
  integrator.validate();
  if (guidance.empty()) throw std::invalid_argument("config needs at least one guidance spec");
  if (densities.empty()) throw std::invalid_argument("config needs at least one density");
  if (times.empty()) throw std::invalid_argument("config needs at least one output time");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0) || !std::isfinite(times[k]))
      throw std::invalid_argument("output times must be finite and >= 0");
    if (k > 0 && !(times[k] > times[k - 1]))
      throw std::invalid_argument("output times must be strictly increasing");
  }
  for (const auto& g : guidance)
    if (!std::isfinite(g.mu)) throw std::invalid_argument("guidance mu must be finite");
  if (figures && lattice.resolution % 128 != 0)
    throw std::invalid_argument("figures need a lattice resolution divisible by 128");
  if (hbar_scale && !std::isfinite(*hbar_scale))
    throw std::invalid_argument("hbar_scale must be finite");
  if (workers < 0) throw std::invalid_argument("workers must be >= 0");
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") {
      cfg.name = value.get<std::string>();
    } else if (key == "wavefunction") {
      if (value.is_string()) {
        cfg.wavefunction = value.get<std::string>();
      } else {
        cfg.wavefunction = "custom";
        for (const auto& q : value.at("modes")) {
          if (!q.is_array() || q.size() != 4)
            throw std::invalid_argument("modes are [m, n, amplitude, phase] quadruples");
          cfg.modes.push_back({q[0].get<int>(), q[1].get<int>(), q[2].get<double>(),
                               q[3].get<double>()});
        }
      }
    } else if (key == "guidance") {
      for (const auto& g : value)
        cfg.guidance.push_back(
            {g.at("mu").get<double>(), parse_f_choice(g.value("f", std::string("none")))});
    } else if (key == "densities") {
      for (const auto& d : value) cfg.densities.push_back(parse_density_kind(d.get<std::string>()));
    } else if (key == "times") {
      for (const auto& t : value) cfg.times.push_back(parse_time(t));
    } else if (key == "lattice") {
      cfg.lattice.resolution = value.value("R", cfg.lattice.resolution);
      cfg.lattice.cells = value.value("C", cfg.lattice.cells);
      cfg.lattice.margin = value.value("margin", cfg.lattice.margin);
    } else if (key == "integrator") {
      cfg.integrator = integrator_from_json(value);
    } else if (key == "outputs") {
      cfg.outputs = value.get<std::string>();
    } else if (key == "figures") {
      cfg.figures = value.get<bool>();
    } else if (key == "density_grids") {
      cfg.density_grids = value.get<bool>();
    } else if (key == "timings") {
      cfg.timings = value.get<bool>();
    } else if (key == "workers") {
      cfg.workers = value.get<int>();
    } else if (key != "hbar_scale") {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  if (j.contains("hbar_scale") && !j.at("hbar_scale").is_null()) {
    const auto& s = j.at("hbar_scale");
    if (s.is_string()) {
      if (s.get<std::string>() != "cell-sum")
        throw std::invalid_argument("hbar_scale must be a number or \"cell-sum\"");
      cfg.hbar_scale = cell_sum_scale(cfg.lattice.cells);
    } else {
      cfg.hbar_scale = s.get<double>();
    }
  }
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  if (cfg.modes.empty()) {
    j["wavefunction"] = cfg.wavefunction;
  } else {
    json modes = json::array();
    for (const auto& m : cfg.modes) modes.push_back({m.m, m.n, m.amplitude, m.phase});
    j["wavefunction"] = {{"modes", modes}};
  }
  json guidance = json::array();
  for (const auto& g : cfg.guidance) guidance.push_back({{"mu", g.mu}, {"f", to_string(g.f)}});
  j["guidance"] = guidance;
  json densities = json::array();
  for (auto d : cfg.densities) densities.push_back(to_string(d));
  j["densities"] = densities;
  j["times"] = cfg.times;
  j["lattice"] = {{"R", cfg.lattice.resolution},
                  {"C", cfg.lattice.cells},
                  {"margin", cfg.lattice.margin}};
  j["integrator"] = integrator_to_json(cfg.integrator);
  j["outputs"] = cfg.outputs.string();
  j["figures"] = cfg.figures;
  j["density_grids"] = cfg.density_grids;
  j["timings"] = cfg.timings;
  j["workers"] = cfg.workers;
  j["hbar_scale"] = cfg.hbar_scale ? json(*cfg.hbar_scale) : json(nullptr);
  return j;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::vector<std::string> preset_names() { return {"psi1_f1", "psi1_f2f3", "psi2"}; }

RunConfig preset_config(const std::string& name) {
  RunConfig cfg;
  cfg.name = name;
  cfg.lattice = {1024, 32, 2};
  cfg.outputs = "out/" + name;
  cfg.figures = true;
  cfg.hbar_scale = cell_sum_scale(cfg.lattice.cells);
  if (name == "psi1_f1") {
    cfg.wavefunction = "psi1";
    cfg.guidance = {{0.0, FChoice::None}, {1.0, FChoice::F1}, {2.0, FChoice::F1}};
    cfg.densities = {DensityKind::Rho0, DensityKind::Rho1, DensityKind::Rho2, DensityKind::Rho3,
                     DensityKind::Rho4};
    cfg.times = {0.0, 4 * kPi, 8 * kPi};
  } else if (name == "psi1_f2f3") {
    cfg.wavefunction = "psi1";
    cfg.guidance = {{0.0, FChoice::None},
                    {0.5, FChoice::F2},
                    {1.0, FChoice::F2},
                    {1.0, FChoice::F3},
                    {2.0, FChoice::F3}};
    cfg.densities = {DensityKind::Rho0};
    cfg.times = {0.0, 2 * kPi, 4 * kPi};
  } else if (name == "psi2") {
    cfg.wavefunction = "psi2";
    cfg.guidance = {{0.0, FChoice::None}, {2.0, FChoice::F1}};
    cfg.densities = {DensityKind::Rho0};
    cfg.times = {0.0, 6 * kPi, 12 * kPi};
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return cfg;
}

json RunManifest::to_json() const {
  json rows_json = json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"density", to_string(r.density)},
                         {"mu", r.spec.mu},
                         {"f", to_string(r.spec.f)},
                         {"t", r.t},
                         {"hbar", r.hbar},
                         {"backtrack_pct", r.backtrack_pct},
                         {"runtime_s", r.runtime_s},
                         {"ok_points", r.ok_points},
                         {"attempted_points", r.attempted_points},
                         {"mass", r.mass}});
  }
  return {{"version", version},
          {"config", config},
          {"integrator", integrator_to_json(integrator)},
          {"hbar_scale", hbar_scale ? json(*hbar_scale) : json(nullptr)},
          {"wall_seconds", wall_seconds},
          {"notes", notes},
          {"rows", rows_json}};
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest m;
  m.version = j.value("version", std::string());
  m.config = j.value("config", json::object());
  if (j.contains("integrator")) m.integrator = integrator_from_json(j.at("integrator"));
  if (j.contains("hbar_scale") && !j.at("hbar_scale").is_null())
    m.hbar_scale = j.at("hbar_scale").get<double>();
  m.wall_seconds = j.value("wall_seconds", 0.0);
  m.notes = j.value("notes", std::vector<std::string>{});
  for (const auto& r : j.at("rows")) {
    ReportRow row;
    row.density = parse_density_kind(r.at("density").get<std::string>());
    row.spec = {r.at("mu").get<double>(), parse_f_choice(r.at("f").get<std::string>())};
    row.t = r.at("t").get<double>();
    row.hbar = r.at("hbar").get<double>();
    row.backtrack_pct = r.at("backtrack_pct").get<double>();
    row.runtime_s = r.value("runtime_s", 0.0);
    row.ok_points = r.value("ok_points", std::size_t{0});
    row.attempted_points = r.value("attempted_points", std::size_t{0});
    row.mass = r.value("mass", 0.0);
    m.rows.push_back(row);
  }
  return m;
}

std::string report_csv(const RunManifest& manifest) {
  std::ostringstream os;
  os << "density,mu,f,t,hbar,backtrack_pct,runtime_s\n";
  for (const auto& r : manifest.rows) {
    os << to_string(r.density) << ',' << format_double(r.spec.mu) << ',' << to_string(r.spec.f)
       << ',' << format_double(r.t) << ',' << format_double(r.hbar) << ','
       << format_double(r.backtrack_pct) << ',' << fixed(r.runtime_s, 3) << '\n';
  }
  return os.str();
}

RunManifest run(const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const WaveState state = cfg.make_state();
  const int workers = cfg.workers > 0 ? cfg.workers : default_workers();
  const Lattice& lattice = cfg.lattice;

  std::filesystem::create_directories(cfg.outputs);
  {
    const auto probe = cfg.outputs / ".write_probe";
    std::ofstream out(probe);
    if (!out) throw std::invalid_argument("output directory not writable: " + cfg.outputs.string());
    out.close();
    std::filesystem::remove(probe);
  }

  RunManifest manifest;
  manifest.config = config_to_json(cfg);
  manifest.version = PILOTWAVE_VERSION;
  manifest.integrator = cfg.integrator;
  manifest.hbar_scale = cfg.hbar_scale;
  manifest.notes.push_back("max_steps counts attempted (accepted + rejected) steps");
  manifest.notes.push_back("hbar is the area-weighted cell sum over cells outside the margin");

  const std::size_t nt = cfg.times.size();
  const std::size_t nd = cfg.densities.size();
  std::vector<ReportRow> rows(cfg.guidance.size() * nd * nt);

  for (std::size_t s = 0; s < cfg.guidance.size(); ++s) {
    const GuidanceSpec& spec = cfg.guidance[s];
    for (std::size_t ti = 0; ti < nt; ++ti) {
      const double t = cfg.times[ti];
      const auto task_start = std::chrono::steady_clock::now();
      const BacktrackField bt = backtrack_lattice(state, spec, lattice, t, cfg.integrator, workers);
      const DensityField eq = density_from_backtrack(state, DensityKind::Equilibrium, bt, workers);
      const CoarseField eq_coarse = coarse_grain(eq, lattice.cells, lattice.margin);
      const double backtrack_seconds = seconds_since(task_start);
      const std::string tag = file_tag(spec) + "_t" + time_label(t);
      if (cfg.figures)
        write_text_file(cfg.outputs / "smoothed" / ("equilibrium_" + tag + ".txt"),
                        [&] {
                          std::ostringstream os;
                          write_smoothed_grid(os, smooth(eq), spec.label() + " equilibrium");
                          return os.str();
                        }());

      for (std::size_t d = 0; d < nd; ++d) {
        const auto density_start = std::chrono::steady_clock::now();
        const DensityKind kind = cfg.densities[d];
        const DensityField field = density_from_backtrack(state, kind, bt, workers);
        ReportRow row;
        row.density = kind;
        row.spec = spec;
        row.t = t;
        row.hbar = hbar(coarse_grain(field, lattice.cells, lattice.margin), eq_coarse);
        row.backtrack_pct = bt.backtrack_pct();
        row.ok_points = bt.ok_count;
        row.attempted_points = bt.attempted_count;
        row.mass = field.mass();
        row.runtime_s = cfg.timings ? backtrack_seconds + seconds_since(density_start) : 0.0;
        rows[(s * nd + d) * nt + ti] = row;

        const std::string label = spec.label() + " " + to_string(kind) + " " + state.name();
        if (cfg.density_grids) {
          std::ostringstream os;
          write_density_grid(os, field, label);
          write_text_file(cfg.outputs / "densities" / (to_string(kind) + "_" + tag + ".txt"),
                          os.str());
        }
        if (cfg.figures) {
          std::ostringstream os;
          write_smoothed_grid(os, smooth(field), label);
          write_text_file(cfg.outputs / "smoothed" / (to_string(kind) + "_" + tag + ".txt"),
                          os.str());
        }
      }
      if (log) {
        *log << "[" << cfg.name << "] " << spec.label() << " t=" << time_label(t)
             << " backtracked " << fixed(bt.backtrack_pct(), 2) << "% in "
             << fixed(backtrack_seconds, 1) << " s\n";
        log->flush();
      }
    }
  }
  manifest.rows = std::move(rows);

  if (cfg.figures) figure_dump(cfg, state, log);

  manifest.wall_seconds = cfg.timings ? seconds_since(start) : 0.0;
  write_text_file(cfg.outputs / "report.csv", report_csv(manifest));
  write_text_file(cfg.outputs / "manifest.json", manifest.to_json().dump(2) + "\n");
  write_text_file(cfg.outputs / "tables.txt", table_render(manifest));
  return manifest;
}

std::string table_render(const RunManifest& manifest) {
  std::vector<double> times;
  std::vector<GuidanceSpec> specs;
  std::vector<DensityKind> densities;
  for (const auto& r : manifest.rows) {
    if (std::find(times.begin(), times.end(), r.t) == times.end()) times.push_back(r.t);
    if (std::find(specs.begin(), specs.end(), r.spec) == specs.end()) specs.push_back(r.spec);
    if (std::find(densities.begin(), densities.end(), r.density) == densities.end())
      densities.push_back(r.density);
  }
  std::sort(times.begin(), times.end());
  auto find_row = [&](DensityKind d, const GuidanceSpec& s, double t) -> const ReportRow* {
    for (const auto& r : manifest.rows)
      if (r.density == d && r.spec == s && r.t == t) return &r;
    return nullptr;
  };
  auto header = [&](const std::string& first) {
    std::vector<std::string> h{first};
    for (double t : times) h.push_back("t=" + time_label(t));
    return h;
  };

  std::ostringstream os;
  os << "Backtracked lattice points (%)\n";
  std::vector<std::vector<std::string>> pct{header("guidance")};
  for (const auto& s : specs) {
    std::vector<std::string> line{s.label()};
    for (double t : times) {
      const ReportRow* r = nullptr;
      for (auto d : densities)
        if (!r) r = find_row(d, s, t);
      line.push_back(r ? fixed(r->backtrack_pct, 2) : "-");
    }
    pct.push_back(line);
  }
  os << render_table(pct) << '\n';

  os << "H-bar (raw)\n";
  std::vector<std::vector<std::string>> raw{header("density, guidance")};
  std::vector<std::vector<std::string>> scaled{header("density, guidance")};
  for (auto d : densities) {
    for (const auto& s : specs) {
      std::vector<std::string> a{to_string(d) + ", " + s.label()};
      std::vector<std::string> b = a;
      for (double t : times) {
        const ReportRow* r = find_row(d, s, t);
        a.push_back(r ? fixed(r->hbar, 5) : "-");
        if (manifest.hbar_scale)
          b.push_back(r ? fixed(std::round(r->hbar * *manifest.hbar_scale) + 0.0, 0) : "-");
      }
      raw.push_back(a);
      scaled.push_back(b);
    }
  }
  os << render_table(raw);
  if (manifest.hbar_scale) {
    os << "\nH-bar (x" << fixed(*manifest.hbar_scale, 4) << ", rounded)\n" << render_table(scaled);
  }
  return os.str();
}

void figure_dump(const RunConfig& cfg, const WaveState& state, std::ostream* log) {
  const double window = period(state);
  const Vec2 centre{kBoxSide / 2.0, kBoxSide / 2.0};
  for (const auto& spec : cfg.guidance) {
    const auto traj = integrate(state, spec, centre, 0.0, window, cfg.integrator, window / 2000.0);
    std::ostringstream os;
    write_trajectory(os, traj, spec.label() + " " + state.name());
    write_text_file(cfg.outputs / "trajectories" / (file_tag(spec) + ".txt"), os.str());
  }

  std::vector<std::string> warnings;
  const auto nodes = find_nodes(state, 0.0, 64, &warnings);
  if (nodes.size() == 1) {
    const auto track = track_node(state, 0.0, window, window / 2000.0);
    std::ostringstream os;
    for (std::size_t k = 0; k < track.segments.size(); ++k) {
      if (k) os << "\n\n";
      write_node_path(os, track.segments[k]);
    }
    write_text_file(cfg.outputs / "nodes" / "node_path.txt", os.str());
    warnings.insert(warnings.end(), track.warnings.begin(), track.warnings.end());
  } else if (log) {
    *log << "[" << cfg.name << "] " << nodes.size() << " nodes at t=0; no node path written\n";
  }
  if (log)
    for (const auto& w : warnings) *log << "[" << cfg.name << "] warning: " << w << '\n';
}

}  // namespace pilotwave
