// Batch driver for the p-Willmore flow library. Links the C API only.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "pwillmore.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitStep = 3;

struct RunConfig {
  std::string input;
  std::string output_dir = ".";
  std::string log_path;
  int p = 2;
  int steps = 1;
  double tau0 = 1e-4;
  double scale = 1.0;
  double tau_max = -1.0;  // defaults to tau0
  bool fix_area = false;
  bool fix_volume = false;
  std::string reg = "nonlinear";
  double epsilon = 1e-5;
  int quad_degree = 7;
  int snapshot_every = 0;  // 0: only the final mesh
};

int fail(const std::string& msg, int code) {
  std::cerr << "error: " << msg << "\n";
  return code;
}

// Flat key=value file; '#' starts a comment; unknown keys are rejected.
bool parse_config_file(const std::string& path, RunConfig& cfg, std::string& err) {
  std::ifstream in(path);
  if (!in) {
    err = "cannot open config file '" + path + "'";
    return false;
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string trimmed;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c)) || !trimmed.empty()) trimmed += c;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
      trimmed.pop_back();
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      err = path + ":" + std::to_string(lineno) + ": expected key=value";
      return false;
    }
    std::string key = trimmed.substr(0, eq), value = trimmed.substr(eq + 1);
    auto strip = [](std::string& s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    };
    strip(key);
    strip(value);
    try {
      if (key == "input") cfg.input = value;
      else if (key == "output_dir") cfg.output_dir = value;
      else if (key == "log") cfg.log_path = value;
      else if (key == "p") cfg.p = std::stoi(value);
      else if (key == "steps") cfg.steps = std::stoi(value);
      else if (key == "tau0") cfg.tau0 = std::stod(value);
      else if (key == "scale") cfg.scale = std::stod(value);
      else if (key == "tau_max") cfg.tau_max = std::stod(value);
      else if (key == "fix_area") cfg.fix_area = value == "true" || value == "1";
      else if (key == "fix_volume") cfg.fix_volume = value == "true" || value == "1";
      else if (key == "reg") cfg.reg = value;
      else if (key == "epsilon") cfg.epsilon = std::stod(value);
      else if (key == "quadrature_degree") cfg.quad_degree = std::stoi(value);
      else if (key == "snapshot_every") cfg.snapshot_every = std::stoi(value);
      else {
        err = path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'";
        return false;
      }
    } catch (const std::exception&) {
      err = path + ":" + std::to_string(lineno) + ": bad value for '" + key + "'";
      return false;
    }
  }
  return true;
}

bool reg_mode_of(const std::string& name, pw_reg_mode& out) {
  if (name == "off") out = PW_REG_OFF;
  else if (name == "linear") out = PW_REG_LINEAR;
  else if (name == "nonlinear") out = PW_REG_NONLINEAR;
  else return false;
  return true;
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int cmd_run(const RunConfig& cfg) {
  if (cfg.input.empty()) return fail("run: no input mesh given", kExitConfig);
  if (cfg.steps < 1) return fail("run: steps must be >= 1", kExitConfig);
  if (cfg.p == 0 && cfg.fix_area)
    return fail("run: the area constraint is not available for p = 0 (mean curvature flow has "
                "no meaningful area preservation)",
                kExitConfig);
  pw_reg_mode reg;
  if (!reg_mode_of(cfg.reg, reg)) return fail("run: reg must be off, linear or nonlinear", kExitConfig);

  pw_mesh* mesh = nullptr;
  if (pw_mesh_load(cfg.input.c_str(), &mesh) != PW_OK)
    return fail(pw_last_error(), kExitConfig);
  pw_mesh_info info{};
  if (pw_mesh_get_info(mesh, &info) != PW_OK) {
    pw_mesh_free(mesh);
    return fail(pw_last_error(), kExitConfig);
  }
  if (!info.is_closed || !info.is_oriented) {
    pw_mesh_free(mesh);
    return fail("mesh not closed or not consistently oriented", kExitConfig);
  }

  pw_flow_config fc;
  pw_flow_config_init(&fc);
  fc.p = cfg.p;
  fc.fix_area = cfg.fix_area;
  fc.fix_volume = cfg.fix_volume;
  fc.tau0 = cfg.tau0;
  fc.scale = cfg.scale;
  fc.tau_max = cfg.tau_max > 0 ? cfg.tau_max : cfg.tau0;
  fc.quad_degree = cfg.quad_degree;
  fc.reg_mode = reg;
  fc.epsilon = cfg.epsilon;

  pw_flow* flow = nullptr;
  if (pw_flow_create(mesh, &fc, &flow) != PW_OK) {
    pw_mesh_free(mesh);
    return fail(pw_last_error(), kExitConfig);
  }
  pw_mesh_free(mesh);

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  const std::string log_path =
      cfg.log_path.empty() ? (std::filesystem::path(cfg.output_dir) / "flow.csv").string()
                           : cfg.log_path;
  std::ofstream log(log_path);
  if (!log) {
    pw_flow_free(flow);
    return fail("cannot open log file '" + log_path + "'", kExitConfig);
  }
  log << "step,t,tau,energy,area,volume,newton_residual,cd_before,cd_after,min_face_quality,"
         "wall_ms\n";

  auto snapshot = [&](int step) -> bool {
    pw_mesh* cur = nullptr;
    if (pw_flow_current_mesh(flow, &cur) != PW_OK) return false;
    char name[32];
    std::snprintf(name, sizeof name, "step_%06d.obj", step);
    const std::string path = (std::filesystem::path(cfg.output_dir) / name).string();
    const bool ok = pw_mesh_save(cur, path.c_str()) == PW_OK;
    pw_mesh_free(cur);
    return ok;
  };

  double prev_energy = 0.0;
  bool have_prev = false;
  for (int k = 1; k <= cfg.steps; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    pw_flow_stats st{};
    if (pw_flow_step(flow, &st) != PW_OK) {
      std::cerr << "error: step " << k << " failed: " << pw_last_error() << "\n";
      snapshot(k - 1);
      pw_flow_free(flow);
      return kExitStep;
    }
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    log << st.step << ',' << fmt17(st.t) << ',' << fmt17(st.tau) << ',' << fmt17(st.energy) << ','
        << fmt17(st.area) << ',' << fmt17(st.volume) << ',' << fmt17(st.newton_residual) << ','
        << fmt17(st.cd_before) << ',' << fmt17(st.cd_after) << ',' << fmt17(st.min_face_quality)
        << ',' << fmt17(wall_ms) << '\n';
    log.flush();
    if (have_prev && reg != PW_REG_OFF && st.energy > prev_energy * 1.005)
      std::cerr << "warning: energy rose more than 0.5% at step " << st.step
                << " (regularization active)\n";
    prev_energy = st.energy;
    have_prev = true;
    if (cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0 && k != cfg.steps)
      if (!snapshot(k)) std::cerr << "warning: snapshot failed: " << pw_last_error() << "\n";
  }
  const bool ok = snapshot(cfg.steps);
  pw_flow_free(flow);
  if (!ok) return fail(pw_last_error(), kExitStep);
  return 0;
}

int cmd_regularize(const std::string& input, const std::string& output, const std::string& reg,
                   double epsilon) {
  pw_reg_mode mode;
  if (!reg_mode_of(reg, mode) || mode == PW_REG_OFF)
    return fail("regularize: reg must be linear or nonlinear", kExitConfig);
  pw_mesh* mesh = nullptr;
  if (pw_mesh_load(input.c_str(), &mesh) != PW_OK) return fail(pw_last_error(), kExitConfig);
  pw_mesh* out = nullptr;
  double cd0 = 0.0, cd1 = 0.0;
  if (pw_regularize(mesh, mode, epsilon, &out, &cd0, &cd1) != PW_OK) {
    pw_mesh_free(mesh);
    return fail(pw_last_error(), kExitStep);
  }
  pw_mesh_free(mesh);
  const bool saved = pw_mesh_save(out, output.c_str()) == PW_OK;
  pw_mesh_free(out);
  if (!saved) return fail(pw_last_error(), kExitConfig);
  std::cout << "conformal distortion: " << fmt17(cd0) << " -> " << fmt17(cd1) << "\n";
  return 0;
}

int cmd_info(const std::string& input) {
  pw_mesh* mesh = nullptr;
  if (pw_mesh_load(input.c_str(), &mesh) != PW_OK) return fail(pw_last_error(), kExitConfig);
  pw_mesh_info info{};
  if (pw_mesh_get_info(mesh, &info) != PW_OK) {
    pw_mesh_free(mesh);
    return fail(pw_last_error(), kExitConfig);
  }
  std::cout << "vertices:          " << pw_mesh_vertex_count(mesh) << "\n"
            << "faces:             " << pw_mesh_face_count(mesh) << "\n"
            << "edges:             " << info.edge_count << "\n"
            << "closed:            " << (info.is_closed ? "yes" : "no") << "\n"
            << "oriented:          " << (info.is_oriented ? "yes" : "no") << "\n"
            << "boundary edges:    " << info.boundary_edge_count << "\n";
  if (info.is_closed) std::cout << "genus:             " << info.genus << "\n";
  std::cout << "area:              " << fmt17(info.area) << "\n";
  if (info.is_closed && info.is_oriented)
    std::cout << "volume:            " << fmt17(info.volume) << "\n";
  std::cout << "mean edge length:  " << fmt17(info.mean_edge_length) << "\n"
            << "min face quality:  " << fmt17(info.min_face_quality) << "\n";
  double energy = 0.0;
  if (pw_mesh_energy(mesh, 2, &energy) == PW_OK)
    std::cout << "willmore energy:   " << fmt17(energy) << "\n";
  pw_mesh_free(mesh);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained p-Willmore flow with conformal-penalty mesh regularization"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Evolve a mesh by p-Willmore flow");
  std::string config_path;
  RunConfig rc;
  // Flags override config-file values; remember which were given.
  run->add_option("--config", config_path, "key=value config file");
  auto* o_p = run->add_option("--p", rc.p, "flow exponent (0 = mean curvature flow)");
  auto* o_steps = run->add_option("--steps", rc.steps, "number of steps");
  auto* o_tau0 = run->add_option("--tau0", rc.tau0, "initial timestep");
  auto* o_scale = run->add_option("--scale", rc.scale, "timestep growth factor");
  auto* o_taumax = run->add_option("--tau-max", rc.tau_max, "timestep upper bound");
  auto* o_fa = run->add_flag("--fix-area", "preserve surface area");
  auto* o_fv = run->add_flag("--fix-volume", "preserve enclosed volume");
  auto* o_reg = run->add_option("--reg", rc.reg, "regularization: off, linear, nonlinear");
  auto* o_eps = run->add_option("--epsilon", rc.epsilon, "regularization penalty");
  auto* o_in = run->add_option("--input", rc.input, "input mesh (obj/ply)");
  auto* o_out = run->add_option("--out", rc.output_dir, "output directory");
  auto* o_log = run->add_option("--log", rc.log_path, "CSV log path");
  auto* o_snap = run->add_option("--snapshot-every", rc.snapshot_every, "snapshot interval");

  auto* reg_cmd = app.add_subcommand("regularize", "One conformal-penalty regularization pass");
  std::string reg_in, reg_out, reg_mode = "nonlinear";
  double reg_eps = 1e-5;
  reg_cmd->add_option("--input", reg_in, "input mesh")->required();
  reg_cmd->add_option("--out", reg_out, "output mesh")->required();
  reg_cmd->add_option("--reg", reg_mode, "linear or nonlinear");
  reg_cmd->add_option("--epsilon", reg_eps, "penalty");

  auto* info_cmd = app.add_subcommand("info", "Mesh diagnostics");
  std::string info_in;
  info_cmd->add_option("--input", info_in, "input mesh")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  if (run->parsed()) {
    RunConfig flags = rc;  // flag values captured before the file overwrites them
    if (!config_path.empty()) {
      std::string err;
      RunConfig from_file;
      if (!parse_config_file(config_path, from_file, err)) return fail(err, kExitConfig);
      RunConfig merged = from_file;
      if (*o_p) merged.p = flags.p;
      if (*o_steps) merged.steps = flags.steps;
      if (*o_tau0) merged.tau0 = flags.tau0;
      if (*o_scale) merged.scale = flags.scale;
      if (*o_taumax) merged.tau_max = flags.tau_max;
      if (*o_fa) merged.fix_area = true;
      if (*o_fv) merged.fix_volume = true;
      if (*o_reg) merged.reg = flags.reg;
      if (*o_eps) merged.epsilon = flags.epsilon;
      if (*o_in) merged.input = flags.input;
      if (*o_out) merged.output_dir = flags.output_dir;
      if (*o_log) merged.log_path = flags.log_path;
      if (*o_snap) merged.snapshot_every = flags.snapshot_every;
      rc = merged;
    } else {
      if (*o_fa) rc.fix_area = true;
      if (*o_fv) rc.fix_volume = true;
    }
    return cmd_run(rc);
  }
  if (reg_cmd->parsed()) return cmd_regularize(reg_in, reg_out, reg_mode, reg_eps);
  return cmd_info(info_in);
}
