#include "../include/pwillmore.h"

#include <memory>
#include <string>

#include "core/flow.hpp"
#include "core/regularize.hpp"

namespace {

thread_local std::string g_last_error = "no error";

pwf::RegularizeConfig::Mode to_mode(pw_reg_mode m) {
  switch (m) {
    case PW_REG_LINEAR:
      return pwf::RegularizeConfig::Mode::linear;
    case PW_REG_NONLINEAR:
      return pwf::RegularizeConfig::Mode::nonlinear;
    default:
      return pwf::RegularizeConfig::Mode::off;
  }
}

template <class F>
pw_status guarded(F&& body) {
  try {
    return body();
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return PW_ERR_INVALID_ARGUMENT;
  } catch (const pwf::MeshError& e) {
    g_last_error = e.what();
    return PW_ERR_MESH;
  } catch (const pwf::FlowStepError& e) {
    g_last_error = e.what();
    return PW_ERR_STEP_FAILED;
  } catch (const pwf::SolverError& e) {
    g_last_error = e.what();
    return PW_ERR_SOLVER;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PW_ERR_IO;
  }
}

pw_status require(bool ok, const char* msg) {
  if (!ok) g_last_error = msg;
  return ok ? PW_OK : PW_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct pw_mesh {
  pwf::Mesh m;
};

struct pw_flow {
  pwf::FlowConfig cfg;
  pwf::RegularizeConfig reg;
  pwf::ReferenceAngles angles;  // from the initial mesh
  pwf::FlowState state;
  double cd_before = 0.0, cd_after = 0.0;
};

extern "C" {

const char* pw_last_error(void) { return g_last_error.c_str(); }

pw_status pw_mesh_load(const char* path, pw_mesh** out) {
  if (pw_status s = require(path && out, "pw_mesh_load: null argument")) return s;
  return guarded([&] {
    auto* h = new pw_mesh{pwf::load_mesh(path)};
    *out = h;
    return PW_OK;
  });
}

pw_status pw_mesh_save(const pw_mesh* m, const char* path) {
  if (pw_status s = require(m && path, "pw_mesh_save: null argument")) return s;
  return guarded([&] {
    pwf::save_mesh(m->m, path);
    return PW_OK;
  });
}

pw_status pw_mesh_create(const double* vertices, int vertex_count, const int* faces,
                         int face_count, pw_mesh** out) {
  if (pw_status s = require(vertices && faces && out && vertex_count > 0 && face_count > 0,
                            "pw_mesh_create: null or empty input"))
    return s;
  return guarded([&] {
    pwf::Mesh m;
    m.vertices.resize(vertex_count);
    for (int i = 0; i < vertex_count; ++i)
      m.vertices[i] = {vertices[3 * i], vertices[3 * i + 1], vertices[3 * i + 2]};
    m.faces.resize(face_count);
    for (int f = 0; f < face_count; ++f) {
      for (int k = 0; k < 3; ++k) {
        const int v = faces[3 * f + k];
        if (v < 0 || v >= vertex_count) throw pwf::MeshError("face index out of range");
        m.faces[f][k] = v;
      }
    }
    *out = new pw_mesh{std::move(m)};
    return PW_OK;
  });
}

void pw_mesh_free(pw_mesh* m) { delete m; }

int pw_mesh_vertex_count(const pw_mesh* m) { return m ? m->m.vertex_count() : 0; }
int pw_mesh_face_count(const pw_mesh* m) { return m ? m->m.face_count() : 0; }

pw_status pw_mesh_vertices(const pw_mesh* m, double* out) {
  if (pw_status s = require(m && out, "pw_mesh_vertices: null argument")) return s;
  for (int i = 0; i < m->m.vertex_count(); ++i)
    for (int c = 0; c < 3; ++c) out[3 * i + c] = m->m.vertices[i][c];
  return PW_OK;
}

pw_status pw_mesh_get_info(const pw_mesh* m, pw_mesh_info* out) {
  if (pw_status s = require(m && out, "pw_mesh_get_info: null argument")) return s;
  return guarded([&] {
    const pwf::MeshDiagnostics d = pwf::validate_mesh(m->m);
    pw_mesh_info info{};
    info.is_closed = d.is_closed;
    info.is_oriented = d.is_oriented;
    info.genus = d.genus;
    info.edge_count = d.edge_count;
    info.boundary_edge_count = d.boundary_edge_count;
    info.min_face_quality = d.min_face_quality;
    info.mean_edge_length = pwf::mean_edge_length(m->m);
    info.area = pwf::surface_area(m->m);
    info.volume = d.is_closed && d.is_oriented ? pwf::enclosed_volume(m->m) : 0.0;
    *out = info;
    return PW_OK;
  });
}

pw_status pw_mesh_energy(const pw_mesh* m, int p, double* out) {
  if (pw_status s = require(m && out && p >= 0, "pw_mesh_energy: bad argument")) return s;
  return guarded([&] {
    pwf::require_flowable(m->m);
    const pwf::NodalField Y = pwf::mean_curvature_vector(m->m);
    *out = pwf::p_willmore_energy(m->m, Y, p);
    return PW_OK;
  });
}

void pw_flow_config_init(pw_flow_config* cfg) {
  if (!cfg) return;
  cfg->p = 2;
  cfg->fix_area = 0;
  cfg->fix_volume = 0;
  cfg->tau0 = 1e-4;
  cfg->scale = 1.0;
  cfg->tau_max = 1e-4;
  cfg->quad_degree = 7;
  cfg->reg_mode = PW_REG_NONLINEAR;
  cfg->epsilon = 1e-5;
}

pw_status pw_flow_create(const pw_mesh* m, const pw_flow_config* cfg, pw_flow** out) {
  if (pw_status s = require(m && cfg && out, "pw_flow_create: null argument")) return s;
  return guarded([&] {
    auto f = std::make_unique<pw_flow>();
    f->cfg.p = cfg->p;
    f->cfg.fix_area = cfg->fix_area != 0;
    f->cfg.fix_volume = cfg->fix_volume != 0;
    f->cfg.tau0 = cfg->tau0;
    f->cfg.scale_s = cfg->scale;
    f->cfg.tau_max = cfg->tau_max;
    f->cfg.quad_degree = cfg->quad_degree;
    f->cfg.validate();
    f->reg.mode = to_mode(cfg->reg_mode);
    f->reg.epsilon = cfg->epsilon;
    if (f->reg.mode != pwf::RegularizeConfig::Mode::off) f->reg.validate();
    f->state = pwf::make_flow_state(m->m, f->cfg);
    if (f->reg.mode != pwf::RegularizeConfig::Mode::off) f->angles = pwf::reference_angles(m->m);
    *out = f.release();
    return PW_OK;
  });
}

void pw_flow_free(pw_flow* f) { delete f; }

pw_status pw_flow_step(pw_flow* f, pw_flow_stats* out) {
  if (pw_status s = require(f != nullptr, "pw_flow_step: null flow")) return s;
  return guarded([&] {
    const double t_prev = f->state.t;
    pwf::FlowState next = pwf::flow_step(f->state, f->cfg);
    if (f->reg.mode != pwf::RegularizeConfig::Mode::off) {
      const pwf::ReferenceAngles angles =
          f->reg.recompute_angles ? pwf::reference_angles(next.mesh) : f->angles;
      pwf::RegularizeResult rr = pwf::regularize_step(next.mesh, angles, f->reg);
      f->cd_before = rr.cd_before;
      f->cd_after = rr.cd_after;
      if (rr.accepted) {
        next.mesh = std::move(rr.mesh);
        pwf::init_curvature(next.mesh, f->cfg.p, f->cfg.quad_degree, next.Y, next.W);
      }
    } else {
      f->cd_before = f->cd_after = 0.0;
    }
    f->state = std::move(next);

    if (out) {
      pw_flow_stats st{};
      st.step = f->state.step;
      st.t = f->state.t;
      st.tau = f->state.t - t_prev;
      st.energy = pwf::p_willmore_energy(f->state.mesh, f->state.Y, f->cfg.p, f->cfg.quad_degree);
      st.area = pwf::surface_area(f->state.mesh);
      st.volume = pwf::enclosed_volume(f->state.mesh);
      st.newton_residual = f->state.newton_residual;
      st.cd_before = f->cd_before;
      st.cd_after = f->cd_after;
      st.min_face_quality = pwf::validate_mesh(f->state.mesh).min_face_quality;
      *out = st;
    }
    return PW_OK;
  });
}

pw_status pw_flow_current_mesh(const pw_flow* f, pw_mesh** out) {
  if (pw_status s = require(f && out, "pw_flow_current_mesh: null argument")) return s;
  *out = new pw_mesh{f->state.mesh};
  return PW_OK;
}

pw_status pw_regularize(const pw_mesh* m, pw_reg_mode mode, double epsilon, pw_mesh** out,
                        double* cd_before, double* cd_after) {
  if (pw_status s = require(m && out && mode != PW_REG_OFF, "pw_regularize: bad argument"))
    return s;
  return guarded([&] {
    pwf::RegularizeConfig cfg;
    cfg.mode = to_mode(mode);
    cfg.epsilon = epsilon;
    pwf::RegularizeResult rr = pwf::regularize_step(m->m, cfg);
    if (cd_before) *cd_before = rr.cd_before;
    if (cd_after) *cd_after = rr.cd_after;
    *out = new pw_mesh{std::move(rr.mesh)};
    return PW_OK;
  });
}

}  // extern "C"
