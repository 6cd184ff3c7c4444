#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "pwillmore.h"

namespace {

constexpr double kPi = 3.14159265358979323846;

struct MeshHandle {
  pw_mesh* m = nullptr;
  ~MeshHandle() { pw_mesh_free(m); }
};

// Octahedron as raw arrays.
const double kOctaVerts[18] = {1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1};
const int kOctaFaces[24] = {0, 2, 4, 2, 1, 4, 1, 3, 4, 3, 0, 4,
                            2, 0, 5, 1, 2, 5, 3, 1, 5, 0, 3, 5};

pw_mesh* make_octa() {
  pw_mesh* m = nullptr;
  REQUIRE(pw_mesh_create(kOctaVerts, 6, kOctaFaces, 8, &m) == PW_OK);
  return m;
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("mesh create, query, save, load round trip") {
  MeshHandle h{make_octa()};
  CHECK(pw_mesh_vertex_count(h.m) == 6);
  CHECK(pw_mesh_face_count(h.m) == 8);

  std::vector<double> verts(18, 0.0);
  REQUIRE(pw_mesh_vertices(h.m, verts.data()) == PW_OK);
  for (int i = 0; i < 18; ++i) CHECK(verts[i] == kOctaVerts[i]);

  pw_mesh_info info;
  REQUIRE(pw_mesh_get_info(h.m, &info) == PW_OK);
  CHECK(info.is_closed == 1);
  CHECK(info.is_oriented == 1);
  CHECK(info.genus == 0);
  CHECK(info.edge_count == 12);
  CHECK(info.boundary_edge_count == 0);
  CHECK(info.area == doctest::Approx(4.0 * std::sqrt(3.0)).epsilon(1e-12));
  CHECK(info.volume == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(info.mean_edge_length == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(info.min_face_quality > 0.4);

  for (const char* name : {"capi_octa.obj", "capi_octa.ply"}) {
    const auto path = temp_file(name);
    REQUIRE(pw_mesh_save(h.m, path.string().c_str()) == PW_OK);
    pw_mesh* loaded = nullptr;
    REQUIRE(pw_mesh_load(path.string().c_str(), &loaded) == PW_OK);
    MeshHandle h2{loaded};
    CHECK(pw_mesh_vertex_count(loaded) == 6);
    CHECK(pw_mesh_face_count(loaded) == 8);
    std::vector<double> v2(18, 0.0);
    REQUIRE(pw_mesh_vertices(loaded, v2.data()) == PW_OK);
    for (int i = 0; i < 18; ++i) CHECK(v2[i] == kOctaVerts[i]);
    std::filesystem::remove(path);
  }
}

TEST_CASE("invalid arguments are reported") {
  CHECK(pw_mesh_load(nullptr, nullptr) == PW_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(pw_last_error()) > 0);

  pw_mesh* out = nullptr;
  CHECK(pw_mesh_load("/nonexistent/definitely/missing.obj", &out) != PW_OK);
  CHECK(out == nullptr);
  CHECK(std::strlen(pw_last_error()) > 0);

  CHECK(pw_mesh_create(nullptr, 6, kOctaFaces, 8, &out) == PW_ERR_INVALID_ARGUMENT);
  CHECK(pw_mesh_create(kOctaVerts, 6, nullptr, 8, &out) == PW_ERR_INVALID_ARGUMENT);
  CHECK(pw_mesh_create(kOctaVerts, -1, kOctaFaces, 8, &out) == PW_ERR_INVALID_ARGUMENT);

  const int bad_faces[3] = {0, 1, 99};  // out-of-range index
  CHECK(pw_mesh_create(kOctaVerts, 6, bad_faces, 1, &out) == PW_ERR_MESH);
  CHECK(out == nullptr);

  MeshHandle h{make_octa()};
  CHECK(pw_mesh_vertices(h.m, nullptr) == PW_ERR_INVALID_ARGUMENT);
  CHECK(pw_mesh_get_info(nullptr, nullptr) == PW_ERR_INVALID_ARGUMENT);
  CHECK(pw_mesh_save(h.m, "/nonexistent/dir/out.obj") != PW_OK);

  double e = 0.0;
  CHECK(pw_mesh_energy(h.m, -1, &e) == PW_ERR_INVALID_ARGUMENT);
}

TEST_CASE("energy of the unit octahedron is sane") {
  MeshHandle h{make_octa()};
  double area = 0.0;
  REQUIRE(pw_mesh_energy(h.m, 0, &area) == PW_OK);
  CHECK(area == doctest::Approx(4.0 * std::sqrt(3.0)).epsilon(1e-12));

  double e2 = 0.0;
  REQUIRE(pw_mesh_energy(h.m, 2, &e2) == PW_OK);
  CHECK(e2 > 0.0);
  CHECK(std::isfinite(e2));
}

TEST_CASE("flow rejects bad configuration and open meshes") {
  MeshHandle h{make_octa()};
  pw_flow_config cfg;
  pw_flow_config_init(&cfg);
  CHECK(cfg.p == 2);
  CHECK(cfg.tau0 == 1e-4);
  CHECK(cfg.reg_mode == PW_REG_NONLINEAR);

  pw_flow* f = nullptr;
  pw_flow_config bad = cfg;
  bad.p = 0;
  bad.fix_area = 1;
  CHECK(pw_flow_create(h.m, &bad, &f) == PW_ERR_INVALID_ARGUMENT);
  CHECK(f == nullptr);

  bad = cfg;
  bad.tau0 = -1.0;
  CHECK(pw_flow_create(h.m, &bad, &f) == PW_ERR_INVALID_ARGUMENT);

  // single triangle: not closed
  const double tri_v[9] = {0, 0, 0, 1, 0, 0, 0, 1, 0};
  const int tri_f[3] = {0, 1, 2};
  pw_mesh* tri = nullptr;
  REQUIRE(pw_mesh_create(tri_v, 3, tri_f, 1, &tri) == PW_OK);
  MeshHandle ht{tri};
  CHECK(pw_flow_create(tri, &cfg, &f) == PW_ERR_MESH);
}

TEST_CASE("flow steps report consistent stats") {
  // A stretched sphere under volume-constrained Willmore flow.
  const double a = 1.3;
  std::vector<double> verts(std::begin(kOctaVerts), std::end(kOctaVerts));
  for (int i = 0; i < 6; ++i) verts[3 * i] *= a;
  pw_mesh* m0 = nullptr;
  REQUIRE(pw_mesh_create(verts.data(), 6, kOctaFaces, 8, &m0) == PW_OK);
  MeshHandle h{m0};

  pw_flow_config cfg;
  pw_flow_config_init(&cfg);
  cfg.p = 2;
  cfg.fix_volume = 1;
  cfg.tau0 = cfg.tau_max = 1e-4;
  cfg.quad_degree = 4;
  cfg.reg_mode = PW_REG_OFF;

  pw_flow* f = nullptr;
  REQUIRE(pw_flow_create(h.m, &cfg, &f) == PW_OK);

  pw_mesh_info info0;
  REQUIRE(pw_mesh_get_info(h.m, &info0) == PW_OK);

  double t_prev = 0.0;
  for (int k = 1; k <= 3; ++k) {
    pw_flow_stats st;
    REQUIRE(pw_flow_step(f, &st) == PW_OK);
    CHECK(st.step == k);
    CHECK(st.t > t_prev);
    CHECK(st.tau == doctest::Approx(st.t - t_prev).epsilon(1e-12));
    CHECK(std::isfinite(st.energy));
    CHECK(st.area > 0.0);
    CHECK(std::abs(st.volume - info0.volume) / info0.volume < 1e-5);
    CHECK(st.min_face_quality > 0.0);
    CHECK(st.cd_before == 0.0);  // regularization off
    CHECK(st.cd_after == 0.0);
    t_prev = st.t;
  }

  pw_mesh* cur = nullptr;
  REQUIRE(pw_flow_current_mesh(f, &cur) == PW_OK);
  MeshHandle hc{cur};
  CHECK(pw_mesh_vertex_count(cur) == 6);
  pw_mesh_info info1;
  REQUIRE(pw_mesh_get_info(cur, &info1) == PW_OK);
  CHECK(std::abs(info1.volume - info0.volume) / info0.volume < 1e-5);

  pw_flow_free(f);
}

TEST_CASE("flow with regularization reports distortion") {
  pw_flow_config cfg;
  pw_flow_config_init(&cfg);
  cfg.quad_degree = 4;
  cfg.tau0 = cfg.tau_max = 1e-5;

  MeshHandle h{make_octa()};
  pw_flow* f = nullptr;
  REQUIRE(pw_flow_create(h.m, &cfg, &f) == PW_OK);
  pw_flow_stats st;
  REQUIRE(pw_flow_step(f, &st) == PW_OK);
  CHECK(st.cd_before >= 0.0);
  CHECK(st.cd_after <= st.cd_before * (1.0 + 1e-12) + 1e-18);
  pw_flow_free(f);
}

TEST_CASE("standalone regularization") {
  MeshHandle h{make_octa()};
  pw_mesh* out = nullptr;
  double cb = -1.0, ca = -1.0;
  REQUIRE(pw_regularize(h.m, PW_REG_NONLINEAR, 1e-5, &out, &cb, &ca) == PW_OK);
  MeshHandle ho{out};
  CHECK(pw_mesh_vertex_count(out) == 6);
  CHECK(cb >= 0.0);
  CHECK(ca <= cb * (1.0 + 1e-12) + 1e-18);

  pw_mesh* out2 = nullptr;
  CHECK(pw_regularize(h.m, PW_REG_NONLINEAR, 0.0, &out2, nullptr, nullptr) ==
        PW_ERR_INVALID_ARGUMENT);
  CHECK(pw_regularize(nullptr, PW_REG_NONLINEAR, 1e-5, &out2, nullptr, nullptr) ==
        PW_ERR_INVALID_ARGUMENT);
}
