#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "core/mesh.hpp"
#include "core/shapes.hpp"
#include "support.hpp"

using namespace pwf;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("obj round trip preserves coordinates") {
  const Mesh m = make_icosphere(2);
  const std::string path = temp_path("roundtrip.obj");
  save_mesh(m, path);
  const Mesh back = load_mesh(path);
  REQUIRE(back.vertex_count() == m.vertex_count());
  REQUIRE(back.face_count() == m.face_count());
  CHECK(testing::max_displacement(m, back) == 0.0);  // %.17g is lossless for doubles
  CHECK(back.faces == m.faces);
  std::remove(path.c_str());
}

TEST_CASE("ply round trip preserves coordinates") {
  const Mesh m = make_tetrahedron(0.7);
  const std::string path = temp_path("roundtrip.ply");
  save_mesh(m, path);
  const Mesh back = load_mesh(path);
  REQUIRE(back.vertex_count() == 4);
  CHECK(testing::max_displacement(m, back) == 0.0);
  CHECK(back.faces == m.faces);
  std::remove(path.c_str());
}

TEST_CASE("obj parser accepts negative and slashed indices") {
  const std::string path = temp_path("slashed.obj");
  write_file(path,
             "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\n"
             "f 1/1/1 2/2/2 3/3/3\n"
             "f -4//1 -1 -2\n");
  const Mesh m = load_mesh(path);
  REQUIRE(m.face_count() == 2);
  CHECK(m.faces[0] == std::array<int, 3>{0, 1, 2});
  CHECK(m.faces[1] == std::array<int, 3>{0, 3, 2});
  std::remove(path.c_str());
}

TEST_CASE("quads are fan-triangulated with a warning") {
  const std::string path = temp_path("quad.obj");
  write_file(path, "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  std::vector<std::string> warnings;
  const Mesh m = load_mesh(path, &warnings);
  CHECK(m.face_count() == 2);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("quad") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("parser rejects malformed input") {
  const std::string path = temp_path("bad.obj");
  write_file(path, "v 0 0 0\nv 1 0 0\nf 1 2 7\n");
  CHECK_THROWS_AS(load_mesh(path), MeshError);
  write_file(path, "v 0 0\n");
  CHECK_THROWS_AS(load_mesh(path), MeshError);
  CHECK_THROWS_AS(load_mesh(temp_path("does_not_exist.obj")), MeshError);
  std::remove(path.c_str());
}

TEST_CASE("save refuses empty face list") {
  Mesh m;
  m.vertices = {{0, 0, 0}};
  CHECK_THROWS_AS(save_mesh(m, temp_path("empty.obj")), MeshError);
}

TEST_CASE("diagnostics of closed shapes") {
  for (const Mesh& m : {make_tetrahedron(), make_octahedron(), make_icosphere(2)}) {
    const MeshDiagnostics d = validate_mesh(m);
    CHECK(d.is_closed);
    CHECK(d.is_oriented);
    CHECK(d.genus == 0);
    CHECK(d.boundary_edge_count == 0);
    CHECK(d.min_face_quality > 0.3);
    // Euler sanity: V - E + F = 2
    CHECK(m.vertex_count() - d.edge_count + m.face_count() == 2);
  }
  const MeshDiagnostics torus = validate_mesh(make_torus(16, 8, 1.0, 0.3));
  CHECK(torus.is_closed);
  CHECK(torus.genus == 1);
}

TEST_CASE("open and misoriented meshes are detected") {
  Mesh open_mesh = make_octahedron();
  open_mesh.faces.pop_back();
  const MeshDiagnostics d = validate_mesh(open_mesh);
  CHECK(!d.is_closed);
  CHECK(d.boundary_edge_count == 3);
  CHECK_THROWS_AS(require_flowable(open_mesh), MeshError);

  Mesh flipped = make_octahedron();
  std::swap(flipped.faces[0][0], flipped.faces[0][1]);
  CHECK(!validate_mesh(flipped).is_oriented);
  CHECK_THROWS_AS(require_flowable(flipped), MeshError);

  Mesh degenerate = make_tetrahedron();
  degenerate.faces.push_back({0, 1, 0});
  CHECK_THROWS_AS(validate_mesh(degenerate), MeshError);
}

TEST_CASE("near-degenerate faces fail the quality gate") {
  Mesh sliver = make_tetrahedron();
  // Pull one vertex of a face almost onto the opposite edge.
  sliver.vertices.push_back(0.5 * (sliver.vertices[0] + sliver.vertices[1]) +
                            Vec3d{1e-12, 1e-12, 1e-12});
  sliver.faces.push_back({0, 1, 4});
  CHECK(validate_mesh(sliver).min_face_quality < kDegenerateQuality);
  CHECK_THROWS_AS(require_flowable(sliver), MeshError);
}

TEST_CASE("valences and edge statistics") {
  const std::vector<int> val = vertex_valences(make_octahedron());
  for (int v : val) CHECK(v == 4);
  CHECK(mean_edge_length(make_tetrahedron()) == doctest::Approx(2.0 * std::sqrt(2.0)));
}
