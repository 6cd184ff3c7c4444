#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "smallmath.hpp"

namespace pwf {

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Indexed triangle surface. Faces are counterclockwise when seen from
// outside, so cross(p1-p0, p2-p0) points along the outward normal.
// Immutable by convention: the flow produces new meshes instead of
// editing positions in place.
struct Mesh {
  std::vector<Vec3d> vertices;
  std::vector<std::array<int, 3>> faces;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }
};

struct MeshDiagnostics {
  bool is_closed = false;
  bool is_oriented = false;
  double min_face_quality = 0.0;  // inradius / circumradius
  int genus = 0;                  // valid when closed
  int boundary_edge_count = 0;
  int edge_count = 0;
};

// inradius/circumradius below this flags a degenerate face.
inline constexpr double kDegenerateQuality = 1e-8;

Mesh load_mesh(const std::string& path, std::vector<std::string>* warnings = nullptr);
void save_mesh(const Mesh& m, const std::string& path);

MeshDiagnostics validate_mesh(const Mesh& m);

// Number of incident faces per vertex (m_i of the reference-angle scheme).
std::vector<int> vertex_valences(const Mesh& m);

double mean_edge_length(const Mesh& m);

// Throws MeshError unless the mesh is closed, consistently oriented and
// free of degenerate faces. Flow and regularization entry points call this.
void require_flowable(const Mesh& m);

}  // namespace pwf
