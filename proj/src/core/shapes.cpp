#include "shapes.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace pwf {
namespace {

// Midpoint subdivision with shared-edge vertex reuse, projecting the new
// vertices back to the unit sphere.
Mesh subdivide_unit_sphere(const Mesh& in) {
  Mesh out;
  out.vertices = in.vertices;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec3d p = 0.5 * (out.vertices[a] + out.vertices[b]);
    p = p / norm(p);
    out.vertices.push_back(p);
    const int idx = out.vertex_count() - 1;
    midpoint.emplace(key, idx);
    return idx;
  };
  for (const auto& t : in.faces) {
    const int m01 = mid(t[0], t[1]), m12 = mid(t[1], t[2]), m02 = mid(t[0], t[2]);
    out.faces.push_back({t[0], m01, m02});
    out.faces.push_back({t[1], m12, m01});
    out.faces.push_back({t[2], m02, m12});
    out.faces.push_back({m01, m12, m02});
  }
  return out;
}

Mesh make_icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  Mesh m;
  m.vertices = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
                {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
                {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : m.vertices) v = v / norm(v);
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return m;
}

}  // namespace

Mesh make_tetrahedron(double scale) {
  Mesh m;
  m.vertices = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  for (auto& v : m.vertices) v = scale * v;
  m.faces = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
  return m;
}

Mesh make_octahedron(double scale) {
  Mesh m;
  m.vertices = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (auto& v : m.vertices) v = scale * v;
  m.faces = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  return m;
}

Mesh make_icosphere(int subdivisions, double radius) {
  Mesh m = make_icosahedron();
  for (int i = 0; i < subdivisions; ++i) m = subdivide_unit_sphere(m);
  for (auto& v : m.vertices) v = radius * v;
  return m;
}

Mesh make_ellipsoid(int subdivisions, double a, double b, double c) {
  Mesh m = make_icosphere(subdivisions, 1.0);
  for (auto& v : m.vertices) v = {a * v.x, b * v.y, c * v.z};
  return m;
}

Mesh make_torus(int major_segments, int minor_segments, double major_radius, double minor_radius) {
  Mesh m;
  const double tau = 2.0 * std::numbers::pi;
  for (int i = 0; i < major_segments; ++i) {
    const double u = tau * i / major_segments;
    for (int j = 0; j < minor_segments; ++j) {
      const double v = tau * j / minor_segments;
      const double r = major_radius + minor_radius * std::cos(v);
      m.vertices.push_back({r * std::cos(u), r * std::sin(u), minor_radius * std::sin(v)});
    }
  }
  auto idx = [&](int i, int j) { return (i % major_segments) * minor_segments + (j % minor_segments); };
  for (int i = 0; i < major_segments; ++i) {
    for (int j = 0; j < minor_segments; ++j) {
      const int a = idx(i, j), b = idx(i + 1, j), c = idx(i + 1, j + 1), d = idx(i, j + 1);
      m.faces.push_back({a, b, c});
      m.faces.push_back({a, c, d});
    }
  }
  return m;
}

}  // namespace pwf
