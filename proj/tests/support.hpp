#pragma once

#include <random>

#include "core/geometry.hpp"
#include "core/shapes.hpp"

namespace pwf::testing {

// Deterministic vertex jitter, amplitude relative to the mean edge length.
inline Mesh jittered(const Mesh& in, double relative_amplitude, unsigned seed,
                     bool tangential_only = false) {
  Mesh m = in;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double amp = relative_amplitude * mean_edge_length(in);
  for (auto& v : m.vertices) {
    Vec3d d{u(rng), u(rng), u(rng)};
    if (tangential_only) {
      // For the round shapes the radial direction is the vertex normal.
      const Vec3d n = v / norm(v);
      d -= dot(d, n) * n;
    }
    v += amp * d;
  }
  return m;
}

inline double max_displacement(const Mesh& a, const Mesh& b) {
  double dmax = 0.0;
  for (int i = 0; i < a.vertex_count(); ++i)
    dmax = std::max(dmax, norm(a.vertices[i] - b.vertices[i]));
  return dmax;
}

inline double mean_vertex_radius(const Mesh& m) {
  double s = 0.0;
  for (const auto& v : m.vertices) s += norm(v);
  return s / m.vertex_count();
}

}  // namespace pwf::testing
