#pragma once

#include "mesh.hpp"

namespace pwf {

// Canonical closed test surfaces, outward-oriented.
Mesh make_tetrahedron(double scale = 1.0);
Mesh make_octahedron(double scale = 1.0);
Mesh make_icosphere(int subdivisions, double radius = 1.0);
Mesh make_ellipsoid(int subdivisions, double a, double b, double c);
Mesh make_torus(int major_segments, int minor_segments, double major_radius, double minor_radius);

}  // namespace pwf
