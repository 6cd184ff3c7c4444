// Generates the canonical test shapes as OBJ/PLY files, with optional
// tangential jitter for regularization experiments.

#include <CLI11.hpp>
#include <iostream>
#include <random>

#include "core/shapes.hpp"
#include "core/geometry.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Test shape generator"};
  std::string shape = "icosphere", out;
  int subdiv = 3, major = 24, minor = 12;
  double radius = 1.0, a = 1.5, b = 1.0, c = 1.0, major_r = 1.0, minor_r = 0.35;
  double jitter = 0.0;
  unsigned seed = 1;
  app.add_option("--shape", shape, "tetrahedron, octahedron, icosphere, ellipsoid, torus");
  app.add_option("--out", out, "output path (.obj or .ply)")->required();
  app.add_option("--subdiv", subdiv, "icosphere/ellipsoid subdivisions");
  app.add_option("--radius", radius, "icosphere radius");
  app.add_option("--axes", a, "ellipsoid x semi-axis");
  app.add_option("--axes-b", b, "ellipsoid y semi-axis");
  app.add_option("--axes-c", c, "ellipsoid z semi-axis");
  app.add_option("--major", major, "torus major segments");
  app.add_option("--minor", minor, "torus minor segments");
  app.add_option("--major-radius", major_r, "torus major radius");
  app.add_option("--minor-radius", minor_r, "torus minor radius");
  app.add_option("--jitter", jitter, "vertex jitter as a fraction of mean edge length");
  app.add_option("--seed", seed, "jitter RNG seed");
  CLI11_PARSE(app, argc, argv);

  pwf::Mesh m;
  if (shape == "tetrahedron") m = pwf::make_tetrahedron(radius);
  else if (shape == "octahedron") m = pwf::make_octahedron(radius);
  else if (shape == "icosphere") m = pwf::make_icosphere(subdiv, radius);
  else if (shape == "ellipsoid") m = pwf::make_ellipsoid(subdiv, a, b, c);
  else if (shape == "torus") m = pwf::make_torus(major, minor, major_r, minor_r);
  else {
    std::cerr << "unknown shape '" << shape << "'\n";
    return 2;
  }

  if (jitter > 0.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double amp = jitter * pwf::mean_edge_length(m);
    for (auto& v : m.vertices) v += amp * pwf::Vec3d{u(rng), u(rng), u(rng)};
  }

  try {
    pwf::save_mesh(m, out);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}
