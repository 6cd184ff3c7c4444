#pragma once

#include <vector>

#include "assembly.hpp"
#include "element.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"

namespace pwf {

// Coefficient vector of a P1 vector field (one 3-vector per vertex).
using NodalField = std::vector<Vec3d>;

// Per-face symmetric 2x2 reference metric in the standard P1 frame.
using FaceMetric = Met2d;

double surface_area(const Mesh& m);

// (1/3) int <u, N> dmu; requires a closed mesh, translation invariant.
double enclosed_volume(const Mesh& m);

// Weak mean curvature vector: M Y = -L u componentwise (Y = Delta_g u,
// pointing opposite the outward normal on convex bodies).
NodalField mean_curvature_vector(const Mesh& m, int quad_degree = 7);

// Weak projection of |Y|^{p-2} Y. For p = 1 the power is regularized as
// (|Y|^2 + delta^2)^{(p-2)/2} with delta = 1e-8 * 2/(mean edge length).
NodalField weighted_curvature(const Mesh& m, const NodalField& Y, int p, int quad_degree = 7);

// int |Y_h|^p dmu (the 2^p-scaled functional); p = 0 gives the surface area.
double p_willmore_energy(const Mesh& m, const NodalField& Y, int p, int quad_degree = 7);

// Conformal distortion of the immersion against per-face reference metrics:
// the integrand is the Cauchy-Riemann defect |dX J - N x dX|^2 counted once
// per complex direction, measured with the reference metric and area form.
double conformal_distortion(const Mesh& m, const std::vector<FaceMetric>& ref);

// Consistent mass matrix and stiffness matrix (scalar, vertex x vertex);
// vector equations apply them componentwise.
Eigen::SparseMatrix<double> mass_matrix(const Mesh& m, int quad_degree = 7);
Eigen::SparseMatrix<double> stiffness_matrix(const Mesh& m);

double p1_regularization_delta(const Mesh& m);

}  // namespace pwf
