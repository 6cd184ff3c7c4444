#pragma once

#include "geometry.hpp"

namespace pwf {

// Per-face corner angles of the reference configuration, same index order
// as the face's vertices. Each triple is positive and sums to pi.
using ReferenceAngles = std::vector<std::array<double, 3>>;

struct RegularizeConfig {
  enum class Mode { off, linear, nonlinear };
  Mode mode = Mode::nonlinear;
  double epsilon = 1e-5;  // penalty on the multiplier
  int newton_iters = 2;   // nonlinear mode
  // Recompute reference angles from the evolving mesh each step instead of
  // holding the ones derived from the initial surface.
  bool recompute_angles = false;

  void validate() const;
};

struct RegularizeResult {
  Mesh mesh;
  std::vector<double> rho;  // nodal multiplier of the accepted solve
  double cd_before = 0.0;
  double cd_after = 0.0;
  bool accepted = false;   // false: distortion would have grown, input returned
  std::string warning;     // set when not accepted
};

// Valence-adjusted corner angles (Algorithm: divide each corner angle by the
// vertex valence, keep a unique per-face maximum and close the others to pi,
// or rescale all three proportionally on a tie).
ReferenceAngles reference_angles(const Mesh& m);

// First fundamental form of a planar triangle realizing the given angles
// with the same area as the current face, in the standard P1 frame.
std::vector<FaceMetric> reference_metrics(const Mesh& m, const ReferenceAngles& angles);

// Gradient density of the conformal distortion of one face: holding N fixed
// (the normal variation drops out of the distortion's first variation),
//   delta CD_face = <Q[0], delta X_1> + <Q[1], delta X_2>.
std::array<Vec3d, 2> conformal_Q(const Vec3d& X1, const Vec3d& X2, const Vec3d& N,
                                 const FaceMetric& ref);

// Penalized tangential reparametrization toward the reference angles.
// Solves for the displaced immersion and a normal multiplier rho; the result
// is kept only if the conformal distortion did not increase.
RegularizeResult regularize_step(const Mesh& m, const ReferenceAngles& angles,
                                 const RegularizeConfig& cfg);

// Standalone form: derives the reference angles from the mesh itself.
RegularizeResult regularize_step(const Mesh& m, const RegularizeConfig& cfg);

}  // namespace pwf
