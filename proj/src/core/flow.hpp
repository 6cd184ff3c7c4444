#pragma once

#include "geometry.hpp"

namespace pwf {

struct FlowStepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FlowConfig {
  int p = 2;
  bool fix_area = false;
  bool fix_volume = false;
  double tau0 = 1e-4;
  double scale_s = 1.0;  // tau^{k+1} = min(s * tau^k, tau_max)
  double tau_max = 1e-4;
  int newton_iters = 2;
  double residual_tol = 1e-8;
  int quad_degree = 7;

  void validate() const;
};

// Snapshot of the evolving surface between steps. Y and W are consistent
// with the mesh through the weak curvature solves at state creation.
struct FlowState {
  Mesh mesh;
  NodalField Y;
  NodalField W;
  double lambda = 0.0;  // volume multiplier
  double gamma = 0.0;   // area multiplier
  double t = 0.0;
  double tau = 0.0;
  int step = 0;
  double newton_residual = 0.0;
};

// Unknown ordering of the coupled step system: per-vertex components of u,
// then Y, then W (p >= 1), then the volume and area multipliers.
struct FlowLayout {
  int V = 0;
  int p = 2;
  bool fix_area = false, fix_volume = false;
  int off_u = 0, off_Y = 0, off_W = -1, off_lambda = -1, off_gamma = -1;
  int ndof = 0;

  bool has_W() const { return p >= 1; }
};

FlowLayout flow_layout(const FlowConfig& cfg, int vertex_count);

// Trial vector holding the previous state's fields and given multipliers.
Eigen::VectorXd state_to_trial(const FlowState& s, const FlowConfig& cfg);

struct FlowResidualNorms {
  double curvature = 0.0;
  double weighted = 0.0;
  double area_constraint = 0.0;
  double volume_constraint = 0.0;
  double motion = 0.0;
  double total = 0.0;
};

struct FlowResidual {
  Eigen::VectorXd R;
  FlowResidualNorms norms;
};

// Residual of the implicit step system at the given trial, assembled on the
// central surface (1/2)(u^k + u^{k+1}). tau is taken from `old`.
FlowResidual assemble_flow_residual(const FlowState& old, const Eigen::VectorXd& trial,
                                    const FlowConfig& cfg);

// Exact derivative of the residual with respect to the trial vector,
// including the motion of the central-surface metric and measure.
Eigen::SparseMatrix<double> flow_jacobian(const FlowState& old, const Eigen::VectorXd& trial,
                                          const FlowConfig& cfg);

// Weak curvature data for a fresh surface: Y from the mass/stiffness solve,
// W from the weighted projection (zero field for p = 0).
void init_curvature(const Mesh& m, int p, int quad_degree, NodalField& Y, NodalField& W);

FlowState make_flow_state(const Mesh& m, const FlowConfig& cfg);

// One accepted step: a fixed number of Newton iterations from the previous
// state with zero multipliers, then the tau schedule. A step whose residual
// grows or whose central surface degenerates is retried once at tau/2;
// a second rejection raises FlowStepError.
FlowState flow_step(const FlowState& old, const FlowConfig& cfg);

}  // namespace pwf
