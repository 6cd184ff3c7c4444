#include "flow.hpp"

#include <cmath>
#include <type_traits>

namespace pwf {
namespace {

constexpr int kLanes = 29;  // 9 u + 9 Y + 9 W + lambda + gamma
using D = Dual<kLanes>;

// T is double for residual-only assembly and Dual<29> when the Jacobian is
// wanted; the dual lanes carry the element's local unknowns.
template <class T>
struct ElementInputs {
  Vec3d uo[3], Yo[3], Wo[3];  // previous step data
  Vec3<T> un[3], Yn[3], Wn[3];
  T lambda, gamma;
};

template <class T>
struct ElementResidual {
  T r_u[3][3];
  T r_Y[3][3];
  T r_W[3][3];
  T r_area;
  T r_vol;
};

struct KernelParams {
  int p;
  bool fix_area, fix_volume;
  double tau;
  double delta2;            // p=1 regularization, squared
  double degenerate_scale;  // lower bound on the central area element
  const QuadratureRule* qr;
};

// Residual of one element of the step system, differentiated through the
// central-surface metric by the dual lanes seeded in the inputs.
template <class T>
ElementResidual<T> element_residual(const ElementInputs<T>& in, const KernelParams& kp) {
  ElementResidual<T> out{};
  const int p = kp.p;

  Vec3<T> uc[3], Yc[3], Wc[3];
  for (int a = 0; a < 3; ++a) {
    uc[a] = 0.5 * (to_vec<T>(in.uo[a]) + in.un[a]);
    Yc[a] = 0.5 * (to_vec<T>(in.Yo[a]) + in.Yn[a]);
    if (p >= 1) Wc[a] = 0.5 * (to_vec<T>(in.Wo[a]) + in.Wn[a]);
  }

  const auto em = element_metric_t<T>(uc[0], uc[1], uc[2], kp.degenerate_scale);
  const T w_area = 0.5 * em.sqrt_det_g;
  const auto duc = p1_derivs(uc[0], uc[1], uc[2]);
  const auto du1 = p1_derivs(in.un[0], in.un[1], in.un[2]);

  // <d(.), d phi_a> pairing coefficients: c[a][j] = g^ij (d_i phi_a)
  T cpair[3][2];
  for (int a = 0; a < 3; ++a) {
    cpair[a][0] = em.g_inv.a11 * kHatGrad[a][0] + em.g_inv.a12 * kHatGrad[a][1];
    cpair[a][1] = em.g_inv.a12 * kHatGrad[a][0] + em.g_inv.a22 * kHatGrad[a][1];
  }

  // curvature equation: mass part by quadrature below, stiffness part here
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c)
      out.r_Y[a][c] += (cpair[a][0] * du1[0][c] + cpair[a][1] * du1[1][c]) * w_area;

  if (kp.fix_area && p >= 1) {
    Vec3<T> ddu[2];  // d(u^{k+1} - u^k)
    for (int j = 0; j < 2; ++j)
      ddu[j] = du1[j] - p1_derivs(to_vec<T>(in.uo[0]), to_vec<T>(in.uo[1]),
                                  to_vec<T>(in.uo[2]))[j];
    out.r_area = metric_pairing(em.g_inv, duc[0], duc[1], ddu[0], ddu[1]) * w_area;
  }

  // motion equation, element-constant pieces
  T div_tension;  // coefficient of <du_c, d phi> in the motion equation
  if (p >= 1) {
    const auto dWc = p1_derivs(Wc[0], Wc[1], Wc[2]);
    const auto dW1 = p1_derivs(in.Wn[0], in.Wn[1], in.Wn[2]);
    const T divW = metric_pairing(em.g_inv, duc[0], duc[1], dWc[0], dWc[1]);
    div_tension = in.gamma - double(p) * divW;

    // explicit term  p <D(phi) du^k, dW^k>  with the central metric.  D enters
    // as the symmetrized contraction of the metric variation against dW:
    //   sum_kl (d_k phi . du_l + du_k . d_l phi) S_kl,
    //   S = g^-1 C g^-1 sym,  C_ij = <du^k_i, dW^k_j>,
    // which is what the second variation of area actually produces for P1
    // elements (the ambient-matrix reading of D is off by a <dphi,dW> term
    // and misses half the symmetrization).
    const auto duo = p1_derivs(in.uo[0], in.uo[1], in.uo[2]);
    const auto dWo = p1_derivs(in.Wo[0], in.Wo[1], in.Wo[2]);
    const T gi[2][2] = {{em.g_inv.a11, em.g_inv.a12}, {em.g_inv.a12, em.g_inv.a22}};
    double C[2][2];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) C[i][j] = dot(duo[i], dWo[j]);
    T S[2][2];
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        T acc(0.0);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            acc += (gi[i][k] * gi[j][l] + gi[i][l] * gi[j][k]) * C[i][j];
        S[k][l] = acc;
      }
    for (int a = 0; a < 3; ++a) {
      for (int mcomp = 0; mcomp < 3; ++mcomp) {
        T acc(0.0);
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) acc += kHatGrad[a][k] * S[k][l] * duo[l][mcomp];
        out.r_u[a][mcomp] += double(p) * acc * w_area;
      }
    }
    // implicit term  -p <dW^{k+1}, d phi>
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c)
        out.r_u[a][c] -= double(p) * (cpair[a][0] * dW1[0][c] + cpair[a][1] * dW1[1][c]) * w_area;
  } else {
    // MCF: fully implicit area-gradient term  + <du^{k+1}, d phi>
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c)
        out.r_u[a][c] += (cpair[a][0] * du1[0][c] + cpair[a][1] * du1[1][c]) * w_area;
    div_tension = T(0.0);
  }

  // quadrature terms: mass pairings and the |Y|^p weight
  T yp_mean(0.0);  // quadrature average of |Y_c|^p
  const QuadratureRule& qr = *kp.qr;
  for (int q = 0; q < qr.size(); ++q) {
    const auto& bc = qr.points[q];
    const double wq = qr.weights[q];
    Vec3<T> Ycq = bc[0] * Yc[0] + bc[1] * Yc[1] + bc[2] * Yc[2];
    Vec3<T> dudt = (1.0 / kp.tau) *
                   (bc[0] * (in.un[0] - to_vec<T>(in.uo[0])) + bc[1] * (in.un[1] - to_vec<T>(in.uo[1])) +
                    bc[2] * (in.un[2] - to_vec<T>(in.uo[2])));
    for (int a = 0; a < 3; ++a) {
      const double s = wq * bc[a];
      for (int c = 0; c < 3; ++c) {
        out.r_Y[a][c] += s * Ycq[c] * w_area;
        out.r_u[a][c] += s * dudt[c] * w_area;
        out.r_u[a][c] += s * in.lambda * em.normal[c] * w_area;
      }
    }
    if (p >= 1) {
      const T s2 = norm2(Ycq) + kp.delta2;
      yp_mean += wq * pow(s2, 0.5 * p);
      const T wfac = (p == 2) ? T(1.0) : pow(s2, 0.5 * (p - 2));
      Vec3<T> Wcq = bc[0] * Wc[0] + bc[1] * Wc[1] + bc[2] * Wc[2];
      for (int a = 0; a < 3; ++a) {
        const double s = wq * bc[a];
        for (int c = 0; c < 3; ++c)
          out.r_W[a][c] += s * (Wcq[c] - wfac * Ycq[c]) * w_area;
      }
    }
    if (kp.fix_volume) {
      Vec3<T> diff = bc[0] * (in.un[0] - to_vec<T>(in.uo[0])) + bc[1] * (in.un[1] - to_vec<T>(in.uo[1])) +
                     bc[2] * (in.un[2] - to_vec<T>(in.uo[2]));
      out.r_vol += wq * dot(diff, em.normal) * w_area;
    }
  }

  if (p >= 1) div_tension += (1.0 - double(p)) * yp_mean;
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c)
      out.r_u[a][c] += div_tension * (cpair[a][0] * duc[0][c] + cpair[a][1] * duc[1][c]) * w_area;

  return out;
}

struct Assembled {
  Eigen::VectorXd R;
  std::vector<Eigen::Triplet<double>> jac;
  FlowResidualNorms norms;
};

template <bool WantJacobian>
Assembled assemble_impl(const FlowState& old, const Eigen::VectorXd& trial, const FlowConfig& cfg) {
  using T = std::conditional_t<WantJacobian, D, double>;
  cfg.validate();
  const Mesh& m = old.mesh;
  const FlowLayout lay = flow_layout(cfg, m.vertex_count());
  if (trial.size() != lay.ndof) throw std::invalid_argument("flow trial vector has wrong size");

  KernelParams kp;
  kp.p = cfg.p;
  kp.fix_area = cfg.fix_area && cfg.p >= 1;
  kp.fix_volume = cfg.fix_volume;
  kp.tau = old.tau > 0 ? old.tau : cfg.tau0;
  kp.delta2 = cfg.p == 1 ? std::pow(p1_regularization_delta(m), 2) : 0.0;
  const double mel = mean_edge_length(m);
  kp.degenerate_scale = 1e-12 * mel * mel;
  const QuadratureRule qr = quadrature_rule(cfg.quad_degree);
  kp.qr = &qr;

  Assembled out;
  out.R = Eigen::VectorXd::Zero(lay.ndof);

  // lane -> global column for the current element
  int lane_col[kLanes];

  auto unknown = [&](double v, int lane) {
    if constexpr (WantJacobian)
      return D::seeded(v, lane);
    else
      return v;
  };

  for (int f = 0; f < m.face_count(); ++f) {
    const auto& t = m.faces[f];
    ElementInputs<T> in;
    for (int a = 0; a < 3; ++a) {
      in.uo[a] = m.vertices[t[a]];
      in.Yo[a] = old.Y[t[a]];
      in.Wo[a] = lay.has_W() ? old.W[t[a]] : Vec3d{};
      for (int c = 0; c < 3; ++c) {
        const int lane_u = a * 3 + c, lane_Y = 9 + a * 3 + c, lane_W = 18 + a * 3 + c;
        in.un[a][c] = unknown(trial[lay.off_u + 3 * t[a] + c], lane_u);
        in.Yn[a][c] = unknown(trial[lay.off_Y + 3 * t[a] + c], lane_Y);
        if (lay.has_W()) in.Wn[a][c] = unknown(trial[lay.off_W + 3 * t[a] + c], lane_W);
        lane_col[lane_u] = lay.off_u + 3 * t[a] + c;
        lane_col[lane_Y] = lay.off_Y + 3 * t[a] + c;
        lane_col[lane_W] = lay.has_W() ? lay.off_W + 3 * t[a] + c : -1;
      }
    }
    in.lambda = kp.fix_volume ? unknown(trial[lay.off_lambda], 27) : T(0.0);
    in.gamma = kp.fix_area ? unknown(trial[lay.off_gamma], 28) : T(0.0);
    lane_col[27] = kp.fix_volume ? lay.off_lambda : -1;
    lane_col[28] = kp.fix_area ? lay.off_gamma : -1;

    const ElementResidual<T> er = element_residual(in, kp);

    auto scatter = [&](int row, const T& val) {
      out.R[row] += value(val);
      if constexpr (WantJacobian) {
        for (int l = 0; l < kLanes; ++l)
          if (val.d[l] != 0.0 && lane_col[l] >= 0) out.jac.emplace_back(row, lane_col[l], val.d[l]);
      }
    };

    for (int a = 0; a < 3; ++a) {
      for (int c = 0; c < 3; ++c) {
        scatter(lay.off_u + 3 * t[a] + c, er.r_u[a][c]);
        scatter(lay.off_Y + 3 * t[a] + c, er.r_Y[a][c]);
        if (lay.has_W()) scatter(lay.off_W + 3 * t[a] + c, er.r_W[a][c]);
      }
    }
    if (kp.fix_area) scatter(lay.off_gamma, er.r_area);
    if (kp.fix_volume) scatter(lay.off_lambda, er.r_vol);
  }

  const int V = m.vertex_count();
  out.norms.motion = out.R.segment(lay.off_u, 3 * V).norm();
  out.norms.curvature = out.R.segment(lay.off_Y, 3 * V).norm();
  if (lay.has_W()) out.norms.weighted = out.R.segment(lay.off_W, 3 * V).norm();
  if (kp.fix_volume) out.norms.volume_constraint = std::abs(out.R[lay.off_lambda]);
  if (kp.fix_area) out.norms.area_constraint = std::abs(out.R[lay.off_gamma]);
  out.norms.total = out.R.norm();
  return out;
}

}  // namespace

void FlowConfig::validate() const {
  if (p < 0) throw std::invalid_argument("flow: p must be >= 0");
  if (p == 0 && fix_area)
    throw std::invalid_argument("flow: area preservation is not meaningful for p = 0 (MCF)");
  if (!(tau0 > 0) || !(tau_max >= tau0)) throw std::invalid_argument("flow: need 0 < tau0 <= tau_max");
  if (scale_s < 1.0) throw std::invalid_argument("flow: scale factor must be >= 1");
  if (newton_iters < 1) throw std::invalid_argument("flow: newton_iters must be >= 1");
}

FlowLayout flow_layout(const FlowConfig& cfg, int vertex_count) {
  FlowLayout lay;
  lay.V = vertex_count;
  lay.p = cfg.p;
  lay.fix_area = cfg.fix_area && cfg.p >= 1;
  lay.fix_volume = cfg.fix_volume;
  int off = 0;
  lay.off_u = off;
  off += 3 * vertex_count;
  lay.off_Y = off;
  off += 3 * vertex_count;
  if (lay.has_W()) {
    lay.off_W = off;
    off += 3 * vertex_count;
  }
  if (lay.fix_volume) lay.off_lambda = off++;
  if (lay.fix_area) lay.off_gamma = off++;
  lay.ndof = off;
  return lay;
}

Eigen::VectorXd state_to_trial(const FlowState& s, const FlowConfig& cfg) {
  const FlowLayout lay = flow_layout(cfg, s.mesh.vertex_count());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(lay.ndof);
  for (int i = 0; i < lay.V; ++i) {
    for (int c = 0; c < 3; ++c) {
      v[lay.off_u + 3 * i + c] = s.mesh.vertices[i][c];
      v[lay.off_Y + 3 * i + c] = s.Y[i][c];
      if (lay.has_W()) v[lay.off_W + 3 * i + c] = s.W[i][c];
    }
  }
  if (lay.fix_volume) v[lay.off_lambda] = s.lambda;
  if (lay.fix_area) v[lay.off_gamma] = s.gamma;
  return v;
}

FlowResidual assemble_flow_residual(const FlowState& old, const Eigen::VectorXd& trial,
                                    const FlowConfig& cfg) {
  Assembled a = assemble_impl<false>(old, trial, cfg);
  return {std::move(a.R), a.norms};
}

Eigen::SparseMatrix<double> flow_jacobian(const FlowState& old, const Eigen::VectorXd& trial,
                                          const FlowConfig& cfg) {
  Assembled a = assemble_impl<true>(old, trial, cfg);
  const FlowLayout lay = flow_layout(cfg, old.mesh.vertex_count());
  Eigen::SparseMatrix<double> J(lay.ndof, lay.ndof);
  J.setFromTriplets(a.jac.begin(), a.jac.end());
  return J;
}

void init_curvature(const Mesh& m, int p, int quad_degree, NodalField& Y, NodalField& W) {
  Y = mean_curvature_vector(m, quad_degree);
  if (p >= 1)
    W = weighted_curvature(m, Y, p, quad_degree);
  else
    W.assign(m.vertex_count(), Vec3d{});
}

FlowState make_flow_state(const Mesh& m, const FlowConfig& cfg) {
  cfg.validate();
  require_flowable(m);
  FlowState s;
  s.mesh = m;
  init_curvature(m, cfg.p, cfg.quad_degree, s.Y, s.W);
  s.tau = cfg.tau0;
  return s;
}

FlowState flow_step(const FlowState& old, const FlowConfig& cfg) {
  cfg.validate();
  double tau = old.tau > 0 ? old.tau : cfg.tau0;
  std::string last_error;

  for (int attempt = 0; attempt < 2; ++attempt) {
    FlowState base = old;
    base.tau = tau;
    try {
      Eigen::VectorXd trial = state_to_trial(base, cfg);
      const FlowLayout lay = flow_layout(cfg, old.mesh.vertex_count());
      if (lay.fix_volume) trial[lay.off_lambda] = 0.0;
      if (lay.fix_area) trial[lay.off_gamma] = 0.0;

      const double initial = assemble_flow_residual(base, trial, cfg).norms.total;
      for (int it = 0; it < cfg.newton_iters; ++it) {
        Assembled sys = assemble_impl<true>(base, trial, cfg);
        Eigen::SparseMatrix<double> J(lay.ndof, lay.ndof);
        J.setFromTriplets(sys.jac.begin(), sys.jac.end());
        trial += solve_sparse(J, -sys.R);
      }
      const FlowResidual fin = assemble_flow_residual(base, trial, cfg);
      // Absolute floor: at a stationary configuration (e.g. a symmetric
      // polyhedron) both residuals are roundoff and their ratio is noise.
      const double floor = 1e-11 * std::sqrt(double(lay.ndof));
      if (!std::isfinite(fin.norms.total) ||
          (fin.norms.total > initial * (1.0 + 1e-12) && fin.norms.total > floor)) {
        last_error = "residual grew (" + std::to_string(initial) + " -> " +
                     std::to_string(fin.norms.total) + ")";
        tau *= 0.5;
        continue;
      }

      // A converged solve can still be garbage: past the extinction time the
      // implicit MCF system is solved by the surface collapsing to a point.
      // One step must not wipe out the surface.
      {
        Mesh probe;
        probe.faces = old.mesh.faces;
        probe.vertices.resize(old.mesh.vertex_count());
        for (int i = 0; i < old.mesh.vertex_count(); ++i)
          probe.vertices[i] = {trial[lay.off_u + 3 * i], trial[lay.off_u + 3 * i + 1],
                               trial[lay.off_u + 3 * i + 2]};
        const double a_new = surface_area(probe);
        const double a_old = surface_area(old.mesh);
        if (!(a_new > 1e-3 * a_old)) {
          last_error = "surface collapsed (area " + std::to_string(a_old) + " -> " +
                       std::to_string(a_new) + ")";
          tau *= 0.5;
          continue;
        }
      }

      FlowState next;
      next.mesh.faces = old.mesh.faces;
      next.mesh.vertices.resize(old.mesh.vertex_count());
      for (int i = 0; i < old.mesh.vertex_count(); ++i)
        next.mesh.vertices[i] = {trial[lay.off_u + 3 * i], trial[lay.off_u + 3 * i + 1],
                                 trial[lay.off_u + 3 * i + 2]};
      init_curvature(next.mesh, cfg.p, cfg.quad_degree, next.Y, next.W);
      next.lambda = lay.fix_volume ? trial[lay.off_lambda] : 0.0;
      next.gamma = lay.fix_area ? trial[lay.off_gamma] : 0.0;
      next.t = old.t + tau;
      next.tau = std::min(cfg.scale_s * tau, cfg.tau_max);
      next.step = old.step + 1;
      next.newton_residual = fin.norms.total;
      return next;
    } catch (const DegenerateElementError& e) {
      last_error = e.what();
      tau *= 0.5;
    } catch (const SolverError& e) {
      last_error = e.what();
      tau *= 0.5;
    }
  }
  throw FlowStepError("flow step failed after retry at step " + std::to_string(old.step) +
                      " (t=" + std::to_string(old.t) + ", tau=" + std::to_string(tau * 2) +
                      "): " + last_error);
}

}  // namespace pwf
