#include "geometry.hpp"

#include <Eigen/SparseLU>
#include <cmath>

namespace pwf {
namespace {

ElementMetric face_metric(const Mesh& m, int f) {
  const auto& t = m.faces[f];
  return element_metric(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]);
}

// Solve A X = B column by column under the 1e-10 residual contract.
Eigen::MatrixXd solve_columns(const Eigen::SparseMatrix<double>& A, const Eigen::MatrixXd& B) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SolverError("singular system matrix");
  Eigen::MatrixXd X(B.rows(), B.cols());
  for (int c = 0; c < B.cols(); ++c) {
    Eigen::VectorXd x = lu.solve(B.col(c));
    const double scale = std::max(B.col(c).norm(), 1.0);
    if ((A * x - B.col(c)).norm() / scale > 1e-10) x += lu.solve(B.col(c) - A * x);
    if ((A * x - B.col(c)).norm() / scale > 1e-10)
      throw SolverError("linear solve residual exceeds contract");
    X.col(c) = x;
  }
  return X;
}

}  // namespace

double surface_area(const Mesh& m) {
  double area = 0.0;
  for (int f = 0; f < m.face_count(); ++f) area += 0.5 * face_metric(m, f).sqrt_det_g;
  return area;
}

double enclosed_volume(const Mesh& m) {
  if (!validate_mesh(m).is_closed) throw MeshError("enclosed_volume: mesh not closed");
  double vol3 = 0.0;
  for (int f = 0; f < m.face_count(); ++f) {
    const auto& t = m.faces[f];
    const ElementMetric em = face_metric(m, f);
    const Vec3d centroid =
        (m.vertices[t[0]] + m.vertices[t[1]] + m.vertices[t[2]]) / 3.0;
    vol3 += dot(centroid, em.normal) * 0.5 * em.sqrt_det_g;  // exact for P1
  }
  return vol3 / 3.0;
}

Eigen::SparseMatrix<double> mass_matrix(const Mesh& m, int quad_degree) {
  const QuadratureRule qr = quadrature_rule(quad_degree);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.face_count() * 9);
  for (int f = 0; f < m.face_count(); ++f) {
    const auto& t = m.faces[f];
    const double w_area = 0.5 * face_metric(m, f).sqrt_det_g;
    for (int q = 0; q < qr.size(); ++q) {
      const auto& bc = qr.points[q];
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          trips.emplace_back(t[a], t[b], qr.weights[q] * bc[a] * bc[b] * w_area);
    }
  }
  Eigen::SparseMatrix<double> M(m.vertex_count(), m.vertex_count());
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

Eigen::SparseMatrix<double> stiffness_matrix(const Mesh& m) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.face_count() * 9);
  for (int f = 0; f < m.face_count(); ++f) {
    const auto& t = m.faces[f];
    const ElementMetric em = face_metric(m, f);
    const double w_area = 0.5 * em.sqrt_det_g;
    const auto grads = shape_gradients(em);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        trips.emplace_back(t[a], t[b], dot(grads[a], grads[b]) * w_area);
  }
  Eigen::SparseMatrix<double> L(m.vertex_count(), m.vertex_count());
  L.setFromTriplets(trips.begin(), trips.end());
  return L;
}

NodalField mean_curvature_vector(const Mesh& m, int quad_degree) {
  const int V = m.vertex_count();
  const auto M = mass_matrix(m, quad_degree);
  const auto L = stiffness_matrix(m);
  Eigen::MatrixXd U(V, 3);
  for (int i = 0; i < V; ++i) {
    U(i, 0) = m.vertices[i].x;
    U(i, 1) = m.vertices[i].y;
    U(i, 2) = m.vertices[i].z;
  }
  const Eigen::MatrixXd Yc = solve_columns(M, -(L * U));
  NodalField Y(V);
  for (int i = 0; i < V; ++i) Y[i] = {Yc(i, 0), Yc(i, 1), Yc(i, 2)};
  return Y;
}

double p1_regularization_delta(const Mesh& m) {
  return 1e-8 * 2.0 / mean_edge_length(m);
}

NodalField weighted_curvature(const Mesh& m, const NodalField& Y, int p, int quad_degree) {
  if (p < 1) throw std::invalid_argument("weighted_curvature: p must be >= 1");
  const int V = m.vertex_count();
  const QuadratureRule qr = quadrature_rule(quad_degree);
  const double delta2 = p < 2 ? std::pow(p1_regularization_delta(m), 2) : 0.0;
  const double expo = 0.5 * (p - 2);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(V, 3);
  for (int f = 0; f < m.face_count(); ++f) {
    const auto& t = m.faces[f];
    const double w_area = 0.5 * face_metric(m, f).sqrt_det_g;
    for (int q = 0; q < qr.size(); ++q) {
      const auto& bc = qr.points[q];
      const Vec3d Yq = bc[0] * Y[t[0]] + bc[1] * Y[t[1]] + bc[2] * Y[t[2]];
      const double fac = p == 2 ? 1.0 : std::pow(norm2(Yq) + delta2, expo);
      const Vec3d Wq = fac * Yq;
      for (int a = 0; a < 3; ++a) {
        const double s = qr.weights[q] * bc[a] * w_area;
        rhs(t[a], 0) += s * Wq.x;
        rhs(t[a], 1) += s * Wq.y;
        rhs(t[a], 2) += s * Wq.z;
      }
    }
  }
  const Eigen::MatrixXd Wc = solve_columns(mass_matrix(m, quad_degree), rhs);
  NodalField W(V);
  for (int i = 0; i < V; ++i) W[i] = {Wc(i, 0), Wc(i, 1), Wc(i, 2)};
  return W;
}

double p_willmore_energy(const Mesh& m, const NodalField& Y, int p, int quad_degree) {
  if (p < 0) throw std::invalid_argument("p_willmore_energy: p must be >= 0");
  const QuadratureRule qr = quadrature_rule(quad_degree);
  const double delta2 = (p == 1) ? std::pow(p1_regularization_delta(m), 2) : 0.0;
  double energy = 0.0;
  for (int f = 0; f < m.face_count(); ++f) {
    const auto& t = m.faces[f];
    const double w_area = 0.5 * face_metric(m, f).sqrt_det_g;
    for (int q = 0; q < qr.size(); ++q) {
      const auto& bc = qr.points[q];
      double fac = 1.0;
      if (p > 0) {
        const Vec3d Yq = bc[0] * Y[t[0]] + bc[1] * Y[t[1]] + bc[2] * Y[t[2]];
        fac = std::pow(norm2(Yq) + delta2, 0.5 * p);
      }
      energy += qr.weights[q] * fac * w_area;
    }
  }
  return energy;
}

double conformal_distortion(const Mesh& m, const std::vector<FaceMetric>& ref) {
  if (static_cast<int>(ref.size()) != m.face_count())
    throw std::invalid_argument("conformal_distortion: one reference metric per face required");
  double cd = 0.0;
  for (int f = 0; f < m.face_count(); ++f) {
    const FaceMetric& g = ref[f];
    if (!(g.a11 > 0.0) || !(g.det() > 0.0))
      throw std::invalid_argument("conformal_distortion: reference metric not SPD");
    const ElementMetric em = face_metric(m, f);
    const Met2d gi = g.inverse();
    const double sg = std::sqrt(g.det());
    // Complex structure of the reference metric: J e_j = J^i_j e_i.
    const double J11 = -g.a12 / sg, J21 = g.a11 / sg;
    const double J12 = -g.a22 / sg, J22 = g.a12 / sg;
    const Vec3d Z1 = J11 * em.t1 + J21 * em.t2 - cross(em.normal, em.t1);
    const Vec3d Z2 = J12 * em.t1 + J22 * em.t2 - cross(em.normal, em.t2);
    const double val = gi.a11 * norm2(Z1) + 2.0 * gi.a12 * dot(Z1, Z2) + gi.a22 * norm2(Z2);
    cd += 0.25 * val * 0.5 * sg;
  }
  return cd;
}

}  // namespace pwf
