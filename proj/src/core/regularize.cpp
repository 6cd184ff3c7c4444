#include "regularize.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace pwf {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTieTol = 1e-12;  // relative, max-angle detection

double corner_angle(const Vec3d& apex, const Vec3d& b, const Vec3d& c) {
  const Vec3d e1 = b - apex, e2 = c - apex;
  return std::atan2(norm(cross(e1, e2)), dot(e1, e2));
}

void check_ref_spd(const FaceMetric& g) {
  if (!(g.a11 > 0.0) || !(g.det() > 0.0))
    throw std::invalid_argument("reference metric not SPD");
}

template <class T>
std::array<Vec3<T>, 2> conformal_Q_t(const Vec3<T>& X1, const Vec3<T>& X2, const Vec3d& N,
                                     const FaceMetric& ref) {
  check_ref_spd(ref);
  const double sg = std::sqrt(ref.det());
  const Met2d gi = ref.inverse();
  // complex structure of the reference metric, J e_j = J^i_j e_i
  const double J11 = -ref.a12 / sg, J21 = ref.a11 / sg;
  const double J12 = -ref.a22 / sg, J22 = ref.a12 / sg;
  const Vec3<T> Nv = to_vec<T>(N);
  const Vec3<T> Z1 = J11 * X1 + J21 * X2 - cross(Nv, X1);
  const Vec3<T> Z2 = J12 * X1 + J22 * X2 - cross(Nv, X2);
  const Vec3<T> P1 = gi.a11 * Z1 + gi.a12 * Z2;
  const Vec3<T> P2 = gi.a12 * Z1 + gi.a22 * Z2;
  const double s = sg / 4.0;
  return {s * (J11 * P1 + J12 * P2 + cross(Nv, P1)),
          s * (J21 * P1 + J22 * P2 + cross(Nv, P2))};
}

}  // namespace

void RegularizeConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("regularize: epsilon must be positive");
  if (newton_iters < 1) throw std::invalid_argument("regularize: newton_iters must be >= 1");
}

ReferenceAngles reference_angles(const Mesh& m) {
  const std::vector<int> valence = vertex_valences(m);
  ReferenceAngles out(m.face_count());
  for (int f = 0; f < m.face_count(); ++f) {
    const auto& t = m.faces[f];
    std::array<double, 3> a;
    for (int i = 0; i < 3; ++i) {
      a[i] = corner_angle(m.vertices[t[i]], m.vertices[t[(i + 1) % 3]], m.vertices[t[(i + 2) % 3]]);
      if (!(a[i] > 0.0) || !(a[i] < kPi))
        throw MeshError("degenerate face " + std::to_string(f) + " in reference angle generation");
      a[i] /= valence[t[i]];
    }
    int imax = 0;
    for (int i = 1; i < 3; ++i)
      if (a[i] > a[imax]) imax = i;
    bool unique_max = true;
    for (int i = 0; i < 3; ++i)
      if (i != imax && a[imax] - a[i] <= kTieTol * a[imax]) unique_max = false;
    if (unique_max) {
      const double rest = a[(imax + 1) % 3] + a[(imax + 2) % 3];
      const double scale = (kPi - a[imax]) / rest;
      a[(imax + 1) % 3] *= scale;
      a[(imax + 2) % 3] *= scale;
    } else {
      const double scale = kPi / (a[0] + a[1] + a[2]);
      for (double& x : a) x *= scale;
    }
    out[f] = a;
  }
  return out;
}

std::vector<FaceMetric> reference_metrics(const Mesh& m, const ReferenceAngles& angles) {
  if (static_cast<int>(angles.size()) != m.face_count())
    throw std::invalid_argument("reference_metrics: one angle triple per face required");
  std::vector<FaceMetric> out(m.face_count());
  for (int f = 0; f < m.face_count(); ++f) {
    const auto& a = angles[f];
    const double sum = a[0] + a[1] + a[2];
    if (!(a[0] > 0.0) || !(a[1] > 0.0) || !(a[2] > 0.0) || std::abs(sum - kPi) > 1e-12)
      throw std::invalid_argument("reference_metrics: invalid angle triple at face " +
                                  std::to_string(f));
    const auto& t = m.faces[f];
    const double area =
        0.5 * norm(cross(m.vertices[t[1]] - m.vertices[t[0]], m.vertices[t[2]] - m.vertices[t[0]]));
    const double s0 = std::sin(a[0]), s1 = std::sin(a[1]), s2 = std::sin(a[2]);
    // squared diameter of the circumscribed circle, fixed by the area
    const double k2 = 2.0 * area / (s0 * s1 * s2);
    out[f] = {k2 * s2 * s2, k2 * s1 * s2 * std::cos(a[0]), k2 * s1 * s1};
  }
  return out;
}

std::array<Vec3d, 2> conformal_Q(const Vec3d& X1, const Vec3d& X2, const Vec3d& N,
                                 const FaceMetric& ref) {
  return conformal_Q_t<double>(X1, X2, N, ref);
}

RegularizeResult regularize_step(const Mesh& m, const ReferenceAngles& angles,
                                 const RegularizeConfig& cfg) {
  cfg.validate();
  require_flowable(m);
  const std::vector<FaceMetric> ref = reference_metrics(m, angles);
  RegularizeResult res;
  res.cd_before = conformal_distortion(m, ref);
  if (cfg.mode == RegularizeConfig::Mode::off) {
    res.mesh = m;
    res.cd_after = res.cd_before;
    res.accepted = true;
    return res;
  }

  constexpr int kLanes = 12;  // 9 displaced positions + 3 multipliers
  using D = Dual<kLanes>;
  const bool nonlinear = cfg.mode == RegularizeConfig::Mode::nonlinear;
  const int V = m.vertex_count();
  const int off_rho = 3 * V;
  const int ndof = 4 * V;
  const QuadratureRule qr = quadrature_rule(2);

  Eigen::VectorXd trial = Eigen::VectorXd::Zero(ndof);
  for (int i = 0; i < V; ++i)
    for (int c = 0; c < 3; ++c) trial[3 * i + c] = m.vertices[i][c];

  struct Assembled {
    Eigen::VectorXd R;
    std::vector<Eigen::Triplet<double>> jac;
  };
  auto assemble = [&](const Eigen::VectorXd& x, bool want_jac) {
    Assembled out;
    out.R = Eigen::VectorXd::Zero(ndof);
    {
      for (int f = 0; f < m.face_count(); ++f) {
        const auto& t = m.faces[f];
        const ElementMetric em = element_metric(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]);
        const double w_area = 0.5 * em.sqrt_det_g;

        Vec3<D> uh[3];
        D rho[3];
        int lane_col[kLanes];
        for (int a = 0; a < 3; ++a) {
          for (int c = 0; c < 3; ++c) {
            uh[a][c] = D::seeded(x[3 * t[a] + c], 3 * a + c);
            lane_col[3 * a + c] = 3 * t[a] + c;
          }
          rho[a] = D::seeded(x[off_rho + t[a]], 9 + a);
          lane_col[9 + a] = off_rho + t[a];
        }

        const Vec3<D> Xh1 = uh[1] - uh[0], Xh2 = uh[2] - uh[0];
        Vec3<D> Ntil;
        if (nonlinear) {
          const Vec3<D> c = cross(Xh1, Xh2);
          const D inv_n = D(1.0) / norm(c);
          Ntil = 0.5 * (to_vec<D>(em.normal) + inv_n * c);
        } else {
          Ntil = to_vec<D>(em.normal);
        }
        const auto Q = conformal_Q_t<D>(Xh1, Xh2, em.normal, ref[f]);

        D r_u[3][3]{}, r_rho[3]{};
        for (int a = 0; a < 3; ++a)
          for (int c = 0; c < 3; ++c)
            r_u[a][c] += kHatGrad[a][0] * Q[0][c] + kHatGrad[a][1] * Q[1][c];

        for (int q = 0; q < qr.size(); ++q) {
          const auto& bc = qr.points[q];
          const double wq = qr.weights[q];
          D rho_q = bc[0] * rho[0] + bc[1] * rho[1] + bc[2] * rho[2];
          Vec3<D> disp = bc[0] * (uh[0] - to_vec<D>(m.vertices[t[0]])) +
                         bc[1] * (uh[1] - to_vec<D>(m.vertices[t[1]])) +
                         bc[2] * (uh[2] - to_vec<D>(m.vertices[t[2]]));
          const D normal_part = dot(disp, Ntil);
          for (int a = 0; a < 3; ++a) {
            const double s = wq * bc[a] * w_area;
            for (int c = 0; c < 3; ++c) r_u[a][c] += s * rho_q * Ntil[c];
            r_rho[a] += s * (normal_part + cfg.epsilon * rho_q);
          }
        }

        auto scatter = [&](int row, const D& val) {
          out.R[row] += val.v;
          if (want_jac)
            for (int l = 0; l < kLanes; ++l)
              if (val.d[l] != 0.0) out.jac.emplace_back(row, lane_col[l], val.d[l]);
        };
        for (int a = 0; a < 3; ++a) {
          for (int c = 0; c < 3; ++c) scatter(3 * t[a] + c, r_u[a][c]);
          scatter(off_rho + t[a], r_rho[a]);
        }
      }
    }
    return out;
  };

  try {
    // one exact solve in linear mode; damped Newton with backtracking on the
    // residual norm otherwise, stopping early on machine-precision residuals
    const int iters = nonlinear ? cfg.newton_iters : 1;
    double rn = assemble(trial, false).R.norm();
    const double stop = 1e-13 * std::max(1.0, rn);
    for (int it = 0; it < iters && rn > stop; ++it) {
      Assembled sys = assemble(trial, true);
      Eigen::SparseMatrix<double> J(ndof, ndof);
      J.setFromTriplets(sys.jac.begin(), sys.jac.end());
      const Eigen::VectorXd dir = solve_sparse(J, -sys.R);
      double alpha = 1.0;
      Eigen::VectorXd cand = trial + dir;
      double cn = assemble(cand, false).R.norm();
      while (nonlinear && !(cn < rn * (1.0 - 1e-4 * alpha)) && alpha > 1e-6) {
        alpha *= 0.5;
        cand = trial + alpha * dir;
        cn = assemble(cand, false).R.norm();
      }
      trial = std::move(cand);
      rn = cn;
    }
  } catch (const std::exception& e) {
    res.mesh = m;
    res.cd_after = res.cd_before;
    res.warning = std::string("regularization solve failed, keeping mesh: ") + e.what();
    return res;
  }

  Mesh candidate;
  candidate.faces = m.faces;
  candidate.vertices.resize(V);
  for (int i = 0; i < V; ++i)
    candidate.vertices[i] = {trial[3 * i], trial[3 * i + 1], trial[3 * i + 2]};

  double cd_new;
  try {
    cd_new = conformal_distortion(candidate, ref);
  } catch (const std::exception&) {
    cd_new = std::numeric_limits<double>::infinity();
  }
  if (!std::isfinite(cd_new) || cd_new > res.cd_before * (1.0 + 1e-12)) {
    res.mesh = m;
    res.cd_after = res.cd_before;
    res.warning = "regularization increased conformal distortion, keeping mesh";
    return res;
  }
  res.mesh = std::move(candidate);
  res.rho.resize(V);
  for (int i = 0; i < V; ++i) res.rho[i] = trial[off_rho + i];
  res.cd_after = cd_new;
  res.accepted = true;
  return res;
}

RegularizeResult regularize_step(const Mesh& m, const RegularizeConfig& cfg) {
  return regularize_step(m, reference_angles(m), cfg);
}

}  // namespace pwf
