#pragma once

#include <array>
#include <stdexcept>

#include "smallmath.hpp"

namespace pwf {

struct DegenerateElementError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// First fundamental form of the P1 parametrization X(x,y) = p0 + x*(p1-p0)
// + y*(p2-p0) over the reference triangle. Constant per element.
template <class T>
struct ElementMetricT {
  Met2<T> g;
  Met2<T> g_inv;
  T sqrt_det_g{};  // |X1 x X2|, twice the face area
  Vec3<T> normal;
  Vec3<T> t1, t2;  // X_1, X_2
};

using ElementMetric = ElementMetricT<double>;

template <class T>
ElementMetricT<T> element_metric_t(const Vec3<T>& p0, const Vec3<T>& p1, const Vec3<T>& p2,
                                   double degenerate_scale = 0.0) {
  ElementMetricT<T> em;
  em.t1 = p1 - p0;
  em.t2 = p2 - p0;
  em.g.a11 = dot(em.t1, em.t1);
  em.g.a12 = dot(em.t1, em.t2);
  em.g.a22 = dot(em.t2, em.t2);
  const Vec3<T> c = cross(em.t1, em.t2);
  em.sqrt_det_g = norm(c);
  if (!(value(em.sqrt_det_g) > degenerate_scale))
    throw DegenerateElementError("degenerate element (area element " +
                                 std::to_string(value(em.sqrt_det_g)) + ")");
  em.normal = {c.x / em.sqrt_det_g, c.y / em.sqrt_det_g, c.z / em.sqrt_det_g};
  em.g_inv = em.g.inverse();
  return em;
}

inline ElementMetric element_metric(const Vec3d& p0, const Vec3d& p1, const Vec3d& p2) {
  return element_metric_t<double>(p0, p1, p2);
}

// Reference-coordinate derivatives of the three hat functions.
inline constexpr double kHatGrad[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};

// Surface gradients of the hat functions: grad phi_a = g^ij (d_i phi_a) X_j.
// They are tangent and sum to zero.
template <class T>
std::array<Vec3<T>, 3> shape_gradients(const ElementMetricT<T>& em) {
  std::array<Vec3<T>, 3> grads;
  for (int a = 0; a < 3; ++a) {
    const T c1 = em.g_inv.a11 * kHatGrad[a][0] + em.g_inv.a12 * kHatGrad[a][1];
    const T c2 = em.g_inv.a12 * kHatGrad[a][0] + em.g_inv.a22 * kHatGrad[a][1];
    grads[a] = c1 * em.t1 + c2 * em.t2;
  }
  return grads;
}

// <df, dh>_g = g^ij <F_i, H_j> for element-constant coordinate derivatives.
template <class T>
T metric_pairing(const Met2<T>& g_inv, const Vec3<T>& f1, const Vec3<T>& f2, const Vec3<T>& h1,
                 const Vec3<T>& h2) {
  return g_inv.a11 * dot(f1, h1) + g_inv.a12 * (dot(f1, h2) + dot(f2, h1)) +
         g_inv.a22 * dot(f2, h2);
}

// Coordinate derivatives (f_1, f_2) of a P1 field with nodal values f[0..2].
template <class T>
std::array<Vec3<T>, 2> p1_derivs(const Vec3<T>& f0, const Vec3<T>& f1, const Vec3<T>& f2) {
  return {f1 - f0, f2 - f0};
}

}  // namespace pwf
