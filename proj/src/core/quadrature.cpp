#include "quadrature.hpp"

#include <cmath>

namespace pwf {
namespace {

// Gauss-Legendre nodes/weights on [0,1] by Newton iteration on P_n.
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));  // root estimate on [-1,1]
    double p0 = 0, p1 = 0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int k = 0; k < n; ++k) {  // recurrence up to P_n(t) in p0
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
      }
      const double dp = n * (t * p0 - p1) / (t * t - 1.0);
      const double dt = p0 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
    }
    const double dp = n * (t * p0 - p1) / (t * t - 1.0);
    x[i] = 0.5 * (t + 1.0);
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);  // already scaled for [0,1]
  }
}

}  // namespace

QuadratureRule quadrature_rule(int degree) {
  if (degree < 1 || degree > 10)
    throw std::invalid_argument("quadrature_rule: unsupported degree " + std::to_string(degree));
  QuadratureRule r;
  r.degree = degree;
  if (degree == 1) {
    r.points = {{1.0 / 3, 1.0 / 3, 1.0 / 3}};
    r.weights = {1.0};
    return r;
  }
  if (degree == 2) {
    r.points = {{2.0 / 3, 1.0 / 6, 1.0 / 6},
                {1.0 / 6, 2.0 / 3, 1.0 / 6},
                {1.0 / 6, 1.0 / 6, 2.0 / 3}};
    r.weights = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    return r;
  }
  // Duffy map (a,b) -> (x,y) = (a, b(1-a)) with Jacobian (1-a). The weight
  // factor (1-a) raises the polynomial degree in a by one.
  const int na = (degree + 3) / 2;  // exact for degree+1 in a
  const int nb = (degree + 2) / 2;  // exact for degree in b
  std::vector<double> xa, wa, xb, wb;
  gauss_legendre_01(na, xa, wa);
  gauss_legendre_01(nb, xb, wb);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      const double x = xa[i];
      const double y = xb[j] * (1.0 - xa[i]);
      r.points.push_back({1.0 - x - y, x, y});
      r.weights.push_back(2.0 * wa[i] * wb[j] * (1.0 - xa[i]));  // sums to 1
    }
  }
  return r;
}

}  // namespace pwf
