#pragma once

#include <array>
#include <stdexcept>
#include <vector>

namespace pwf {

// Quadrature on the reference triangle {x,y >= 0, x+y <= 1}, stored as
// barycentric triples. Weights sum to 1; a surface integral over a face is
//   sum_q w_q f(q) * sqrt_det_g(q) / 2.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;  // (l0, l1, l2)
  std::vector<double> weights;
  int degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

// Rule exact for all bivariate polynomials of total degree <= degree.
// Degrees 1 and 2 use the classic centroid / 3-point rules; higher degrees
// use a collapsed Gauss-Legendre product, which keeps every weight positive.
QuadratureRule quadrature_rule(int degree);

}  // namespace pwf
