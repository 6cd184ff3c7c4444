#include "assembly.hpp"

#include <Eigen/SparseLU>

namespace pwf {

SparseSystem assemble(const std::vector<ElementBlock>& contributions, int n_dofs) {
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& blk : contributions) {
    for (size_t r = 0; r < blk.rows.size(); ++r) {
      for (size_t c = 0; c < blk.cols.size(); ++c) {
        const int gr = blk.rows[r], gc = blk.cols[c];
        if (gr < 0 || gr >= n_dofs || gc < 0 || gc >= n_dofs)
          throw std::out_of_range("assemble: dof index out of range");
        trips.emplace_back(gr, gc, blk.values(r, c));
      }
    }
  }
  SparseSystem sys;
  sys.matrix.resize(n_dofs, n_dofs);
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  sys.rhs = Eigen::VectorXd::Zero(n_dofs);
  return sys;
}

Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b) {
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw SolverError("solve_sparse: shape mismatch");
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SolverError("solve_sparse: singular matrix");
  Eigen::VectorXd x = lu.solve(b);
  const double scale = std::max(b.norm(), 1.0);
  double res = (A * x - b).norm() / scale;
  if (res > 1e-10) {
    x += lu.solve(b - A * x);  // one refinement pass
    res = (A * x - b).norm() / scale;
  }
  if (!x.allFinite() || res > 1e-10)
    throw SolverError("solve_sparse: residual " + std::to_string(res) + " exceeds contract");
  return x;
}

}  // namespace pwf
