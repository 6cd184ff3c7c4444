#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <string>
#include <vector>

namespace pwf {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Row layout for stacked vector/scalar fields: all components of a field
// contiguous per vertex, fields stacked in declaration order.
class DofMap {
 public:
  int add_field(const std::string& name, int count, int components) {
    offsets_.push_back(ndof_);
    names_.push_back(name);
    components_.push_back(components);
    counts_.push_back(count);
    ndof_ += count * components;
    return static_cast<int>(offsets_.size()) - 1;
  }
  int index(int field, int entity, int component = 0) const {
    return offsets_[field] + entity * components_[field] + component;
  }
  int field_offset(int field) const { return offsets_[field]; }
  int size() const { return ndof_; }

 private:
  std::vector<int> offsets_, components_, counts_;
  std::vector<std::string> names_;
  int ndof_ = 0;
};

struct SparseSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
};

struct ElementBlock {
  std::vector<int> rows;
  std::vector<int> cols;
  Eigen::MatrixXd values;  // rows.size() x cols.size()
};

// Standard FEM scatter: duplicate insertions are summed.
SparseSystem assemble(const std::vector<ElementBlock>& contributions, int n_dofs);

// Direct sparse solve with a hard residual contract:
// ||A x - b||_2 / max(||b||_2, 1) <= 1e-10, one refinement pass allowed.
Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b);

inline Eigen::VectorXd solve_sparse(const SparseSystem& sys) {
  return solve_sparse(sys.matrix, sys.rhs);
}

}  // namespace pwf
