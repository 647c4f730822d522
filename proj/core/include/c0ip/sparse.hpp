#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <vector>

#include "c0ip/dofs.hpp"
#include "c0ip/mesh.hpp"

namespace c0ip {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

/**
 * Compressed-row matrix with a fixed sparsity pattern. Insertion sums into
 * existing entries; inserting outside the pattern is an error.
 */
class CsrMatrix {
 public:
  CsrMatrix() = default;
  /// Pattern given as sorted, duplicate-free column lists per row.
  CsrMatrix(int cols, const std::vector<std::vector<int>>& pattern);
  CsrMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx, std::vector<double> values);

  int rows() const { return static_cast<int>(row_ptr_.size()) - 1; }
  int cols() const { return cols_; }
  long nnz() const { return static_cast<long>(col_idx_.size()); }

  void add(int i, int j, double v) { values_[locate(i, j)] += v; }
  /// A[rows[a], cols[b]] += block(a, b); negative indices are skipped.
  void add_block(const int* row_ids, int nr, const int* col_ids, int nc, const Eigen::MatrixXd& block);
  /// Entry value, zero outside the pattern.
  double coeff(int i, int j) const;
  void set_zero();

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  double max_abs() const;
  /// max |A_ij - A_ji|.
  double asymmetry() const;
  Eigen::MatrixXd to_dense() const;
  /// Zero-copy view as an Eigen row-major sparse matrix.
  Eigen::Map<const SparseMatrix> view() const;

 private:
  long locate(int i, int j) const;

  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// Couplings of the interior penalty method: dofs sharing a cell or two cells sharing a face.
std::vector<std::vector<int>> ip_sparsity_pattern(const Mesh& mesh, const FaceTable& faces, const DofMap& dofs);

/// A x = b with prescribed values on the constrained dofs.
struct LinearSystem {
  CsrMatrix A;
  Eigen::VectorXd b;
  std::vector<char> constrained;
  Eigen::VectorXd constrained_values;  ///< full length, used where constrained
};

/// Symmetric elimination of the constrained dofs.
struct ReducedSystem {
  CsrMatrix A;
  Eigen::VectorXd b;
  std::vector<int> free_dofs;  ///< reduced index -> full index

  /// Full-length vector from the reduced solution and the prescribed values.
  Eigen::VectorXd expand(const Eigen::VectorXd& x, const LinearSystem& full) const;
};

ReducedSystem eliminate_constraints(const LinearSystem& sys);

/// Matrix Market coordinate format (general, real).
void write_matrix_market(std::ostream& os, const CsrMatrix& A);

}  // namespace c0ip
