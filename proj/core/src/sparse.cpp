#include "c0ip/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "c0ip/error.hpp"

namespace c0ip {

CsrMatrix::CsrMatrix(int cols, const std::vector<std::vector<int>>& pattern) : cols_(cols) {
  row_ptr_.assign(pattern.size() + 1, 0);
  size_t total = 0;
  for (size_t i = 0; i < pattern.size(); ++i) {
    total += pattern[i].size();
    if (total > static_cast<size_t>(std::numeric_limits<int>::max()))
      throw StructuralError("sparse pattern exceeds 32-bit index range");
    row_ptr_[i + 1] = static_cast<int>(total);
  }
  col_idx_.reserve(total);
  for (const auto& row : pattern) col_idx_.insert(col_idx_.end(), row.begin(), row.end());
  values_.assign(total, 0.0);
}

CsrMatrix::CsrMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                     std::vector<double> values)
    : cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values)) {
  if (static_cast<int>(row_ptr_.size()) != rows + 1) throw std::invalid_argument("CsrMatrix: bad row pointer size");
}

long CsrMatrix::locate(int i, int j) const {
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j)
    throw StructuralError("sparse insertion outside the pattern at (" + std::to_string(i) + ", " + std::to_string(j) +
                          ")");
  return it - col_idx_.begin();
}

void CsrMatrix::add_block(const int* row_ids, int nr, const int* col_ids, int nc, const Eigen::MatrixXd& block) {
  for (int a = 0; a < nr; ++a) {
    const int i = row_ids[a];
    if (i < 0) continue;
    for (int b = 0; b < nc; ++b) {
      const int j = col_ids[b];
      if (j < 0) continue;
      values_[locate(i, j)] += block(a, b);
    }
  }
}

double CsrMatrix::coeff(int i, int j) const {
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[it - col_idx_.begin()];
}

void CsrMatrix::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

Eigen::VectorXd CsrMatrix::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows());
  for (int i = 0; i < rows(); ++i) {
    double s = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
  return y;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double CsrMatrix::asymmetry() const {
  double worst = 0.0;
  for (int i = 0; i < rows(); ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const int j = col_idx_[k];
      if (j <= i) continue;
      worst = std::max(worst, std::abs(values_[k] - coeff(j, i)));
    }
  return worst;
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows(), cols_);
  for (int i = 0; i < rows(); ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) += values_[k];
  return d;
}

Eigen::Map<const SparseMatrix> CsrMatrix::view() const {
  return Eigen::Map<const SparseMatrix>(rows(), cols_, static_cast<int>(nnz()), row_ptr_.data(), col_idx_.data(),
                                        values_.data());
}

std::vector<std::vector<int>> ip_sparsity_pattern(const Mesh& mesh, const FaceTable& faces, const DofMap& dofs) {
  const int nc = mesh.num_cells();
  const int nb = dofs.dofs_per_cell;

  // Cells reachable from each cell: itself and its face neighbours.
  std::vector<std::vector<int>> patch(nc);
  for (int c = 0; c < nc; ++c) patch[c].push_back(c);
  for (const auto& f : faces.faces)
    if (!f.is_boundary()) {
      patch[f.left_cell].push_back(f.right_cell);
      patch[f.right_cell].push_back(f.left_cell);
    }

  std::vector<std::vector<int>> dof_cells(dofs.num_dofs);
  for (int c = 0; c < nc; ++c)
    for (int k = 0; k < nb; ++k) {
      auto& list = dof_cells[dofs.dofs(c)[k]];
      if (list.empty() || list.back() != c) list.push_back(c);
    }

  std::vector<std::vector<int>> pattern(dofs.num_dofs);
  std::vector<int> mark(dofs.num_dofs, -1);
  for (int i = 0; i < dofs.num_dofs; ++i) {
    auto& row = pattern[i];
    for (int c : dof_cells[i])
      for (int p : patch[c]) {
        const int* d = dofs.dofs(p);
        for (int k = 0; k < nb; ++k)
          if (mark[d[k]] != i) {
            mark[d[k]] = i;
            row.push_back(d[k]);
          }
      }
    std::sort(row.begin(), row.end());
  }
  return pattern;
}

Eigen::VectorXd ReducedSystem::expand(const Eigen::VectorXd& x, const LinearSystem& full) const {
  Eigen::VectorXd u = full.constrained_values;
  for (size_t k = 0; k < free_dofs.size(); ++k) u[free_dofs[k]] = x[static_cast<int>(k)];
  return u;
}

ReducedSystem eliminate_constraints(const LinearSystem& sys) {
  const int n = sys.A.rows();
  ReducedSystem red;
  std::vector<int> index(n, -1);
  for (int i = 0; i < n; ++i)
    if (!sys.constrained[i]) {
      index[i] = static_cast<int>(red.free_dofs.size());
      red.free_dofs.push_back(i);
    }
  const int nf = static_cast<int>(red.free_dofs.size());
  std::vector<int> rp(nf + 1, 0);
  std::vector<int> ci;
  std::vector<double> vals;
  red.b.resize(nf);
  const auto& A = sys.A;
  for (int r = 0; r < nf; ++r) {
    const int i = red.free_dofs[r];
    double rhs = sys.b[i];
    for (int k = A.row_ptr()[i]; k < A.row_ptr()[i + 1]; ++k) {
      const int j = A.col_idx()[k];
      if (index[j] >= 0) {
        ci.push_back(index[j]);
        vals.push_back(A.values()[k]);
      } else {
        rhs -= A.values()[k] * sys.constrained_values[j];
      }
    }
    red.b[r] = rhs;
    rp[r + 1] = static_cast<int>(ci.size());
  }
  red.A = CsrMatrix(nf, nf, std::move(rp), std::move(ci), std::move(vals));
  return red;
}

void write_matrix_market(std::ostream& os, const CsrMatrix& A) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << A.rows() << ' ' << A.cols() << ' ' << A.nnz() << '\n';
  os << std::setprecision(17);
  for (int i = 0; i < A.rows(); ++i)
    for (int k = A.row_ptr()[i]; k < A.row_ptr()[i + 1]; ++k)
      os << i + 1 << ' ' << A.col_idx()[k] + 1 << ' ' << A.values()[k] << '\n';
}

}  // namespace c0ip
