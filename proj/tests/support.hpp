#pragma once
// Helpers shared by the tests and the acceptance suite.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "c0ip/assembly.hpp"
#include "c0ip/jets.hpp"

namespace c0ip::testing {

inline CsrMatrix from_dense(const Eigen::MatrixXd& M) {
  std::vector<int> rp{0}, ci;
  std::vector<double> v;
  for (int i = 0; i < M.rows(); ++i) {
    for (int j = 0; j < M.cols(); ++j)
      if (M(i, j) != 0.0) {
        ci.push_back(j);
        v.push_back(M(i, j));
      }
    rp.push_back(static_cast<int>(ci.size()));
  }
  return CsrMatrix(static_cast<int>(M.rows()), static_cast<int>(M.cols()), rp, ci, v);
}

// Standard P_r stiffness matrix from reference gradients and J^-T.
inline Eigen::MatrixXd poisson_stiffness(const Discretization& disc, int r) {
  const int d = disc.mesh().dim;
  const int n = disc.dofs().num_dofs;
  const auto& ref = disc.basis();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  const QuadRule rule = simplex_rule(d, 2 * r);
  for (int c = 0; c < disc.mesh().num_cells(); ++c) {
    const AffineMap& map = disc.map(c);
    const int* dofs = disc.dofs().dofs(c);
    for (int q = 0; q < rule.size(); ++q) {
      std::vector<Point> grads(ref.size());
      for (int k = 0; k < ref.size(); ++k) {
        Point gref{};
        for (int j = 0; j < d; ++j) {
          MultiIndex e{};
          e[j] = 1;
          gref[j] = ref.derivative(k, e, rule.points[q]);
        }
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) grads[k][i] += map.inv_transpose[i][j] * gref[j];
      }
      const double w = rule.weights[q] * std::abs(map.detJ);
      for (int a = 0; a < ref.size(); ++a)
        for (int b = 0; b < ref.size(); ++b) {
          double s = 0.0;
          for (int i = 0; i < d; ++i) s += grads[a][i] * grads[b][i];
          K(dofs[a], dofs[b]) += w * s;
        }
    }
  }
  return K;
}

// Standard P_r load vector (f, phi_i) with f = -Delta u.
inline Eigen::VectorXd poisson_load(const Discretization& disc, const ExactSolution& u, int degree) {
  const int d = disc.mesh().dim;
  const auto& ref = disc.basis();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(disc.dofs().num_dofs);
  const QuadRule rule = simplex_rule(d, degree);
  std::vector<Point> pts;
  std::vector<double> w;
  for (int c = 0; c < disc.mesh().num_cells(); ++c) {
    disc.cell_quadrature(c, rule, pts, w);
    const int* dofs = disc.dofs().dofs(c);
    for (int q = 0; q < rule.size(); ++q) {
      const double f = m_laplace(u.jet(pts[q], 2), 1);
      for (int k = 0; k < ref.size(); ++k) b[dofs[k]] += w[q] * f * ref.value(k, rule.points[q]);
    }
  }
  return b;
}

}  // namespace c0ip::testing

using c0ip::testing::from_dense;
using c0ip::testing::poisson_load;
using c0ip::testing::poisson_stiffness;
