#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <vector>

#include "c0ip/mesh.hpp"
#include "c0ip/multi_index.hpp"
#include "c0ip/quadrature.hpp"

namespace c0ip {

inline constexpr int kMaxBasisDegree = 6;

/// Coefficient-vector helpers for polynomials written in the monomial basis
/// of a MultiIndexSet.
namespace poly {

/// d/dx_k of a coefficient vector (same set, top degree becomes zero).
Eigen::VectorXd derivative(const MultiIndexSet& set, const Eigen::VectorXd& c, int k);
/// Laplacian applied `times` times.
Eigen::VectorXd laplacian(const MultiIndexSet& set, const Eigen::VectorXd& c, int times = 1);
/// d^alpha of a coefficient vector.
Eigen::VectorXd partial(const MultiIndexSet& set, const Eigen::VectorXd& c, const MultiIndex& alpha);
/// Monomial values x^alpha for every alpha in the set, one column per point.
Eigen::MatrixXd monomials(const MultiIndexSet& set, const std::vector<Point>& points);
double evaluate(const MultiIndexSet& set, const Eigen::VectorXd& c, const Point& x);

}  // namespace poly

/**
 * Lagrange P_r basis on the reference simplex, nodes on the equispaced
 * lattice {beta / r}. Basis function k interpolates node k.
 *
 * Monomial coefficients are obtained by inverting the lattice Vandermonde
 * matrix in exact rational arithmetic.
 */
class ReferenceBasis {
 public:
  ReferenceBasis(int dim, int degree);

  /// Shared cached instance per (dim, degree).
  static std::shared_ptr<const ReferenceBasis> get(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(bary_.size()); }
  const MultiIndexSet& monomial_set() const { return *set_; }

  /// Barycentric lattice coordinates (beta_0..beta_d, sum = r) of node k,
  /// beta_i belonging to reference vertex i (vertex 0 is the origin).
  const std::array<int, kMaxDim + 1>& node_barycentric(int k) const { return bary_[k]; }
  Point node(int k) const;

  /// Row k holds the monomial coefficients of basis function k.
  const Eigen::MatrixXd& coefficients() const { return coeffs_; }

  double value(int k, const Point& xi) const;
  /// Exact derivative d^alpha phi_k at xi (zero when |alpha| > r).
  double derivative(int k, const MultiIndex& alpha, const Point& xi) const;

 private:
  int dim_;
  int degree_;
  std::shared_ptr<const MultiIndexSet> set_;
  std::vector<std::array<int, kMaxDim + 1>> bary_;
  Eigen::MatrixXd coeffs_;
};

inline std::shared_ptr<const ReferenceBasis> build_lagrange_basis(int dim, int degree) {
  return ReferenceBasis::get(dim, degree);
}

inline double ref_derivative(const ReferenceBasis& basis, int k, const MultiIndex& alpha, const Point& xi) {
  return basis.derivative(k, alpha, xi);
}

/**
 * Basis functions of one cell written as polynomials of the physical offset
 * y = x - b, where b is the image of the reference origin. Because the map is
 * affine, every physical derivative is again a polynomial in the same set and
 * is computed exactly on coefficient vectors.
 *
 * Depends only on the Jacobian, so cells that are translates of each other
 * share one instance.
 */
class PhysicalBasis {
 public:
  /// max_power: highest i for which Delta^i and grad Delta^i are tabulated;
  /// partials up to order max_partial are precomputed as well.
  PhysicalBasis(std::shared_ptr<const ReferenceBasis> ref, const AffineMap& map, int max_power, int max_partial = -1);

  int dim() const { return ref_->dim(); }
  int size() const { return ref_->size(); }
  int max_power() const { return max_power_; }
  const ReferenceBasis& reference() const { return *ref_; }
  const MultiIndexSet& monomial_set() const { return ref_->monomial_set(); }

  /// Rows: basis functions, columns: monomial coefficients in y.
  const Eigen::MatrixXd& values() const { return lap_[0]; }
  const Eigen::MatrixXd& laplacian_power(int i) const { return lap_[i]; }
  const Eigen::MatrixXd& gradient_laplacian_power(int i, int component) const { return grad_lap_[i][component]; }
  /// Coefficients of d^alpha phi for every basis function.
  Eigen::MatrixXd partial(const MultiIndex& alpha) const;
  int max_partial() const { return max_partial_; }
  /// Precomputed partial i of MultiIndexSet(dim, max_partial).
  const Eigen::MatrixXd& stored_partial(int i) const { return partials_[i]; }

 private:
  std::shared_ptr<const ReferenceBasis> ref_;
  int max_power_;
  int max_partial_;
  std::vector<Eigen::MatrixXd> lap_;
  std::vector<Eigen::MatrixXd> partials_;
  std::vector<std::array<Eigen::MatrixXd, kMaxDim>> grad_lap_;
  Eigen::MatrixXd phys_;
};

/**
 * Values of Delta^i phi_k and grad Delta^i phi_k (0 <= i <= max_power) and of
 * the raw partials d^alpha phi_k (|alpha| <= max_partial) at a point set.
 * Every matrix is (basis functions) x (points).
 */
struct DerivTable {
  int dim = 0;
  int num_points = 0;
  int num_basis = 0;
  std::vector<Eigen::MatrixXd> lap;
  std::vector<std::array<Eigen::MatrixXd, kMaxDim>> grad_lap;
  int max_partial = -1;
  std::vector<Eigen::MatrixXd> partials;  ///< indexed like MultiIndexSet(dim, max_partial)

  /// Normal derivative of Delta^i phi at every point: sum_c grad_lap[i][c] * normal[c].
  Eigen::MatrixXd normal_derivative(int i, const Point& normal) const;
};

/// Tabulate at physical points x (the offset to the map origin is applied inside).
DerivTable evaluate_derivatives(const PhysicalBasis& basis, const Point& origin, const std::vector<Point>& points,
                                int max_power, int max_partial);

/// Tabulate at the images of the reference quadrature points of `quad`.
/// Laplacian powers up to m - 1 and raw partials up to order m.
DerivTable physical_deriv_table(const PhysicalBasis& basis, const AffineMap& map, const QuadRule& quad, int m);

}  // namespace c0ip
