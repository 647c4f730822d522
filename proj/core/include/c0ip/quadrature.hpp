#pragma once

#include <vector>

#include "c0ip/mesh.hpp"

namespace c0ip {

/// Quadrature rule on the reference simplex {x_i >= 0, sum x_i <= 1}.
struct QuadRule {
  int dim = 0;
  std::vector<Point> points;
  std::vector<double> weights;
  int exact_degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

inline constexpr int kMaxQuadratureDegree = 30;

/// Gauss-Jacobi nodes/weights on [0,1] for the weight (1-t)^alpha.
void gauss_jacobi(int npoints, int alpha, std::vector<double>& nodes, std::vector<double>& weights);

/**
 * Collapsed-coordinate (conical product) Gauss rule exact for all
 * polynomials of total degree <= degree. All weights are positive and no
 * point lies on the simplex boundary. dim = 0 yields the single-point rule
 * with weight 1.
 */
QuadRule simplex_rule(int dim, int degree);

/// Rule on a (d-1)-dimensional face of a d-simplex.
QuadRule face_rule(int dim_minus_1, int degree);

/// Exact integral of x^alpha over the reference simplex: alpha! / (|alpha| + dim)!.
double reference_monomial_integral(int dim, const MultiIndex& alpha);

/// Largest absolute error of the rule over all monomials of degree <= exact_degree.
double exactness_defect(const QuadRule& rule);

}  // namespace c0ip
