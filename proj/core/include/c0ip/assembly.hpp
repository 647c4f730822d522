#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <vector>

#include "c0ip/dofs.hpp"
#include "c0ip/jets.hpp"
#include "c0ip/mesh.hpp"
#include "c0ip/quadrature.hpp"
#include "c0ip/refbasis.hpp"
#include "c0ip/sparse.hpp"

namespace c0ip {

/// Discretization parameters of the interior penalty method for (-1)^m Delta^m u = f.
struct ProblemSpec {
  int m = 2;
  int r = 2;
  double tau = 1.0;
  int dim = 2;
  int quad_boost = 0;

  int m_tilde() const { return m / 2; }
  bool even() const { return m % 2 == 0; }
  int volume_quad_degree() const { return 2 * r + 2 + quad_boost; }
  int face_quad_degree() const { return 2 * r + 2 + quad_boost; }
  /// Throws ConfigError on m < 1, r < m, r above the supported degree, tau < 0 or bad dim.
  void validate() const;
};

/// Which face trace of a Laplacian power enters a term.
enum class Trace {
  kValue,   ///< Delta^p w, scalar; its jump is vector valued
  kNormal,  ///< grad Delta^p w . nu, the scalar jump of a vector
};

/// sign * < {{trace(avg_power) w}}, [[trace(jump_power) v]] >
struct CouplingTerm {
  Trace avg;
  int avg_power;
  Trace jump;
  int jump_power;
  double sign;
};

/// h^{-h_exponent} < [[trace(power) w]], [[trace(power) v]] >
struct PenaltyTerm {
  Trace jump;
  int power;
  int h_exponent;
};

struct FaceForm {
  std::vector<CouplingTerm> coupling;
  std::vector<PenaltyTerm> penalty;
};

/// Face terms of the coupling and stabilization forms for a given m.
FaceForm face_form(int m);

/**
 * Mesh, faces, degrees of freedom and cached physical bases. Cells whose
 * Jacobians agree share one PhysicalBasis.
 */
class Discretization {
 public:
  /// Bases tabulate Laplacian powers up to max_power and partials up to max_partial.
  Discretization(Mesh mesh, int degree, int max_power, int max_partial = -1);

  const Mesh& mesh() const { return mesh_; }
  const FaceTable& faces() const { return faces_; }
  const DofMap& dofs() const { return dofs_; }
  const ReferenceBasis& basis() const { return *basis_; }
  const AffineMap& map(int cell) const { return maps_[cell]; }
  int jacobian_class(int cell) const { return classes_[cell]; }
  int num_classes() const { return static_cast<int>(bases_.size()); }
  const PhysicalBasis& physical(int cell) const { return *bases_[classes_[cell]]; }
  int max_power() const { return max_power_; }
  int max_partial() const { return max_partial_; }

  /// Physical quadrature points and weights on a cell.
  void cell_quadrature(int cell, const QuadRule& rule, std::vector<Point>& pts, std::vector<double>& w) const;
  /// Physical quadrature points and weights on a face.
  void face_quadrature(int face, const QuadRule& rule, std::vector<Point>& pts, std::vector<double>& w) const;

  /// Derivative table of a cell's basis at physical points.
  DerivTable table(int cell, const std::vector<Point>& pts, int max_power, int max_partial = -1) const;

 private:
  Mesh mesh_;
  FaceTable faces_;
  std::shared_ptr<const ReferenceBasis> basis_;
  DofMap dofs_;
  int max_power_;
  int max_partial_;
  std::vector<AffineMap> maps_;
  std::vector<int> classes_;
  std::vector<std::shared_ptr<const PhysicalBasis>> bases_;
};

/// Trace operators of one face acting on the local dofs [left cell; right cell].
struct FaceOperators {
  int num_local = 0;
  std::vector<int> dofs;  ///< local -> global
  std::vector<double> weights;
  std::vector<Point> points;
  /// Indexed by power: rows local dofs, columns quadrature points.
  std::vector<Eigen::MatrixXd> avg_value, jump_value, avg_normal, jump_normal;

  const Eigen::MatrixXd& avg(Trace t, int p) const { return t == Trace::kValue ? avg_value[p] : avg_normal[p]; }
  const Eigen::MatrixXd& jump(Trace t, int p) const { return t == Trace::kValue ? jump_value[p] : jump_normal[p]; }
};

FaceOperators face_operators(const Discretization& disc, int face, const QuadRule& rule, int max_power);

/// Global pattern-shaped matrix with all entries zero.
CsrMatrix make_ip_matrix(const Discretization& disc);

/// (Delta^mt phi_j, Delta^mt phi_i) for even m, (grad Delta^mt phi_j, grad Delta^mt phi_i) for odd m.
void assemble_volume(const ProblemSpec& spec, const Discretization& disc, CsrMatrix& A);
/// C_h(phi_j, phi_i) + C_h(phi_i, phi_j) over all faces.
void assemble_coupling(const ProblemSpec& spec, const Discretization& disc, CsrMatrix& A);
/// scale * S_h(phi_j, phi_i) over all faces.
void assemble_stabilization(const ProblemSpec& spec, const Discretization& disc, CsrMatrix& A, double scale);

/// Full matrix: volume + coupling (both orders) + tau * stabilization.
CsrMatrix assemble_matrix(const ProblemSpec& spec, const Discretization& disc);

/// (f, phi_i) with f = (-1)^m Delta^m u, plus the boundary data terms
/// C_h(phi_i, g) + tau S_h(g, phi_i) with the traces of u as data g.
Eigen::VectorXd assemble_load(const ProblemSpec& spec, const Discretization& disc, const ExactSolution& u);

/// Only the (f, phi_i) part.
Eigen::VectorXd assemble_source(const ProblemSpec& spec, const Discretization& disc, const ExactSolution& u);

/// Constrain every boundary node to the nodal value of u.
void apply_essential_bc(const Discretization& disc, const ExactSolution& u, LinearSystem& sys);

/// Matrix, load and constraints for one problem.
LinearSystem assemble_system(const ProblemSpec& spec, const Discretization& disc, const ExactSolution& u);

/// Independent element-by-element assembly of the m = 2, 3, 4 forms, with
/// physical derivatives obtained by the chain rule on reference derivatives.
Eigen::MatrixXd assemble_specialized(const ProblemSpec& spec, const Discretization& disc);

/// Max entry deviation between the general and the specialized assembly,
/// relative to the largest entry.
double check_specialization(const ProblemSpec& spec, const Discretization& disc);

}  // namespace c0ip
