#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "c0ip/assembly.hpp"
#include "c0ip/jets.hpp"

namespace c0ip {

/**
 * Parts of the discrete H^m norm
 *   ||v||^2 = sum_{i=0}^m ||D^i v||^2 + sum_{j=1}^{m-1} h^{-(2m-2j-1)} ||[[D^j v]]||^2
 * where D^i collects all partials of order i with multinomial weights i!/alpha!.
 */
struct ErrorBreakdown {
  std::vector<double> volume;  ///< ||D^i v||, i = 0..m
  std::vector<double> jump;    ///< weighted jump norm for j = 1..m-1, stored at index j - 1
  double total = 0.0;
};

/// ||u - u_h||_{m,h}. The Discretization must tabulate partials up to order m.
ErrorBreakdown discrete_hm_error(const ProblemSpec& spec, const Discretization& disc, const Eigen::VectorXd& uh,
                                 const ExactSolution& u);
/// ||u_h||_{m,h}.
ErrorBreakdown discrete_hm_norm(const ProblemSpec& spec, const Discretization& disc, const Eigen::VectorXd& uh);

/// Quadrature degree of the error integrals.
inline int error_quad_degree(const ProblemSpec& spec) { return 2 * spec.r + 4 + spec.quad_boost; }

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  int dofs = 0;
  ErrorBreakdown error;
  double eoc = 0.0;        ///< NaN on the first row or when undefined
  bool eoc_valid = false;  ///< false for the first row and for nonpositive errors
  double residual = 0.0;   ///< relative solve residual
};

struct ConvergenceTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<ConvergenceRow> rows;

  /// Fill the eoc of every row from the previous one.
  void compute_eoc();
  void write_csv(std::ostream& os) const;
  void write_markdown(std::ostream& os) const;
};

/// log(e_prev / e_cur) / log(h_prev / h_cur), NaN when undefined.
double eoc(double e_prev, double h_prev, double e_cur, double h_cur);

/// Quadratic forms of one mesh, restricted to the free (interior) dofs.
struct MonitorForms {
  CsrMatrix volume;   ///< volume term of the method
  CsrMatrix penalty;  ///< S_h
  CsrMatrix jumps;    ///< sum_j h^{-(2m-2j-1)} ||[[D^j v]]||^2
  CsrMatrix norm;     ///< ||v||_{m,h}^2
};

MonitorForms monitor_forms(const ProblemSpec& spec, const Discretization& disc);

/// Estimate of max x^T N x / x^T D x by power iteration on (D + shift)^{-1} N.
double max_rayleigh_quotient(const CsrMatrix& N, const CsrMatrix& D, int iterations = 20, int restarts = 3,
                             unsigned seed = 12345);

struct MonitorLevel {
  int n = 0;
  int dofs = 0;
  std::optional<double> penalty_dominance;  ///< jumps / S_h; empty when m = 1
  double norm_equivalence = 0.0;            ///< ||.||^2_{m,h} / (volume + S_h)
};

/// Rayleigh monitors over a sequence of unit square meshes.
std::vector<MonitorLevel> rayleigh_monitors(const ProblemSpec& spec, const std::vector<int>& ns);

struct ConsistencyResult {
  double max_residual = 0.0;  ///< max_i |a(u, phi_i) - (f, phi_i)| over free dofs
  double scale = 0.0;         ///< max_i |(f, phi_i)|
  /// Residual over max(scale, 1), so that f = 0 falls back to the absolute value.
  double relative() const { return max_residual / std::max(scale, 1.0); }
};

/// Galerkin consistency of the exact solution: volume term plus C_h(u, phi_i)
/// against (f, phi_i), with u entering through its jets.
ConsistencyResult consistency_residual(const ProblemSpec& spec, const Discretization& disc, const ExactSolution& u);

}  // namespace c0ip
