#pragma once

#include <Eigen/Dense>
#include <string>

#include "c0ip/sparse.hpp"

namespace c0ip {

enum class SolverMethod { kDirect, kCG };

struct SolverOptions {
  SolverMethod method = SolverMethod::kDirect;
  double cg_tolerance = 1e-10;
  int cg_max_iteration_factor = 50;  ///< max iterations = factor * dofs
  /// Maximum rounds of mixed precision refinement; stops early once the
  /// relative residual is below refinement_target or stops decreasing.
  int refinement_steps = 4;
  double refinement_target = 1e-13;
  /// Use the simplicial LDL^T factorization even when the matrix is positive definite,
  /// so that pivot signs are always reported.
  bool force_ldlt = false;
  /// Solve residual threshold above which a run is marked invalid.
  double valid_residual = 1e-8;
};

struct SolveReport {
  SolverMethod method = SolverMethod::kDirect;
  std::string factorization;  ///< "cholmod-llt", "cholmod-ldlt" or "cg-jacobi"
  double relative_residual = 0.0;
  int iterations = 0;
  bool factorization_ok = false;
  int negative_pivots = 0;
  bool valid = false;  ///< relative residual <= threshold
  std::string message;
};

/// Counts positive, negative and (numerically) zero pivots of LDL^T.
struct Inertia {
  int positive = 0;
  int negative = 0;
  int zero = 0;
  int first_zero_dof = -1;  ///< an original index where a zero pivot occurred
};

/// Inertia of a symmetric matrix from a fill-reducing LDL^T factorization.
Inertia ldlt_inertia(const CsrMatrix& A);

/// Solve A x = b for symmetric A. Throws SolverError on singular or failed
/// solves; an indefinite matrix is still solved with LDL^T and reported.
Eigen::VectorXd solve(const CsrMatrix& A, const Eigen::VectorXd& b, const SolverOptions& options, SolveReport& report);

const char* to_string(SolverMethod m);
SolverMethod parse_solver_method(const std::string& s);

}  // namespace c0ip
