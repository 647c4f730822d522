#include "c0ip/solver.hpp"

#include <cholmod.h>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

#include "c0ip/error.hpp"

namespace c0ip {

namespace {

// Thin RAII layer over the CHOLMOD C interface. A symmetric CSR matrix is the
// CSC storage of itself; stype = 1 reads only its upper triangle.
class Cholmod {
 public:
  Cholmod() {
    cholmod_start(&common_);
    common_.print = 0;
  }
  ~Cholmod() {
    if (factor_) cholmod_free_factor(&factor_, &common_);
    cholmod_finish(&common_);
  }
  Cholmod(const Cholmod&) = delete;
  Cholmod& operator=(const Cholmod&) = delete;

  /// Supernodal LL^T when llt, otherwise simplicial LDL^T. Returns false if
  /// LL^T meets a nonpositive pivot; throws if LDL^T meets a zero pivot.
  bool factorize(const CsrMatrix& A, bool llt) {
    if (factor_) cholmod_free_factor(&factor_, &common_);
    common_.supernodal = llt ? CHOLMOD_AUTO : CHOLMOD_SIMPLICIAL;
    common_.final_ll = llt ? 1 : 0;
    cholmod_sparse S = wrap(A);
    factor_ = cholmod_analyze(&S, &common_);
    if (!factor_) throw SolverError("CHOLMOD analysis failed");
    cholmod_factorize(&S, factor_, &common_);
    if (common_.status == CHOLMOD_NOT_POSDEF) {
      if (llt) return false;
      const auto* perm = static_cast<const int*>(factor_->Perm);
      const auto k = static_cast<int>(factor_->minor);
      throw SolverError("singular matrix: zero pivot at dof " + std::to_string(perm ? perm[k] : k));
    }
    if (common_.status < CHOLMOD_OK) throw SolverError("CHOLMOD factorization failed (out of memory?)");
    return true;
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) {
    cholmod_dense B{};
    B.nrow = B.d = static_cast<size_t>(b.size());
    B.ncol = 1;
    B.nzmax = B.nrow;
    B.x = const_cast<double*>(b.data());
    B.xtype = CHOLMOD_REAL;
    B.dtype = CHOLMOD_DOUBLE;
    cholmod_dense* X = cholmod_solve(CHOLMOD_A, factor_, &B, &common_);
    if (!X) throw SolverError("CHOLMOD solve failed");
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(static_cast<double*>(X->x), b.size());
    cholmod_free_dense(&X, &common_);
    return x;
  }

  /// Pivots of a simplicial LDL^T factor and the original dof of each.
  Inertia inertia() const {
    const int n = static_cast<int>(factor_->n);
    const auto* p = static_cast<const int*>(factor_->p);
    const auto* x = static_cast<const double*>(factor_->x);
    const auto* perm = static_cast<const int*>(factor_->Perm);
    double scale = 1e-300;
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(x[p[j]]));
    Inertia in;
    for (int j = 0; j < n; ++j) {
      const double d = x[p[j]];
      if (!(std::abs(d) > 1e-14 * scale)) {
        ++in.zero;
        if (in.first_zero_dof < 0) in.first_zero_dof = perm ? perm[j] : j;
      } else if (d < 0.0) {
        ++in.negative;
      } else {
        ++in.positive;
      }
    }
    return in;
  }

 private:
  static cholmod_sparse wrap(const CsrMatrix& A) {
    cholmod_sparse S{};
    S.nrow = S.ncol = static_cast<size_t>(A.rows());
    S.nzmax = static_cast<size_t>(A.nnz());
    S.p = const_cast<int*>(A.row_ptr().data());
    S.i = const_cast<int*>(A.col_idx().data());
    S.x = const_cast<double*>(A.values().data());
    S.stype = 1;
    S.itype = CHOLMOD_INT;
    S.xtype = CHOLMOD_REAL;
    S.dtype = CHOLMOD_DOUBLE;
    S.sorted = 1;
    S.packed = 1;
    return S;
  }

  cholmod_common common_{};
  cholmod_factor* factor_ = nullptr;
};

using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// b - A x accumulated in long double.
Eigen::VectorXd residual(const CsrMatrix& A, const LongVector& x, const Eigen::VectorXd& b) {
  const auto& rp = A.row_ptr();
  const auto& ci = A.col_idx();
  const auto& v = A.values();
  Eigen::VectorXd r(A.rows());
  for (int i = 0; i < A.rows(); ++i) {
    long double acc = b[i];
    for (int k = rp[i]; k < rp[i + 1]; ++k) acc -= static_cast<long double>(v[k]) * x[ci[k]];
    r[i] = static_cast<double>(acc);
  }
  return r;
}

double relative_residual(const CsrMatrix& A, const LongVector& x, const Eigen::VectorXd& b) {
  const double nb = b.norm();
  const double nr = residual(A, x, b).norm();
  return nb > 0.0 ? nr / nb : nr;
}

// Mixed precision refinement: the iterate and residual live in long double,
// corrections come from the double precision factorization.
LongVector refine(Cholmod& f, const CsrMatrix& A, const Eigen::VectorXd& b, const SolverOptions& options) {
  LongVector x = f.solve(b).cast<long double>();
  double res = relative_residual(A, x, b);
  for (int k = 0; k < options.refinement_steps && res > options.refinement_target; ++k) {
    const LongVector next = x + f.solve(residual(A, x, b)).cast<long double>();
    const double next_res = relative_residual(A, next, b);
    if (!(next_res < res)) break;
    x = next;
    res = next_res;
  }
  return x;
}

}  // namespace

const char* to_string(SolverMethod m) { return m == SolverMethod::kDirect ? "direct" : "cg"; }

SolverMethod parse_solver_method(const std::string& s) {
  if (s == "direct") return SolverMethod::kDirect;
  if (s == "cg") return SolverMethod::kCG;
  throw ConfigError("unknown solver '" + s + "' (expected direct or cg)");
}

Inertia ldlt_inertia(const CsrMatrix& A) {
  // Eigen's LDL^T keeps going past zero pivots, so singular matrices get a full count.
  using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
  const ColMatrix full = A.view();
  Eigen::SimplicialLDLT<ColMatrix, Eigen::Lower> ldlt(full.triangularView<Eigen::Lower>());
  if (ldlt.info() != Eigen::Success && ldlt.info() != Eigen::NumericalIssue)
    throw SolverError("LDL^T factorization failed");
  const Eigen::VectorXd D = ldlt.vectorD();
  const double scale = D.size() ? std::max(D.cwiseAbs().maxCoeff(), 1e-300) : 1.0;
  const auto& pinv = ldlt.permutationPinv().indices();
  Inertia in;
  for (int k = 0; k < D.size(); ++k) {
    if (!(std::abs(D[k]) > 1e-14 * scale)) {
      ++in.zero;
      if (in.first_zero_dof < 0) in.first_zero_dof = pinv[k];
    } else if (D[k] < 0.0) {
      ++in.negative;
    } else {
      ++in.positive;
    }
  }
  return in;
}

Eigen::VectorXd solve(const CsrMatrix& A, const Eigen::VectorXd& b, const SolverOptions& options, SolveReport& report) {
  report = SolveReport{};
  report.method = options.method;
  const int n = A.rows();
  if (n == 0) {
    report.factorization_ok = true;
    report.valid = true;
    return Eigen::VectorXd();
  }
  Eigen::VectorXd x;

  if (options.method == SolverMethod::kCG) {
    report.factorization = "cg-jacobi";
    report.factorization_ok = true;
    const SparseMatrix M = A.view();
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
    cg.setTolerance(options.cg_tolerance);
    cg.setMaxIterations(static_cast<Eigen::Index>(options.cg_max_iteration_factor) * n);
    cg.compute(M);
    x = cg.solve(b);
    report.iterations = static_cast<int>(cg.iterations());
    report.relative_residual = relative_residual(A, x.cast<long double>(), b);
    if (cg.info() != Eigen::Success) {
      throw SolverError("conjugate gradients did not converge: " + std::to_string(report.iterations) +
                        " iterations, estimated relative residual " + std::to_string(cg.error()) +
                        ", true relative residual " + std::to_string(report.relative_residual));
    }
  } else {
    Cholmod f;
    if (!options.force_ldlt && f.factorize(A, true)) {
      report.factorization = "cholmod-llt";
    } else {
      f.factorize(A, false);
      report.factorization = "cholmod-ldlt";
      const Inertia in = f.inertia();
      if (in.zero > 0) throw SolverError("singular matrix: zero pivot at dof " + std::to_string(in.first_zero_dof));
      report.negative_pivots = in.negative;
      if (in.negative > 0)
        report.message =
            "matrix is indefinite (" + std::to_string(in.negative) + " negative pivots); consider a larger tau";
    }
    report.factorization_ok = true;
    const LongVector xl = refine(f, A, b, options);
    report.relative_residual = relative_residual(A, xl, b);
    x = xl.cast<double>();
  }
  report.valid = std::isfinite(report.relative_residual) && report.relative_residual <= options.valid_residual;
  if (!report.valid && report.message.empty())
    report.message = "relative residual " + std::to_string(report.relative_residual) + " exceeds threshold";
  return x;
}

}  // namespace c0ip
