#include "c0ip/refbasis.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <mutex>
#include <stdexcept>

#include "c0ip/error.hpp"

namespace c0ip {

namespace poly {

Eigen::VectorXd derivative(const MultiIndexSet& set, const Eigen::VectorXd& c, int k) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(set.size());
  for (int i = 0; i < set.size(); ++i) {
    const int j = set.shift_up(i, k);
    if (j >= 0) out[i] = (set[i][k] + 1) * c[j];
  }
  return out;
}

Eigen::VectorXd laplacian(const MultiIndexSet& set, const Eigen::VectorXd& c, int times) {
  Eigen::VectorXd cur = c;
  for (int t = 0; t < times; ++t) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(set.size());
    for (int k = 0; k < set.dim(); ++k) next += derivative(set, derivative(set, cur, k), k);
    cur = std::move(next);
  }
  return cur;
}

Eigen::VectorXd partial(const MultiIndexSet& set, const Eigen::VectorXd& c, const MultiIndex& alpha) {
  Eigen::VectorXd cur = c;
  for (int k = 0; k < set.dim(); ++k)
    for (int t = 0; t < alpha[k]; ++t) cur = derivative(set, cur, k);
  return cur;
}

Eigen::MatrixXd monomials(const MultiIndexSet& set, const std::vector<Point>& points) {
  const int n = static_cast<int>(points.size());
  Eigen::MatrixXd M(set.size(), n);
  const int deg = set.degree();
  std::array<std::vector<double>, kMaxDim> pw;
  for (auto& p : pw) p.resize(deg + 1);
  for (int q = 0; q < n; ++q) {
    for (int k = 0; k < set.dim(); ++k) {
      pw[k][0] = 1.0;
      for (int e = 1; e <= deg; ++e) pw[k][e] = pw[k][e - 1] * points[q][k];
    }
    for (int i = 0; i < set.size(); ++i) {
      double v = 1.0;
      for (int k = 0; k < set.dim(); ++k) v *= pw[k][set[i][k]];
      M(i, q) = v;
    }
  }
  return M;
}

double evaluate(const MultiIndexSet& set, const Eigen::VectorXd& c, const Point& x) {
  return c.dot(monomials(set, {x}).col(0));
}

}  // namespace poly

namespace {

using Rational = boost::multiprecision::cpp_rational;

// Inverse of a square rational matrix by Gauss-Jordan elimination.
std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> a) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (a[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw std::runtime_error("lagrange basis: singular Vandermonde matrix");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const Rational p = a[col][col];
    for (int j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (int j = 0; j < n; ++j) {
        if (a[col][j] != 0) a[r][j] -= f * a[col][j];
        if (inv[col][j] != 0) inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

}  // namespace

ReferenceBasis::ReferenceBasis(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 1 || dim > kMaxDim) throw ConfigError("lagrange basis: dimension must be 1, 2 or 3");
  if (degree < 1 || degree > kMaxBasisDegree)
    throw ConfigError("lagrange basis: degree must be in 1.." + std::to_string(kMaxBasisDegree));
  set_ = MultiIndexSet::get(dim, degree);
  const int n = set_->size();
  bary_.reserve(n);
  for (const auto& a : set_->indices()) {
    std::array<int, kMaxDim + 1> b{0, 0, 0, 0};
    b[0] = degree - total_degree(a);
    for (int k = 0; k < dim; ++k) b[k + 1] = a[k];
    bary_.push_back(b);
  }

  // V[j][alpha] = node_j^alpha; coefficient rows C satisfy C V^T = I.
  std::vector<std::vector<Rational>> vt(n, std::vector<Rational>(n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Rational v = 1;
      for (int k = 0; k < dim; ++k)
        for (int e = 0; e < (*set_)[i][k]; ++e) v *= Rational(bary_[j][k + 1], degree);
      vt[i][j] = v;
    }
  const auto inv = invert(std::move(vt));
  coeffs_.resize(n, n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) coeffs_(k, i) = static_cast<double>(inv[k][i]);
}

std::shared_ptr<const ReferenceBasis> ReferenceBasis::get(int dim, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const ReferenceBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{dim, degree}];
  if (!slot) slot = std::make_shared<const ReferenceBasis>(dim, degree);
  return slot;
}

Point ReferenceBasis::node(int k) const {
  Point p{};
  for (int i = 0; i < dim_; ++i) p[i] = static_cast<double>(bary_[k][i + 1]) / degree_;
  return p;
}

double ReferenceBasis::value(int k, const Point& xi) const {
  return poly::evaluate(*set_, coeffs_.row(k).transpose(), xi);
}

double ReferenceBasis::derivative(int k, const MultiIndex& alpha, const Point& xi) const {
  if (total_degree(alpha) > degree_) return 0.0;
  return poly::evaluate(*set_, poly::partial(*set_, coeffs_.row(k).transpose(), alpha), xi);
}

PhysicalBasis::PhysicalBasis(std::shared_ptr<const ReferenceBasis> ref, const AffineMap& map, int max_power,
                             int max_partial)
    : ref_(std::move(ref)), max_power_(max_power), max_partial_(max_partial) {
  const MultiIndexSet& set = ref_->monomial_set();
  const int n = set.size();
  const int d = set.dim();

  // xi = A y with A = J^-1; row alpha of T expands xi^alpha in powers of y.
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  T(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    MultiIndex a = set[i];
    int k = 0;
    while (a[k] == 0) ++k;
    --a[k];
    const int prev = set.find(a);
    for (int j = 0; j < n; ++j) {
      const double c = T(prev, j);
      if (c == 0.0) continue;
      for (int l = 0; l < d; ++l) {
        const int up = set.shift_up(j, l);
        // A(k, l) = (J^-1)(k, l) = inv_transpose(l, k)
        if (up >= 0) T(i, up) += c * map.inv_transpose[l][k];
      }
    }
  }
  phys_ = ref_->coefficients() * T;

  const int nb = ref_->size();
  lap_.assign(max_power + 1, Eigen::MatrixXd::Zero(nb, n));
  grad_lap_.assign(max_power + 1, {});
  for (int b = 0; b < nb; ++b) {
    Eigen::VectorXd cur = phys_.row(b).transpose();
    for (int p = 0; p <= max_power; ++p) {
      lap_[p].row(b) = cur.transpose();
      for (int c = 0; c < d; ++c) {
        if (grad_lap_[p][c].size() == 0) grad_lap_[p][c] = Eigen::MatrixXd::Zero(nb, n);
        grad_lap_[p][c].row(b) = poly::derivative(set, cur, c).transpose();
      }
      cur = poly::laplacian(set, cur);
    }
  }
  if (max_partial >= 0) {
    const auto pset = MultiIndexSet::get(d, max_partial);
    for (const auto& alpha : pset->indices()) partials_.push_back(partial(alpha));
  }
}

Eigen::MatrixXd PhysicalBasis::partial(const MultiIndex& alpha) const {
  const MultiIndexSet& set = monomial_set();
  Eigen::MatrixXd out(phys_.rows(), phys_.cols());
  for (int b = 0; b < phys_.rows(); ++b) out.row(b) = poly::partial(set, phys_.row(b).transpose(), alpha).transpose();
  return out;
}

Eigen::MatrixXd DerivTable::normal_derivative(int i, const Point& normal) const {
  Eigen::MatrixXd out = grad_lap[i][0] * normal[0];
  for (int c = 1; c < dim; ++c) out += grad_lap[i][c] * normal[c];
  return out;
}

DerivTable evaluate_derivatives(const PhysicalBasis& basis, const Point& origin, const std::vector<Point>& points,
                                int max_power, int max_partial) {
  if (max_power > basis.max_power()) throw std::logic_error("evaluate_derivatives: power exceeds tabulated range");
  DerivTable t;
  t.dim = basis.dim();
  t.num_points = static_cast<int>(points.size());
  t.num_basis = basis.size();
  std::vector<Point> offsets(points.size());
  for (size_t q = 0; q < points.size(); ++q)
    for (int k = 0; k < t.dim; ++k) offsets[q][k] = points[q][k] - origin[k];
  const Eigen::MatrixXd M = poly::monomials(basis.monomial_set(), offsets);
  t.lap.resize(max_power + 1);
  t.grad_lap.resize(max_power + 1);
  for (int p = 0; p <= max_power; ++p) {
    t.lap[p] = basis.laplacian_power(p) * M;
    for (int c = 0; c < t.dim; ++c) t.grad_lap[p][c] = basis.gradient_laplacian_power(p, c) * M;
  }
  t.max_partial = max_partial;
  if (max_partial >= 0) {
    const auto set = MultiIndexSet::get(t.dim, max_partial);
    t.partials.reserve(set->size());
    for (int i = 0; i < set->size(); ++i) {
      if (max_partial <= basis.max_partial())
        t.partials.push_back(basis.stored_partial(i) * M);
      else
        t.partials.push_back(basis.partial((*set)[i]) * M);
    }
  }
  return t;
}

DerivTable physical_deriv_table(const PhysicalBasis& basis, const AffineMap& map, const QuadRule& quad, int m) {
  std::vector<Point> pts;
  pts.reserve(quad.size());
  for (const auto& xi : quad.points) pts.push_back(map.map(xi));
  return evaluate_derivatives(basis, map.b, pts, m - 1, m);
}

}  // namespace c0ip
