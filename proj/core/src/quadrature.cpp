#include "c0ip/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>

#include "c0ip/error.hpp"

namespace c0ip {

void gauss_jacobi(int npoints, int alpha, std::vector<double>& nodes, std::vector<double>& weights) {
  // Golub-Welsch on the symmetric Jacobi matrix of P^(alpha,0) over [-1,1].
  const double a = alpha;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(npoints, npoints);
  for (int n = 0; n < npoints; ++n) {
    const double s = 2.0 * n + a;
    T(n, n) = (n == 0) ? -a / (a + 2.0) : -(a * a) / (s * (s + 2.0));
    if (n + 1 < npoints) {
      const double k = n + 1;
      const double sk = 2.0 * k + a;
      const double b = 4.0 * k * (k + a) * k * (k + a) / (sk * sk * (sk + 1.0) * (sk - 1.0));
      T(n, n + 1) = T(n + 1, n) = std::sqrt(b);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
  const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);
  nodes.resize(npoints);
  weights.resize(npoints);
  for (int i = 0; i < npoints; ++i) {
    const double x = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    nodes[i] = 0.5 * (1.0 + x);
    weights[i] = mu0 * v0 * v0 * std::pow(0.5, a + 1.0);
  }
}

namespace {

QuadRule build_rule(int dim, int degree) {
  QuadRule rule;
  rule.dim = dim;
  rule.exact_degree = degree;
  if (dim == 0) {
    rule.points.push_back(Point{});
    rule.weights.push_back(1.0);
    return rule;
  }
  const int n = degree / 2 + 1;
  std::vector<double> x0, w0, x1, w1, x2, w2;
  gauss_jacobi(n, 0, x0, w0);
  if (dim >= 2) gauss_jacobi(n, 1, x1, w1);
  if (dim >= 3) gauss_jacobi(n, 2, x2, w2);

  if (dim == 1) {
    for (int i = 0; i < n; ++i) {
      rule.points.push_back({x0[i], 0.0, 0.0});
      rule.weights.push_back(w0[i]);
    }
  } else if (dim == 2) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double t = x1[j];
        rule.points.push_back({x0[i] * (1.0 - t), t, 0.0});
        rule.weights.push_back(w0[i] * w1[j]);
      }
  } else {
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const double u = x2[k], t = x1[j];
          rule.points.push_back({x0[i] * (1.0 - t) * (1.0 - u), t * (1.0 - u), u});
          rule.weights.push_back(w0[i] * w1[j] * w2[k]);
        }
  }
  return rule;
}

}  // namespace

QuadRule simplex_rule(int dim, int degree) {
  if (dim < 0 || dim > kMaxDim) throw ConfigError("quadrature: dimension must be 0..3");
  if (degree < 0 || degree > kMaxQuadratureDegree) throw ConfigError("quadrature: unsupported degree " + std::to_string(degree));
  static std::mutex mutex;
  static std::map<std::pair<int, int>, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({dim, degree});
  if (it != cache.end()) return it->second;
  QuadRule rule = build_rule(dim, degree);
  if (dim > 0 && exactness_defect(rule) > 1e-12)
    throw std::logic_error("quadrature: exactness audit failed for degree " + std::to_string(degree));
  cache.emplace(std::make_pair(dim, degree), rule);
  return rule;
}

QuadRule face_rule(int dim_minus_1, int degree) { return simplex_rule(dim_minus_1, degree); }

double reference_monomial_integral(int dim, const MultiIndex& alpha) {
  return multi_factorial(alpha) / factorial(total_degree(alpha) + dim);
}

double exactness_defect(const QuadRule& rule) {
  double worst = 0.0;
  const auto set = MultiIndexSet::get(rule.dim, rule.exact_degree);
  for (const auto& alpha : set->indices()) {
    double sum = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      double v = rule.weights[q];
      for (int i = 0; i < rule.dim; ++i) v *= std::pow(rule.points[q][i], alpha[i]);
      sum += v;
    }
    worst = std::max(worst, std::abs(sum - reference_monomial_integral(rule.dim, alpha)));
  }
  return worst;
}

}  // namespace c0ip
