#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "c0ip/mesh.hpp"
#include "c0ip/multi_index.hpp"

namespace c0ip {

/// Multi-index set of a truncated Taylor expansion plus its product table.
class JetSpace {
 public:
  JetSpace(int dim, int order);
  static std::shared_ptr<const JetSpace> get(int dim, int order);

  int dim() const { return set_->dim(); }
  int order() const { return set_->degree(); }
  int size() const { return set_->size(); }
  const MultiIndexSet& set() const { return *set_; }

  struct Term {
    int right;
    int result;
  };
  /// For left factor i: every (j, i + j) with |i| + |j| <= order.
  const std::vector<Term>& products(int i) const { return products_[i]; }

 private:
  std::shared_ptr<const MultiIndexSet> set_;
  std::vector<std::vector<Term>> products_;
};

/**
 * Truncated multivariate Taylor expansion about a center point. Coefficient
 * alpha is d^alpha f(center) / alpha!.
 */
class Jet {
 public:
  Jet() = default;
  Jet(std::shared_ptr<const JetSpace> space, const Point& center);

  static Jet constant(std::shared_ptr<const JetSpace> space, const Point& center, double value);
  /// The coordinate function x_k.
  static Jet variable(std::shared_ptr<const JetSpace> space, const Point& center, int k);

  int dim() const { return space_->dim(); }
  int order() const { return space_->order(); }
  const JetSpace& space() const { return *space_; }
  const std::shared_ptr<const JetSpace>& space_ptr() const { return space_; }
  const Point& center() const { return center_; }

  double value() const { return coeffs_[0]; }
  double coefficient(const MultiIndex& alpha) const;
  /// d^alpha f(center).
  double derivative(const MultiIndex& alpha) const;
  std::vector<double>& coefficients() { return coeffs_; }
  const std::vector<double>& coefficients() const { return coeffs_; }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  Jet& operator+=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator-(Jet a) { return a *= -1.0; }

 private:
  std::shared_ptr<const JetSpace> space_;
  Point center_{};
  std::vector<double> coeffs_;
};

/// f(g) = sum_k taylor[k] (g - g(center))^k, taylor[k] = f^(k)(g0) / k!.
Jet compose(const Jet& g, std::span<const double> taylor);

Jet sin(const Jet& g);
Jet cos(const Jet& g);
Jet exp(const Jet& g);
/// g^a; non-integer a requires g(center) > 0.
Jet pow(const Jet& g, double a);
Jet reciprocal(const Jet& g);
Jet operator/(const Jet& a, const Jet& b);
/// Polar angle of (x, y), with the center value taken in [branch_start, branch_start + 2 pi).
Jet atan2(const Jet& y, const Jet& x, double branch_start);

/// Delta^k f at the center (requires order >= 2k).
double laplacian_power(const Jet& jet, int k);
/// d/dx_c Delta^k f at the center (requires order >= 2k + 1).
double gradient_laplacian_power(const Jet& jet, int k, int c);
/// (-1)^m Delta^m f at the center.
double m_laplace(const Jet& jet, int m);

enum class SolutionId {
  kSineProduct,   ///< prod_i sin(pi x_i) on the unit interval/square/cube
  kEx2Square,     ///< (x^2+y^2)^{7.1/4} (x-x^2)^3 (y-y^2)^3 on the unit square
  kEx2LShape,     ///< r^{2.5} sin(2.5 theta) on the L-shaped domain
  kPolyBubble,    ///< prod_i (x_i (1 - x_i))^p on the unit interval/square/cube
  kCustom,
};

/// Smooth exact solution with jet evaluation; the single source of f,
/// boundary data and exact derivatives.
class ExactSolution {
 public:
  using JetFunction = std::function<Jet(std::span<const Jet>)>;

  ExactSolution(SolutionId id, int dim, std::string name, JetFunction fn, std::function<bool(int)> homogeneous,
                bool singular_at_origin = false);

  SolutionId id() const { return id_; }
  int dim() const { return dim_; }
  const std::string& name() const { return name_; }

  /// Jet of order K about the point; throws EvaluationError at a singular point.
  Jet jet(const Point& x, int order) const;
  double value(const Point& x) const;
  /// Whether u, du/dnu, ..., d^{m-1}u/dnu^{m-1} all vanish on the boundary.
  bool homogeneous_bc(int m) const { return homogeneous_(m); }

 private:
  SolutionId id_;
  int dim_;
  std::string name_;
  JetFunction fn_;
  std::function<bool(int)> homogeneous_;
  bool singular_at_origin_;
};

/// Jet order needed for m: max(2m, m + 1).
inline int required_jet_order(int m) { return std::max(2 * m, m + 1); }

ExactSolution make_sine_product(int dim);
ExactSolution make_ex2_square();
ExactSolution make_ex2_lshape();
ExactSolution make_poly_bubble(int dim, int power);
/// Prefix expression such as "(* (sin (* pi x)) (sin (* pi y)))".
ExactSolution make_custom(int dim, const std::string& expression);

inline Jet jet_of_solution(const ExactSolution& u, const Point& x, int order) { return u.jet(x, order); }

/// Traces needed by the boundary data terms: Delta^k u and grad Delta^k u for k < m.
struct TraceData {
  std::vector<double> lap;
  std::vector<Point> grad_lap;
};

TraceData boundary_trace_data(const ExactSolution& u, const Point& x, int m);

}  // namespace c0ip
