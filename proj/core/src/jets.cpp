#include "c0ip/jets.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "c0ip/error.hpp"

namespace c0ip {

JetSpace::JetSpace(int dim, int order) : set_(MultiIndexSet::get(dim, order)) {
  const auto& s = *set_;
  products_.resize(s.size());
  for (int i = 0; i < s.size(); ++i) {
    const int room = order - total_degree(s[i]);
    for (int j = 0; j < s.degree_begin(room + 1); ++j) {
      MultiIndex sum{};
      for (int k = 0; k < kMaxDim; ++k) sum[k] = s[i][k] + s[j][k];
      products_[i].push_back({j, s.find(sum)});
    }
  }
}

std::shared_ptr<const JetSpace> JetSpace::get(int dim, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetSpace>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{dim, order}];
  if (!slot) slot = std::make_shared<const JetSpace>(dim, order);
  return slot;
}

Jet::Jet(std::shared_ptr<const JetSpace> space, const Point& center)
    : space_(std::move(space)), center_(center), coeffs_(space_->size(), 0.0) {}

Jet Jet::constant(std::shared_ptr<const JetSpace> space, const Point& center, double value) {
  Jet j(std::move(space), center);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(std::shared_ptr<const JetSpace> space, const Point& center, int k) {
  Jet j(std::move(space), center);
  j.coeffs_[0] = center[k];
  if (j.order() >= 1) {
    MultiIndex e{};
    e[k] = 1;
    j.coeffs_[j.space().set().find(e)] = 1.0;
  }
  return j;
}

double Jet::coefficient(const MultiIndex& alpha) const {
  const int i = space_->set().find(alpha);
  if (i < 0) throw EvaluationError("jet: multi-index exceeds truncation order");
  return coeffs_[i];
}

double Jet::derivative(const MultiIndex& alpha) const { return coefficient(alpha) * multi_factorial(alpha); }

Jet& Jet::operator+=(const Jet& o) {
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

Jet& Jet::operator+=(double s) {
  coeffs_[0] += s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet out(a.space_, a.center_);
  const auto& sp = *a.space_;
  for (int i = 0; i < sp.size(); ++i) {
    const double ai = a.coeffs_[i];
    if (ai == 0.0) continue;
    for (const auto& t : sp.products(i)) out.coeffs_[t.result] += ai * b.coeffs_[t.right];
  }
  return out;
}

Jet compose(const Jet& g, std::span<const double> taylor) {
  Jet s = g;
  s.coefficients()[0] = 0.0;
  const int n = std::min<int>(static_cast<int>(taylor.size()) - 1, g.order());
  Jet out = Jet::constant(g.space_ptr(), g.center(), taylor[n]);
  for (int k = n - 1; k >= 0; --k) {
    out = out * s;
    out.coefficients()[0] += taylor[k];
  }
  return out;
}

namespace {

std::vector<double> trig_taylor(double t0, int order, bool cosine) {
  const double s = std::sin(t0), c = std::cos(t0);
  // derivatives of sin cycle: sin, cos, -sin, -cos
  const double cyc_sin[4] = {s, c, -s, -c};
  const double cyc_cos[4] = {c, -s, -c, s};
  std::vector<double> t(order + 1);
  for (int k = 0; k <= order; ++k) t[k] = (cosine ? cyc_cos[k % 4] : cyc_sin[k % 4]) / factorial(k);
  return t;
}

}  // namespace

Jet sin(const Jet& g) { return compose(g, trig_taylor(g.value(), g.order(), false)); }
Jet cos(const Jet& g) { return compose(g, trig_taylor(g.value(), g.order(), true)); }

Jet exp(const Jet& g) {
  std::vector<double> t(g.order() + 1);
  const double e = std::exp(g.value());
  for (int k = 0; k <= g.order(); ++k) t[k] = e / factorial(k);
  return compose(g, t);
}

Jet pow(const Jet& g, double a) {
  const bool integral = a >= 0.0 && a == std::floor(a) && a <= 64.0;
  if (integral) {
    Jet out = Jet::constant(g.space_ptr(), g.center(), 1.0);
    Jet base = g;
    for (auto e = static_cast<unsigned>(a); e > 0; e >>= 1) {
      if (e & 1u) out = out * base;
      if (e > 1) base = base * base;
    }
    return out;
  }
  const double t0 = g.value();
  // t^a is C^order at t = 0 when a > order, with all tabulated derivatives zero.
  if (t0 == 0.0 && a > g.order()) return Jet(g.space_ptr(), g.center());
  if (!(t0 > 0.0)) throw EvaluationError("jet pow: non-integer power of a non-positive base (singular point)");
  std::vector<double> t(g.order() + 1);
  double binom = 1.0;  // generalized binomial(a, k)
  for (int k = 0; k <= g.order(); ++k) {
    t[k] = binom * std::pow(t0, a - k);
    binom *= (a - k) / (k + 1);
  }
  return compose(g, t);
}

Jet reciprocal(const Jet& g) {
  const double t0 = g.value();
  if (t0 == 0.0) throw EvaluationError("jet reciprocal: division by zero");
  std::vector<double> t(g.order() + 1);
  double p = 1.0 / t0;
  for (int k = 0; k <= g.order(); ++k) {
    t[k] = p;
    p *= -1.0 / t0;
  }
  return compose(g, t);
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet atan2(const Jet& y, const Jet& x, double branch_start) {
  const double x0 = x.value(), y0 = y.value();
  if (x0 == 0.0 && y0 == 0.0) throw EvaluationError("jet atan2: angle undefined at the origin");
  double theta0 = std::atan2(y0, x0);
  const double two_pi = 2.0 * std::numbers::pi;
  while (theta0 < branch_start) theta0 += two_pi;
  while (theta0 >= branch_start + two_pi) theta0 -= two_pi;
  // Rotate so the increment is atan(q / p) with q(center) = 0 and p(center) > 0.
  const Jet p = x * x0 + y * y0;
  const Jet q = y * x0 - x * y0;
  const Jet ratio = q / p;
  std::vector<double> t(x.order() + 1, 0.0);
  for (int k = 1; k <= x.order(); k += 2) t[k] = ((k / 2) % 2 == 0 ? 1.0 : -1.0) / k;
  Jet out = compose(ratio, t);
  out.coefficients()[0] = theta0;
  return out;
}

double laplacian_power(const Jet& jet, int k) {
  if (jet.order() < 2 * k) throw EvaluationError("laplacian_power: insufficient jet order");
  // Delta^k = sum_{|beta|=k} k!/beta! d^{2 beta}
  double sum = 0.0;
  for_each_multi_index(jet.dim(), k, [&](const MultiIndex& b) {
    MultiIndex two{2 * b[0], 2 * b[1], 2 * b[2]};
    sum += factorial(k) / multi_factorial(b) * jet.derivative(two);
  });
  return sum;
}

double gradient_laplacian_power(const Jet& jet, int k, int c) {
  if (jet.order() < 2 * k + 1) throw EvaluationError("gradient_laplacian_power: insufficient jet order");
  double sum = 0.0;
  for_each_multi_index(jet.dim(), k, [&](const MultiIndex& b) {
    MultiIndex a{2 * b[0], 2 * b[1], 2 * b[2]};
    ++a[c];
    sum += factorial(k) / multi_factorial(b) * jet.derivative(a);
  });
  return sum;
}

double m_laplace(const Jet& jet, int m) {
  const double v = laplacian_power(jet, m);
  return (m % 2 == 0) ? v : -v;
}

ExactSolution::ExactSolution(SolutionId id, int dim, std::string name, JetFunction fn,
                             std::function<bool(int)> homogeneous, bool singular_at_origin)
    : id_(id),
      dim_(dim),
      name_(std::move(name)),
      fn_(std::move(fn)),
      homogeneous_(std::move(homogeneous)),
      singular_at_origin_(singular_at_origin) {}

Jet ExactSolution::jet(const Point& x, int order) const {
  if (singular_at_origin_ && order >= 2) {
    double r2 = 0.0;
    for (int k = 0; k < dim_; ++k) r2 += x[k] * x[k];
    if (r2 < 1e-28) throw EvaluationError(name_ + ": jet requested at the singular point (quadrature placement error)");
  }
  if (singular_at_origin_) {
    double r2 = 0.0;
    for (int k = 0; k < dim_; ++k) r2 += x[k] * x[k];
    // Both singular solutions vanish to first order at the origin.
    if (r2 < 1e-28) return Jet(JetSpace::get(dim_, order), x);
  }
  auto space = JetSpace::get(dim_, order);
  std::vector<Jet> vars;
  vars.reserve(dim_);
  for (int k = 0; k < dim_; ++k) vars.push_back(Jet::variable(space, x, k));
  return fn_(vars);
}

double ExactSolution::value(const Point& x) const { return jet(x, 0).value(); }

ExactSolution make_sine_product(int dim) {
  auto fn = [](std::span<const Jet> v) {
    Jet out = sin(v[0] * std::numbers::pi);
    for (size_t k = 1; k < v.size(); ++k) out = out * sin(v[k] * std::numbers::pi);
    return out;
  };
  // Only u itself vanishes on the boundary; the normal derivative does not.
  return ExactSolution(SolutionId::kSineProduct, dim, "sine_product", fn, [](int m) { return m <= 1; });
}

ExactSolution make_ex2_square() {
  auto fn = [](std::span<const Jet> v) {
    const Jet& x = v[0];
    const Jet& y = v[1];
    const Jet r2 = x * x + y * y;
    const Jet bx = x - x * x;
    const Jet by = y - y * y;
    return pow(r2, 7.1 / 4.0) * pow(bx, 3.0) * pow(by, 3.0);
  };
  return ExactSolution(SolutionId::kEx2Square, 2, "ex2_square", fn, [](int m) { return m <= 3; }, true);
}

ExactSolution make_ex2_lshape() {
  auto fn = [](std::span<const Jet> v) {
    const Jet& x = v[0];
    const Jet& y = v[1];
    const Jet r2 = x * x + y * y;
    // The cut at -pi/4 lies inside the excluded quadrant, so theta spans [0, 3 pi / 2].
    const Jet theta = atan2(y, x, -std::numbers::pi / 4.0);
    return pow(r2, 1.25) * sin(theta * 2.5);
  };
  return ExactSolution(SolutionId::kEx2LShape, 2, "ex2_lshape", fn, [](int) { return false; }, true);
}

ExactSolution make_poly_bubble(int dim, int power) {
  auto fn = [power](std::span<const Jet> v) {
    Jet out = pow(v[0] - v[0] * v[0], power);
    for (size_t k = 1; k < v.size(); ++k) out = out * pow(v[k] - v[k] * v[k], power);
    return out;
  };
  return ExactSolution(SolutionId::kPolyBubble, dim, "poly_bubble", fn, [power](int m) { return m <= power; });
}

TraceData boundary_trace_data(const ExactSolution& u, const Point& x, int m) {
  const Jet j = u.jet(x, std::max(2 * m - 1, 0));
  TraceData t;
  for (int k = 0; k < m; ++k) {
    t.lap.push_back(laplacian_power(j, k));
    Point g{};
    for (int c = 0; c < u.dim(); ++c) g[c] = gradient_laplacian_power(j, k, c);
    t.grad_lap.push_back(g);
  }
  return t;
}

}  // namespace c0ip
