#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "c0ip/error.hpp"
#include "c0ip/jets.hpp"

using namespace c0ip;

namespace {

constexpr double kPi = std::numbers::pi;

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// Central difference approximation of d^alpha u with step h in every direction.
double central_difference(const ExactSolution& u, const Point& x, const MultiIndex& alpha, double h) {
  double sum = 0.0;
  std::array<int, kMaxDim> j{};
  const int dim = u.dim();
  auto recurse = [&](auto&& self, int axis, double weight, Point p) -> void {
    if (axis == dim) {
      sum += weight * u.value(p);
      return;
    }
    const int n = alpha[axis];
    for (j[axis] = 0; j[axis] <= n; ++j[axis]) {
      Point q = p;
      q[axis] += (0.5 * n - j[axis]) * h;
      const double w = (j[axis] % 2 ? -1.0 : 1.0) * binomial(n, j[axis]) / std::pow(h, n);
      self(self, axis + 1, weight * w, q);
    }
  };
  recurse(recurse, 0, 1.0, x);
  return sum;
}

double richardson(const ExactSolution& u, const Point& x, const MultiIndex& alpha, double h) {
  return (4.0 * central_difference(u, x, alpha, h / 2) - central_difference(u, x, alpha, h)) / 3.0;
}

void check_against_differences(const ExactSolution& u, const Point& x, int max_order) {
  const Jet j = u.jet(x, max_order);
  for (int k = 0; k <= max_order; ++k)
    for_each_multi_index(u.dim(), k, [&](const MultiIndex& a) {
      const double exact = j.derivative(a);
      const double fd = richardson(u, x, a, k <= 2 ? 1e-3 : 2e-2);
      CAPTURE(u.name());
      CAPTURE(a[0]);
      CAPTURE(a[1]);
      CAPTURE(a[2]);
      CHECK(std::abs(exact - fd) / std::max(1.0, std::abs(exact)) < 1e-4);
    });
}

}  // namespace

TEST_CASE("sine product values") {
  const ExactSolution u = make_sine_product(2);
  CHECK(u.value({0.5, 0.5, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(u.value({0.0, 0.3, 0})) < 1e-15);
  CHECK(make_sine_product(3).value({0.5, 0.5, 0.5}) == doctest::Approx(1.0));
}

TEST_CASE("jets agree with finite differences") {
  check_against_differences(make_sine_product(1), {0.3, 0, 0}, 4);
  check_against_differences(make_sine_product(2), {0.3, 0.6, 0}, 4);
  check_against_differences(make_sine_product(3), {0.2, 0.45, 0.7}, 3);
  check_against_differences(make_ex2_square(), {0.4, 0.3, 0}, 4);
  check_against_differences(make_ex2_lshape(), {0.5, 0.4, 0}, 4);
  check_against_differences(make_ex2_lshape(), {-0.5, -0.3, 0}, 4);
  check_against_differences(make_ex2_lshape(), {-0.6, 0.2, 0}, 3);
  check_against_differences(make_poly_bubble(2, 3), {0.25, 0.8, 0}, 4);
}

TEST_CASE("m-Laplacian of the sine product") {
  const Point x{0.3, 0.7, 0};
  const ExactSolution u = make_sine_product(2);
  for (int m = 1; m <= 4; ++m) {
    const Jet j = u.jet(x, required_jet_order(m));
    CHECK(m_laplace(j, m) == doctest::Approx(std::pow(2.0, m) * std::pow(kPi, 2 * m) * j.value()).epsilon(1e-10));
  }
  const ExactSolution u3 = make_sine_product(3);
  const Point y{0.3, 0.7, 0.4};
  const Jet j3 = u3.jet(y, required_jet_order(3));
  CHECK(m_laplace(j3, 3) == doctest::Approx(27.0 * std::pow(kPi, 6) * j3.value()).epsilon(1e-10));
}

TEST_CASE("L-shape solution is harmonic") {
  const ExactSolution u = make_ex2_lshape();
  for (const Point& x : {Point{0.5, 0.5, 0}, Point{-0.4, -0.7, 0}, Point{-0.3, 0.1, 0}, Point{0.8, 0.05, 0}}) {
    const Jet j = u.jet(x, 6);
    CHECK(std::abs(laplacian_power(j, 1)) < 1e-10);
    CHECK(std::abs(m_laplace(j, 3)) < 1e-8);
  }
  // theta = 5 pi / 4 in the third quadrant.
  const double r2 = 0.5;
  CHECK(u.value({-0.5, -0.5, 0}) == doctest::Approx(std::pow(r2, 1.25) * std::sin(2.5 * 1.25 * kPi)));
  // The boundary rays theta = 0 and theta = 3 pi / 2.
  CHECK(std::abs(u.value({0.5, 0.0, 0})) < 1e-15);
  CHECK(std::abs(u.value({0.0, -0.5, 0}) - std::pow(0.25, 1.25) * std::sin(2.5 * 1.5 * kPi)) < 1e-14);
}

TEST_CASE("singular point handling") {
  const ExactSolution u = make_ex2_lshape();
  CHECK_THROWS_AS(u.jet({0, 0, 0}, 2), EvaluationError);
  CHECK(u.value({0, 0, 0}) == 0.0);
  CHECK(u.jet({0, 0, 0}, 1).derivative({1, 0, 0}) == 0.0);
  CHECK_THROWS_AS(make_ex2_square().jet({0, 0, 0}, 4), EvaluationError);
  CHECK(make_ex2_square().value({0, 0, 0}) == 0.0);
}

TEST_CASE("polynomial bubble") {
  const ExactSolution u = make_poly_bubble(1, 2);
  CHECK(u.jet({0, 0, 0}, 2).derivative({2, 0, 0}) == doctest::Approx(2.0));
  CHECK(u.jet({0.5, 0, 0}, 0).value() == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("homogeneous boundary traces") {
  // All derivatives of order below the vanishing order are zero on the boundary.
  const Point boundary_points[] = {{0.0, 0.3, 0}, {1.0, 0.6, 0}, {0.2, 0.0, 0}, {0.7, 1.0, 0}};
  struct Case {
    ExactSolution u;
    int m;
  };
  const Case cases[] = {{make_poly_bubble(2, 2), 2}, {make_poly_bubble(2, 3), 3}, {make_ex2_square(), 3}};
  for (const auto& c : cases) {
    CHECK(c.u.homogeneous_bc(c.m));
    for (const Point& x : boundary_points) {
      const Jet j = c.u.jet(x, c.m - 1);
      for (int k = 0; k < c.m; ++k)
        for_each_multi_index(2, k, [&](const MultiIndex& a) { CHECK(std::abs(j.derivative(a)) < 1e-12); });
    }
  }
  CHECK(make_sine_product(2).homogeneous_bc(1));
  CHECK_FALSE(make_sine_product(2).homogeneous_bc(2));
  CHECK_FALSE(make_ex2_square().homogeneous_bc(4));
  CHECK_FALSE(make_ex2_lshape().homogeneous_bc(1));

  const TraceData t = boundary_trace_data(make_poly_bubble(2, 2), {0.0, 0.4, 0}, 2);
  REQUIRE(t.lap.size() == 2);
  CHECK(std::abs(t.grad_lap[0][0]) < 1e-14);
  CHECK(std::abs(t.lap[0]) < 1e-14);
  // Delta u on x = 0: u_xx = 2 (y - y^2)^2.
  CHECK(t.lap[1] == doctest::Approx(2.0 * std::pow(0.4 - 0.16, 2)));
}

TEST_CASE("custom expressions") {
  const ExactSolution c = make_custom(2, "(* (sin (* pi x)) (sin (* pi y)))");
  const ExactSolution s = make_sine_product(2);
  const Point x{0.23, 0.61, 0};
  const Jet jc = c.jet(x, 5), js = s.jet(x, 5);
  for (size_t i = 0; i < jc.coefficients().size(); ++i)
    CHECK(jc.coefficients()[i] == doctest::Approx(js.coefficients()[i]).epsilon(1e-13));

  const ExactSolution p = make_custom(3, "(/ (pow (+ x 1) 2.5) (exp (- y z)))");
  CHECK(p.value({0.21, 0.3, 0.1}) == doctest::Approx(std::pow(1.21, 2.5) / std::exp(0.2)));
  check_against_differences(p, {0.21, 0.3, 0.1}, 3);
  CHECK(make_custom(1, "(cos (* 2 pi x))").value({0.25, 0, 0}) == doctest::Approx(0.0).scale(1.0));
  CHECK(make_custom(2, "(- x)").value({0.5, 0, 0}) == -0.5);

  for (const char* bad : {"(foo x)", "(pow x y)", "(+ x", "z", "(/ x)", "1.5q", "(sin x) y", ""})
    CHECK_THROWS_AS(make_custom(2, bad), EvaluationError);
  CHECK_THROWS_AS(make_custom(4, "x"), ConfigError);
}

TEST_CASE("linearity and arithmetic") {
  const ExactSolution a = make_sine_product(2);
  const ExactSolution b = make_poly_bubble(2, 2);
  const ExactSolution sum = make_custom(2, "(+ (* 2 (sin (* pi x)) (sin (* pi y))) (* -3 (pow (- x (* x x)) 2) (pow (- y (* y y)) 2)))");
  const Point x{0.4, 0.15, 0};
  for (int m = 1; m <= 3; ++m) {
    const int K = required_jet_order(m);
    const double lhs = m_laplace(sum.jet(x, K), m);
    const double rhs = 2.0 * m_laplace(a.jet(x, K), m) - 3.0 * m_laplace(b.jet(x, K), m);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
  const Jet j = a.jet(x, 4);
  const Jet q = (j * j) / j;
  for (size_t i = 0; i < j.coefficients().size(); ++i)
    CHECK(q.coefficients()[i] == doctest::Approx(j.coefficients()[i]).epsilon(1e-11));
  CHECK_THROWS_AS(pow(Jet::constant(j.space_ptr(), x, -1.0), 0.5), EvaluationError);
  CHECK_THROWS_AS(j.coefficient({5, 0, 0}), EvaluationError);
}
