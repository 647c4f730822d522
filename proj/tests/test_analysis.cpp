#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "c0ip/analysis.hpp"
#include "c0ip/error.hpp"

#include "support.hpp"

using namespace c0ip;

namespace {

ProblemSpec spec_for(int m, int r, int dim, int boost = 0) {
  ProblemSpec s;
  s.m = m;
  s.r = r;
  s.dim = dim;
  s.quad_boost = boost;
  return s;
}

Discretization make(const Mesh& mesh, int r, int m) { return Discretization(mesh, r, std::max(m - 1, 0), m); }

Eigen::VectorXd interpolate(const Discretization& disc, const std::function<double(const Point&)>& f) {
  Eigen::VectorXd v(disc.dofs().num_dofs);
  for (int i = 0; i < v.size(); ++i) v[i] = f(disc.dofs().points[i]);
  return v;
}

double sum_of_squares(const ErrorBreakdown& e) {
  double s = 0.0;
  for (double v : e.volume) s += v * v;
  for (double v : e.jump) s += v * v;
  return s;
}

}  // namespace

TEST_CASE("norm of the quartic bubble in 1D") {
  // u = (x(1-x))^2 with u_h = 0: ||u||^2 = 1/630, ||u'||^2 = 2/105, ||u''||^2 = 4/5.
  const ProblemSpec s = spec_for(2, 4, 1);
  const Discretization disc = make(build_unit_interval_mesh(3), 4, 2);
  const ErrorBreakdown e = discrete_hm_error(s, disc, Eigen::VectorXd::Zero(disc.dofs().num_dofs), make_poly_bubble(1, 2));
  REQUIRE(e.volume.size() == 3);
  REQUIRE(e.jump.size() == 1);
  CHECK(e.volume[0] * e.volume[0] == doctest::Approx(1.0 / 630).epsilon(1e-12));
  CHECK(e.volume[1] * e.volume[1] == doctest::Approx(2.0 / 105).epsilon(1e-12));
  CHECK(e.volume[2] * e.volume[2] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(e.jump[0] == doctest::Approx(0.0));
  CHECK(e.total * e.total == doctest::Approx(1.0 / 630 + 2.0 / 105 + 0.8).epsilon(1e-12));
}

TEST_CASE("interpolant of a polynomial in the space has zero error") {
  const ExactSolution u = make_custom(2, "(* (* x (- 1 x)) (* y (- 1 y)))");
  for (int m : {2, 3}) {
    const ProblemSpec s = spec_for(m, 4, 2);
    const Discretization disc = make(build_unit_square_mesh(3), 4, m);
    const ErrorBreakdown e = discrete_hm_error(s, disc, interpolate(disc, [&](const Point& x) { return u.value(x); }), u);
    CHECK(e.total <= 1e-9);
  }
}

TEST_CASE("jump weight of the discrete norm") {
  // v = |x - 1/2| on the unit square: ||[[Dv]]||^2 = 4 on x = 1/2 plus 1 on each boundary side.
  const ProblemSpec s = spec_for(2, 2, 2);
  const Discretization disc = make(build_unit_square_mesh(2), 2, 2);
  const Eigen::VectorXd v = interpolate(disc, [](const Point& x) { return std::abs(x[0] - 0.5); });
  const ErrorBreakdown e = discrete_hm_norm(s, disc, v);
  const double h = disc.mesh().h_global;
  CHECK(e.jump[0] * e.jump[0] == doctest::Approx(8.0 / h).epsilon(1e-12));
  CHECK(e.volume[0] * e.volume[0] == doctest::Approx(1.0 / 12).epsilon(1e-12));
  CHECK(e.volume[1] * e.volume[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.volume[2] == doctest::Approx(0.0));
}

TEST_CASE("breakdown parts add up and scale homogeneously") {
  const ProblemSpec s = spec_for(3, 3, 2);
  const Discretization disc = make(build_unit_square_mesh(2), 3, 3);
  const ExactSolution u = make_sine_product(2);
  const Eigen::VectorXd v = interpolate(disc, [](const Point& x) { return std::sin(3 * x[0]) * std::cos(2 * x[1]); });
  const ErrorBreakdown e = discrete_hm_error(s, disc, v, u);
  CHECK(e.total * e.total == doctest::Approx(sum_of_squares(e)).epsilon(1e-12));
  for (double part : e.volume) CHECK(part >= 0.0);
  for (double part : e.jump) CHECK(part >= 0.0);

  const ErrorBreakdown a = discrete_hm_norm(s, disc, v);
  const ErrorBreakdown b = discrete_hm_norm(s, disc, -2.5 * v);
  for (size_t i = 0; i < a.volume.size(); ++i) CHECK(b.volume[i] == doctest::Approx(2.5 * a.volume[i]).epsilon(1e-12));
  for (size_t j = 0; j < a.jump.size(); ++j) CHECK(b.jump[j] == doctest::Approx(2.5 * a.jump[j]).epsilon(1e-12));
}

TEST_CASE("continuous functions have no value jumps") {
  const Discretization disc = make(build_unit_square_mesh(3), 3, 2);
  const Eigen::VectorXd v = interpolate(disc, [](const Point& x) { return std::exp(x[0]) * std::sin(5 * x[1]); });
  const QuadRule rule = face_rule(1, 8);
  double worst = 0.0;
  for (int f = 0; f < static_cast<int>(disc.faces().faces.size()); ++f) {
    if (disc.faces().faces[f].is_boundary()) continue;
    const FaceOperators ops = face_operators(disc, f, rule, 1);
    Eigen::VectorXd local(ops.num_local);
    for (int k = 0; k < ops.num_local; ++k) local[k] = v[ops.dofs[k]];
    worst = std::max(worst, (ops.jump(Trace::kValue, 0).transpose() * local).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("experimental order of convergence") {
  CHECK(eoc(1e-1, 1.0, 5e-2, 0.5) == doctest::Approx(1.0));
  CHECK(std::isnan(eoc(0.0, 1.0, 1e-2, 0.5)));
  CHECK(std::isnan(eoc(1e-1, 1.0, -1.0, 0.5)));

  ConvergenceTable t;
  const double errors[] = {1.1095e-1, 5.9870e-2, 3.0564e-2, 1.5388e-2};
  for (int i = 0; i < 4; ++i) {
    ConvergenceRow row;
    row.n = 8 << i;
    row.h = 1.0 / row.n;
    row.error.total = errors[i];
    t.rows.push_back(row);
  }
  t.compute_eoc();
  CHECK_FALSE(t.rows[0].eoc_valid);
  CHECK(std::round(t.rows[1].eoc * 100) / 100 == doctest::Approx(0.89));
  CHECK(std::round(t.rows[2].eoc * 100) / 100 == doctest::Approx(0.97));
  CHECK(std::round(t.rows[3].eoc * 100) / 100 == doctest::Approx(0.99));
  CHECK(std::round(eoc(9.0579e-2, 1.0 / 8, 2.5477e-2, 1.0 / 16) * 100) / 100 == doctest::Approx(1.83));
}

TEST_CASE("convergence table output") {
  ConvergenceTable t;
  t.metadata = {{"m", "2"}, {"tau", "1"}};
  for (int n : {2, 4}) {
    ConvergenceRow row;
    row.n = n;
    row.h = 1.0 / n;
    row.dofs = n * n;
    row.error.volume = {1.0 / n, 2.0 / n, 3.0 / n};
    row.error.jump = {0.5 / n};
    row.error.total = 4.0 / n;
    t.rows.push_back(row);
  }
  t.compute_eoc();
  std::ostringstream csv, md;
  t.write_csv(csv);
  t.write_markdown(md);
  CHECK(csv.str().find("# m = 2\n# tau = 1\n") == 0);
  CHECK(csv.str().find("n,h,dofs,err_total,err_L2,err_D1,err_D2,err_jump1,residual,eoc\n") != std::string::npos);
  CHECK(md.str().find("| 1/h |") != std::string::npos);
  CHECK(md.str().find("1.00") != std::string::npos);
}

TEST_CASE("consistency of the exact solution") {
  SUBCASE("sine product, m = 2, r = 3") {
    const ProblemSpec s = spec_for(2, 3, 2, 4);
    CHECK(consistency_residual(s, make(build_unit_square_mesh(2), 3, 2), make_sine_product(2)).relative() <= 1e-8);
  }
  SUBCASE("polynomial bubble, m = 2, r = 4") {
    const ProblemSpec s = spec_for(2, 4, 2);
    CHECK(consistency_residual(s, make(build_unit_square_mesh(2), 4, 2), make_poly_bubble(2, 2)).relative() <= 1e-9);
  }
  SUBCASE("polynomial bubbles, m = 3 and 4, with exact quadrature") {
    CHECK(consistency_residual(spec_for(3, 3, 2, 8), make(build_unit_square_mesh(3), 3, 3), make_poly_bubble(2, 3))
              .relative() <= 1e-9);
    CHECK(consistency_residual(spec_for(4, 4, 2, 10), make(build_unit_square_mesh(2), 4, 4), make_poly_bubble(2, 4))
              .relative() <= 1e-9);
  }
  SUBCASE("corner singularity on the L-shape") {
    const ProblemSpec s = spec_for(3, 3, 2);
    CHECK(consistency_residual(s, make(build_lshape_mesh(1), 3, 3), make_ex2_lshape()).relative() <= 1e-6);
  }
  SUBCASE("custom expressions are consistent and differ from other data") {
    const ProblemSpec s = spec_for(2, 2, 2);
    const ExactSolution wrong = make_custom(2, "(* (sin (* pi x)) (sin (* 2 (* pi y))))");
    const ConsistencyResult c = consistency_residual(s, make(build_unit_square_mesh(2), 2, 2), wrong);
    CHECK(c.relative() <= 1e-2);
    const Discretization disc = make(build_unit_square_mesh(2), 2, 2);
    const Eigen::VectorXd f1 = assemble_source(s, disc, make_sine_product(2));
    const Eigen::VectorXd f2 = assemble_source(s, disc, wrong);
    CHECK((f1 - f2).cwiseAbs().maxCoeff() > 1.0);
  }
}

TEST_CASE("Rayleigh monitors") {
  SUBCASE("power iteration matches a dense generalized eigensolve") {
    for (int m : {2, 3}) {
      const ProblemSpec s = spec_for(m, m, 2);
      const Discretization disc = make(build_unit_square_mesh(4), m, m);
      const MonitorForms f = monitor_forms(s, disc);
      const Eigen::MatrixXd N = f.norm.to_dense();
      const Eigen::MatrixXd D = f.volume.to_dense() + f.penalty.to_dense();
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(N, D);
      const CsrMatrix sum = from_dense(D);
      const double estimate = max_rayleigh_quotient(f.norm, sum);
      CHECK(estimate <= es.eigenvalues().maxCoeff() * (1 + 1e-8));
      CHECK(estimate >= 0.99 * es.eigenvalues().maxCoeff());
    }
  }
  SUBCASE("m = 1 has no penalty monitor") {
    const std::vector<MonitorLevel> l = rayleigh_monitors(spec_for(1, 1, 2), {2, 4});
    CHECK_FALSE(l[0].penalty_dominance.has_value());
    CHECK(std::isfinite(l[1].norm_equivalence));
  }
  SUBCASE("m = 2 penalty dominance is exactly one") {
    // For continuous v the first order jumps reduce to normal derivative jumps, which is S_h.
    for (const MonitorLevel& l : rayleigh_monitors(spec_for(2, 2, 2), {2, 4, 8}))
      CHECK(*l.penalty_dominance == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("sequences are finite") {
    for (const MonitorLevel& l : rayleigh_monitors(spec_for(3, 3, 2), {2, 4})) {
      CHECK(std::isfinite(*l.penalty_dominance));
      CHECK(std::isfinite(l.norm_equivalence));
      CHECK(l.norm_equivalence >= 1.0);
    }
  }
  SUBCASE("dof cap") { CHECK_THROWS_AS(rayleigh_monitors(spec_for(2, 2, 2), {64}), ConfigError); }
}
