#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "c0ip/error.hpp"
#include "c0ip/study.hpp"

using namespace c0ip;

namespace {

std::string lookup(const std::vector<std::pair<std::string, std::string>>& kv, const std::string& key) {
  for (const auto& [k, v] : kv)
    if (k == key) return v;
  return "<missing>";
}

}  // namespace

TEST_CASE("config file parsing") {
  std::istringstream in(
      "# a comment\n"
      "example = ex2-lshape\n"
      "m=3\n"
      "r = 3   # trailing comment\n"
      "tau = 12.5\n"
      "n = 4, 8 ,16\n"
      "solver = cg\n"
      "\n"
      "lift-boundary-data = false\n");
  const StudyConfig c = read_config(in);
  CHECK(c.example == Example::kEx2LShape);
  CHECK(c.m == 3);
  CHECK(c.r == 3);
  CHECK(c.tau == 12.5);
  CHECK(c.ns == std::vector<int>{4, 8, 16});
  CHECK(c.solver.method == SolverMethod::kCG);
  CHECK_FALSE(c.lift_boundary_data);
  CHECK(c.mesh_family() == "lshape");
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("bad config input") {
  StudyConfig c;
  CHECK_THROWS_AS(c.set("colour", "red"), ConfigError);
  CHECK_THROWS_AS(c.set("m", "2.5"), ConfigError);
  CHECK_THROWS_AS(c.set("tau", "big"), ConfigError);
  CHECK_THROWS_AS(c.set("single-thread", "maybe"), ConfigError);
  CHECK_THROWS_AS(c.set("example", "ex9"), ConfigError);
  std::istringstream no_eq("m 2\n");
  CHECK_THROWS_WITH_AS(read_config(no_eq), doctest::Contains("line 1"), ConfigError);
}

TEST_CASE("validation") {
  StudyConfig c;
  CHECK_NOTHROW(c.validate());
  c.ns = {8, 8};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.ns = {0, 4};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.ns = {4};
  c.dim = 3;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.dim = 0;
  c.example = Example::kCustom;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.expression = "(* x y)";
  CHECK_NOTHROW(c.validate());
  c.m = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("echo lists every resolved setting") {
  StudyConfig c;
  c.example = Example::kEx3;
  c.m = 2;
  c.r = 3;
  const auto e = c.echo();
  CHECK(lookup(e, "dim") == "3");
  CHECK(lookup(e, "mesh") == "cube");
  CHECK(lookup(e, "n") == "8,16,32,64");
  CHECK(lookup(e, "volume-quadrature-degree") != "<missing>");
  CHECK(lookup(e, "face-quadrature-degree") != "<missing>");
  CHECK(lookup(e, "error-quadrature-degree") != "<missing>");
  CHECK(lookup(e, "solver") == "direct");
  CHECK(lookup(e, "bubble-power") == "<missing>");
}

TEST_CASE("dof estimates match the built spaces") {
  for (Example ex : {Example::kEx1, Example::kEx2LShape, Example::kEx3}) {
    StudyConfig c;
    c.example = ex;
    c.m = 2;
    c.r = 3;
    for (int n : {1, 2}) {
      const Discretization disc(make_mesh(c, n), c.r, 1, 2);
      CHECK(estimate_dofs(c, n) == disc.dofs().num_dofs);
    }
  }
}

TEST_CASE("a level above the dof cap is refused") {
  StudyConfig c;
  c.max_dofs = 100;
  CHECK_THROWS_AS(run_level(c, 16), ConfigError);
}

TEST_CASE("a small study converges at a stable tau") {
  StudyConfig c;
  c.tau = 10.0;
  c.ns = {4, 8, 16};
  std::ostringstream progress;
  const StudyResult res = run_study(c, &progress);
  REQUIRE(res.valid);
  REQUIRE(res.table.rows.size() == 3);
  CHECK(res.table.rows[2].eoc == doctest::Approx(1.0).epsilon(0.1));
  CHECK(res.levels[0].report.factorization == "cholmod-llt");
  CHECK(progress.str().find("n=16") != std::string::npos);
}

TEST_CASE("the unlifted scheme solves homogeneous problems") {
  StudyConfig c;
  c.example = Example::kBubble;
  c.m = 2;
  c.r = 2;
  c.tau = 10.0;
  c.lift_boundary_data = false;
  const LevelResult a = run_level(c, 8);
  c.lift_boundary_data = true;
  const LevelResult b = run_level(c, 8);
  CHECK(a.row.error.total == doctest::Approx(b.row.error.total).epsilon(1e-8));
}

TEST_CASE("verification suite names its checks") {
  const std::vector<CheckResult> checks = run_verification_suite(2, 2, 10.0);
  std::vector<std::string> names;
  for (const auto& c : checks) names.push_back(c.name);
  for (const char* expected : {"symmetry", "positive definite", "specialization", "consistency"})
    CHECK(std::find(names.begin(), names.end(), expected) != names.end());
  for (const auto& c : checks)
    if (c.name == "symmetry" || c.name == "positive definite" || c.name == "consistency")
      CHECK_MESSAGE(c.status == CheckStatus::kPass, c.name << ": " << c.detail);
}
