#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "c0ip/analysis.hpp"
#include "c0ip/assembly.hpp"
#include "c0ip/jets.hpp"
#include "c0ip/solver.hpp"

namespace c0ip {

enum class Example {
  kEx1,        ///< sine product on the unit square
  kEx2Square,  ///< low-regularity solution on the unit square, m = 3
  kEx2LShape,  ///< corner singularity on the L-shaped domain, m = 3
  kEx3,        ///< sine product on the unit cube
  kBubble,     ///< polynomial bubble (x(1-x))^p per coordinate
  kCustom,     ///< user expression
};

const char* to_string(Example e);
Example parse_example(const std::string& s);

struct StudyConfig {
  Example example = Example::kEx1;
  int m = 2;
  int r = 2;
  double tau = 1.0;
  std::vector<int> ns{8, 16, 32, 64};
  int quad_boost = 0;
  int dim = 0;              ///< 0 picks the example's dimension; required for bubble and custom
  int bubble_power = 0;     ///< 0 means p = m
  std::string expression;   ///< custom example
  SolverOptions solver;
  bool single_thread = false;
  bool lift_boundary_data = true;
  long max_dofs = 400000;
  std::string out;          ///< output path prefix; empty for stdout only
  bool verify = false;

  int resolved_dim() const;
  std::string mesh_family() const;
  ProblemSpec problem() const;
  /// Throws ConfigError.
  void validate() const;
  /// Every resolved setting as key/value pairs.
  std::vector<std::pair<std::string, std::string>> echo() const;
  /// Set one option by its flag name (without leading dashes).
  void set(const std::string& key, const std::string& value);
};

/// key=value lines; '#' starts a comment.
StudyConfig read_config(std::istream& is, StudyConfig base = {});

ExactSolution make_solution(const StudyConfig& config);
Mesh make_mesh(const StudyConfig& config, int n);
/// Dof count of the continuous P_r space without building the mesh.
long estimate_dofs(const StudyConfig& config, int n);

struct LevelResult {
  ConvergenceRow row;
  SolveReport report;
  double uh_norm = 0.0;  ///< ||u_h||_{m,h}
  double seconds = 0.0;
};

/// Mesh, assemble, solve and measure the error for one n.
LevelResult run_level(const StudyConfig& config, int n);

struct StudyResult {
  ConvergenceTable table;
  std::vector<LevelResult> levels;
  bool valid = true;
  std::string diagnostic;
};

/// Run every n in order. An invalid solve stops the study with a diagnostic.
StudyResult run_study(const StudyConfig& config, std::ostream* progress = nullptr);

enum class CheckStatus { kPass, kFail, kSkip };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::kPass;
  std::string detail;
};

const char* to_string(CheckStatus s);

/// Property checks for one (m, r, tau) on small meshes: symmetry, positive
/// definiteness, specialization, consistency, exact reproduction, monitors.
std::vector<CheckResult> run_verification_suite(int m, int r, double tau);

}  // namespace c0ip
