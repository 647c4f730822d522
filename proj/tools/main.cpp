#include <CLI11.hpp>

#include <Eigen/Core>
#include <fstream>
#include <iostream>
#include <sstream>

#include "c0ip/error.hpp"
#include "c0ip/study.hpp"

namespace {

enum ExitCode { kOk = 0, kInvalidConfig = 2, kSolverFailure = 3, kVerificationFailure = 4 };

int run_verify(const c0ip::StudyConfig& cfg) {
  std::cout << "# verification suite m=" << cfg.m << " r=" << cfg.r << " tau=" << cfg.tau << "\n";
  bool ok = true;
  for (const auto& c : c0ip::run_verification_suite(cfg.m, cfg.r, cfg.tau)) {
    std::cout << c0ip::to_string(c.status) << "  " << c.name << ": " << c.detail << "\n";
    if (c.status == c0ip::CheckStatus::kFail) ok = false;
  }
  return ok ? kOk : kVerificationFailure;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  return static_cast<bool>(os);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"C0 interior penalty solver for (-1)^m Delta^m u = f"};
  std::string config_file, example, n_list, solver, lift;
  c0ip::StudyConfig cfg;
  app.add_option("--config", config_file, "key=value file; command line flags override it");
  app.add_option("--example", example, "ex1|ex2-square|ex2-lshape|ex3|bubble|custom");
  auto* o_m = app.add_option("--m", cfg.m, "order of the operator");
  auto* o_r = app.add_option("--r", cfg.r, "polynomial degree");
  auto* o_tau = app.add_option("--tau", cfg.tau, "penalty parameter (default 1)");
  app.add_option("--n", n_list, "comma separated mesh sizes (default 8,16,32,64)");
  auto* o_qb = app.add_option("--quad-boost", cfg.quad_boost, "extra quadrature degree");
  auto* o_dim = app.add_option("--dim", cfg.dim, "dimension for bubble and custom examples");
  auto* o_bp = app.add_option("--bubble-power", cfg.bubble_power, "exponent p of the bubble (default m)");
  auto* o_expr = app.add_option("--expression", cfg.expression, "prefix expression for the custom example");
  app.add_option("--solver", solver, "direct|cg");
  app.add_option("--lift-boundary-data", lift, "true|false");
  auto* o_cap = app.add_option("--max-dofs", cfg.max_dofs, "refuse meshes above this dof estimate");
  auto* o_single = app.add_flag("--single-thread", cfg.single_thread, "run on one thread");
  auto* o_out = app.add_option("--out", cfg.out, "write <out>.csv and <out>.md");
  auto* o_verify = app.add_flag("--verify", cfg.verify, "run the verification suite instead of a study");
  CLI11_PARSE(app, argc, argv);

  try {
    c0ip::StudyConfig merged;
    if (!config_file.empty()) {
      std::ifstream is(config_file);
      if (!is) throw c0ip::ConfigError("cannot open config file " + config_file);
      merged = c0ip::read_config(is);
    }
    if (!example.empty()) merged.example = c0ip::parse_example(example);
    if (*o_m) merged.m = cfg.m;
    if (*o_r) merged.r = cfg.r;
    if (*o_tau) merged.tau = cfg.tau;
    if (!n_list.empty()) merged.set("n", n_list);
    if (*o_qb) merged.quad_boost = cfg.quad_boost;
    if (*o_dim) merged.dim = cfg.dim;
    if (*o_bp) merged.bubble_power = cfg.bubble_power;
    if (*o_expr) merged.expression = cfg.expression;
    if (!solver.empty()) merged.set("solver", solver);
    if (!lift.empty()) merged.set("lift-boundary-data", lift);
    if (*o_cap) merged.max_dofs = cfg.max_dofs;
    if (*o_single) merged.single_thread = true;
    if (*o_out) merged.out = cfg.out;
    if (*o_verify) merged.verify = true;
    cfg = merged;
    if (cfg.single_thread) Eigen::setNbThreads(1);

    if (cfg.verify) {
      cfg.problem().validate();
      return run_verify(cfg);
    }
    cfg.validate();
    for (int n : cfg.ns) {
      const long est = c0ip::estimate_dofs(cfg, n);
      if (est > cfg.max_dofs)
        throw c0ip::ConfigError("n = " + std::to_string(n) + " needs about " + std::to_string(est) +
                                " dofs, above the cap of " + std::to_string(cfg.max_dofs));
    }

    const c0ip::StudyResult res = c0ip::run_study(cfg, &std::cerr);
    std::ostringstream csv, md;
    res.table.write_csv(csv);
    res.table.write_markdown(md);
    std::cout << md.str();
    if (!cfg.out.empty()) {
      if (!write_file(cfg.out + ".csv", csv.str()) || !write_file(cfg.out + ".md", md.str())) {
        std::cerr << "error: cannot write " << cfg.out << ".csv/.md\n";
        return kInvalidConfig;
      }
    }
    if (!res.valid) {
      std::cerr << res.diagnostic << "\n";
      return kSolverFailure;
    }
    return kOk;
  } catch (const c0ip::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const c0ip::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    std::cerr << "the matrix may be indefinite; try a larger --tau\n";
    return kSolverFailure;
  } catch (const c0ip::EvaluationError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kInvalidConfig;
  }
}
