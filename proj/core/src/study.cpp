#include "c0ip/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "c0ip/error.hpp"

namespace c0ip {

const char* to_string(Example e) {
  switch (e) {
    case Example::kEx1: return "ex1";
    case Example::kEx2Square: return "ex2-square";
    case Example::kEx2LShape: return "ex2-lshape";
    case Example::kEx3: return "ex3";
    case Example::kBubble: return "bubble";
    case Example::kCustom: return "custom";
  }
  return "?";
}

Example parse_example(const std::string& s) {
  for (Example e : {Example::kEx1, Example::kEx2Square, Example::kEx2LShape, Example::kEx3, Example::kBubble,
                    Example::kCustom})
    if (s == to_string(e)) return e;
  throw ConfigError("unknown example '" + s + "'");
}

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "PASS";
    case CheckStatus::kFail: return "FAIL";
    case CheckStatus::kSkip: return "SKIP";
  }
  return "?";
}

int StudyConfig::resolved_dim() const {
  switch (example) {
    case Example::kEx1:
    case Example::kEx2Square:
    case Example::kEx2LShape: return 2;
    case Example::kEx3: return 3;
    default: return dim == 0 ? 2 : dim;
  }
}

std::string StudyConfig::mesh_family() const {
  if (example == Example::kEx2LShape) return "lshape";
  const int d = resolved_dim();
  return d == 1 ? "interval" : d == 2 ? "square" : "cube";
}

ProblemSpec StudyConfig::problem() const {
  ProblemSpec p;
  p.m = m;
  p.r = r;
  p.tau = tau;
  p.dim = resolved_dim();
  p.quad_boost = quad_boost;
  return p;
}

void StudyConfig::validate() const {
  problem().validate();
  const bool fixed_dim = example != Example::kBubble && example != Example::kCustom;
  if (fixed_dim && dim != 0 && dim != resolved_dim())
    throw ConfigError(std::string("example ") + to_string(example) + " is defined in dimension " +
                      std::to_string(resolved_dim()));
  if (ns.empty()) throw ConfigError("the n list is empty");
  for (size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1) throw ConfigError("mesh sizes must be positive");
    if (i > 0 && ns[i] <= ns[i - 1]) throw ConfigError("the n list must be strictly increasing");
  }
  if (example == Example::kCustom && expression.empty()) throw ConfigError("custom example needs an expression");
  if (bubble_power < 0) throw ConfigError("bubble power must be nonnegative");
  if (max_dofs < 1) throw ConfigError("max dofs must be positive");
}

std::vector<std::pair<std::string, std::string>> StudyConfig::echo() const {
  const ProblemSpec p = problem();
  std::ostringstream nl;
  for (size_t i = 0; i < ns.size(); ++i) nl << (i ? "," : "") << ns[i];
  std::ostringstream t;
  t << tau;
  std::vector<std::pair<std::string, std::string>> e = {
      {"example", to_string(example)},
      {"m", std::to_string(m)},
      {"r", std::to_string(r)},
      {"tau", t.str()},
      {"dim", std::to_string(resolved_dim())},
      {"mesh", mesh_family()},
      {"n", nl.str()},
      {"quad-boost", std::to_string(quad_boost)},
      {"volume-quadrature-degree", std::to_string(p.volume_quad_degree())},
      {"face-quadrature-degree", std::to_string(p.face_quad_degree())},
      {"error-quadrature-degree", std::to_string(error_quad_degree(p))},
      {"solver", to_string(solver.method)},
      {"lift-boundary-data", lift_boundary_data ? "true" : "false"},
      {"single-thread", single_thread ? "true" : "false"},
  };
  if (example == Example::kBubble) e.push_back({"bubble-power", std::to_string(bubble_power ? bubble_power : m)});
  if (example == Example::kCustom) e.push_back({"expression", expression});
  return e;
}

namespace {

int to_int(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("option " + key + ": expected an integer, got '" + v + "'");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("option " + key + ": expected a number, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("option " + key + ": expected a boolean, got '" + v + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void StudyConfig::set(const std::string& key, const std::string& value) {
  if (key == "example") {
    example = parse_example(value);
  } else if (key == "m") {
    m = to_int(key, value);
  } else if (key == "r") {
    r = to_int(key, value);
  } else if (key == "tau") {
    tau = to_double(key, value);
  } else if (key == "n") {
    ns.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) ns.push_back(to_int(key, trim(item)));
  } else if (key == "quad-boost") {
    quad_boost = to_int(key, value);
  } else if (key == "dim") {
    dim = to_int(key, value);
  } else if (key == "bubble-power") {
    bubble_power = to_int(key, value);
  } else if (key == "expression") {
    expression = value;
  } else if (key == "solver") {
    solver.method = parse_solver_method(value);
  } else if (key == "single-thread") {
    single_thread = to_bool(key, value);
  } else if (key == "lift-boundary-data") {
    lift_boundary_data = to_bool(key, value);
  } else if (key == "max-dofs") {
    max_dofs = to_int(key, value);
  } else if (key == "out") {
    out = value;
  } else if (key == "verify") {
    verify = to_bool(key, value);
  } else {
    throw ConfigError("unknown option '" + key + "'");
  }
}

StudyConfig read_config(std::istream& is, StudyConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

ExactSolution make_solution(const StudyConfig& config) {
  const int d = config.resolved_dim();
  switch (config.example) {
    case Example::kEx1: return make_sine_product(2);
    case Example::kEx2Square: return make_ex2_square();
    case Example::kEx2LShape: return make_ex2_lshape();
    case Example::kEx3: return make_sine_product(3);
    case Example::kBubble: return make_poly_bubble(d, config.bubble_power ? config.bubble_power : config.m);
    case Example::kCustom: return make_custom(d, config.expression);
  }
  throw ConfigError("unknown example");
}

Mesh make_mesh(const StudyConfig& config, int n) {
  if (config.example == Example::kEx2LShape) return build_lshape_mesh(n);
  switch (config.resolved_dim()) {
    case 1: return build_unit_interval_mesh(n);
    case 2: return build_unit_square_mesh(n);
    default: return build_unit_cube_mesh(n);
  }
}

long estimate_dofs(const StudyConfig& config, int n) {
  const long k = static_cast<long>(config.r) * n;
  if (config.example == Example::kEx2LShape) return (2 * k + 1) * (2 * k + 1) - k * k;
  switch (config.resolved_dim()) {
    case 1: return k + 1;
    case 2: return (k + 1) * (k + 1);
    default: return (k + 1) * (k + 1) * (k + 1);
  }
}

LevelResult run_level(const StudyConfig& config, int n) {
  const auto start = std::chrono::steady_clock::now();
  const long estimate = estimate_dofs(config, n);
  if (estimate > config.max_dofs)
    throw ConfigError("n = " + std::to_string(n) + " needs about " + std::to_string(estimate) +
                      " dofs, above the cap of " + std::to_string(config.max_dofs));
  const ProblemSpec spec = config.problem();
  const ExactSolution u = make_solution(config);
  const Discretization disc(make_mesh(config, n), spec.r, std::max(spec.m - 1, 0), spec.m);

  LinearSystem sys;
  sys.A = assemble_matrix(spec, disc);
  sys.b = config.lift_boundary_data ? assemble_load(spec, disc, u) : assemble_source(spec, disc, u);
  apply_essential_bc(disc, u, sys);
  ReducedSystem red = eliminate_constraints(sys);
  sys.A = CsrMatrix();

  LevelResult out;
  const Eigen::VectorXd x = solve(red.A, red.b, config.solver, out.report);
  red.A = CsrMatrix();
  const Eigen::VectorXd uh = red.expand(x, sys);

  out.row.n = n;
  out.row.h = disc.mesh().h_global;
  out.row.dofs = disc.dofs().num_dofs;
  out.row.error = discrete_hm_error(spec, disc, uh, u);
  out.row.residual = out.report.relative_residual;
  out.uh_norm = discrete_hm_norm(spec, disc, uh).total;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

StudyResult run_study(const StudyConfig& config, std::ostream* progress) {
  config.validate();
  StudyResult res;
  res.table.metadata = config.echo();
  for (int n : config.ns) {
    LevelResult level = run_level(config, n);
    if (progress)
      *progress << "n=" << n << " dofs=" << level.row.dofs << " error=" << level.row.error.total
                << " residual=" << level.report.relative_residual << " solver=" << level.report.factorization
                << " time=" << level.seconds << "s\n";
    if (progress && !level.report.message.empty()) *progress << "  note: " << level.report.message << "\n";
    res.table.rows.push_back(level.row);
    res.levels.push_back(level);
    if (!level.report.valid) {
      res.valid = false;
      res.diagnostic = "INVALID solve at n=" + std::to_string(n) + ": " + level.report.message;
      break;
    }
  }
  res.table.compute_eoc();
  return res;
}

namespace {

CheckResult make_check(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok ? CheckStatus::kPass : CheckStatus::kFail, std::move(detail)};
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

std::vector<CheckResult> run_verification_suite(int m, int r, double tau) {
  std::vector<CheckResult> out;
  ProblemSpec spec;
  spec.m = m;
  spec.r = r;
  spec.tau = tau;
  spec.dim = 2;
  spec.validate();
  const int mp = std::max(m - 1, 0);

  {
    double worst = 0.0;
    for (int d = 1; d <= 3; ++d) {
      if (d == 3 && r > 4) continue;
      ProblemSpec s = spec;
      s.dim = d;
      const Mesh mesh = d == 1 ? build_unit_interval_mesh(3) : d == 2 ? build_lshape_mesh(1) : build_unit_cube_mesh(1);
      const CsrMatrix A = assemble_matrix(s, Discretization(mesh, r, mp, m));
      worst = std::max(worst, A.asymmetry() / A.max_abs());
    }
    out.push_back(make_check("symmetry", worst <= 1e-10, "max |A - A^T| / max |A| = " + sci(worst)));
  }

  {
    const Discretization disc(build_unit_square_mesh(2), r, mp, m);
    LinearSystem sys;
    sys.A = assemble_matrix(spec, disc);
    sys.b = Eigen::VectorXd::Zero(disc.dofs().num_dofs);
    apply_essential_bc(disc, make_poly_bubble(2, m), sys);
    const Inertia in = ldlt_inertia(eliminate_constraints(sys).A);
    out.push_back(make_check("positive definite", in.negative == 0 && in.zero == 0,
                             std::to_string(in.negative) + " negative and " + std::to_string(in.zero) +
                                 " zero pivots (square n=2, tau=" + sci(tau) + ")"));
  }

  if (m >= 2 && m <= 4) {
    const double dev = check_specialization(spec, Discretization(build_unit_square_mesh(1), r, mp, m));
    out.push_back(make_check("specialization", dev <= 1e-11, "relative deviation " + sci(dev)));
  } else {
    out.push_back({"specialization", CheckStatus::kSkip, "hand-written forms exist for m = 2, 3, 4"});
  }

  {
    const ConsistencyResult c =
        consistency_residual(spec, Discretization(build_unit_square_mesh(2), r, mp, m), make_poly_bubble(2, m));
    out.push_back(make_check("consistency", c.relative() <= 1e-8, "relative residual " + sci(c.relative())));
  }

  if (2 * m <= kMaxBasisDegree) {
    StudyConfig cfg;
    cfg.example = Example::kBubble;
    cfg.dim = 1;
    cfg.m = m;
    cfg.r = 2 * m;
    cfg.tau = tau;
    cfg.ns = {3};
    cfg.solver.force_ldlt = true;
    const LevelResult level = run_level(cfg, 3);
    const ProblemSpec s1 = cfg.problem();
    const Discretization disc(make_mesh(cfg, 3), s1.r, mp, m);
    const double unorm = discrete_hm_error(s1, disc, Eigen::VectorXd::Zero(disc.dofs().num_dofs),
                                           make_solution(cfg)).total;
    const double rel = level.row.error.total / unorm;
    out.push_back(make_check("exact reproduction", rel <= 1e-8,
                             "d=1, r=" + std::to_string(cfg.r) + ": relative error " + sci(rel)));
  } else {
    out.push_back({"exact reproduction", CheckStatus::kSkip, "needs degree 2m <= " + std::to_string(kMaxBasisDegree)});
  }

  {
    const std::vector<MonitorLevel> levels = rayleigh_monitors(spec, {2, 4});
    double growth_ne = levels[1].norm_equivalence / levels[0].norm_equivalence;
    out.push_back(make_check("norm equivalence monitor", std::isfinite(growth_ne) && growth_ne <= 1.5,
                             "growth factor " + sci(growth_ne)));
    if (m >= 2) {
      const double g = *levels[1].penalty_dominance / *levels[0].penalty_dominance;
      out.push_back(make_check("penalty dominance monitor", std::isfinite(g) && g <= 1.5, "growth factor " + sci(g)));
    } else {
      out.push_back({"penalty dominance monitor", CheckStatus::kSkip, "no jump terms and S_h = 0 when m = 1"});
    }
  }
  return out;
}

}  // namespace c0ip
