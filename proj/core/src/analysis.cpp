#include "c0ip/analysis.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "c0ip/error.hpp"

namespace c0ip {

namespace {

double multinomial(const MultiIndex& a) { return factorial(total_degree(a)) / multi_factorial(a); }

ErrorBreakdown hm_parts(const ProblemSpec& spec, const Discretization& disc, const Eigen::VectorXd& uh,
                        const ExactSolution* u) {
  const int m = spec.m;
  const int dim = spec.dim;
  const int nb = disc.dofs().dofs_per_cell;
  const auto set = MultiIndexSet::get(dim, m);
  const int deg = error_quad_degree(spec);
  std::vector<double> vol2(m + 1, 0.0), jump2(std::max(m - 1, 0), 0.0);

  const QuadRule vrule = simplex_rule(dim, deg);
  std::vector<Point> pts;
  std::vector<double> w;
  Eigen::VectorXd local(nb);
  for (int c = 0; c < disc.mesh().num_cells(); ++c) {
    disc.cell_quadrature(c, vrule, pts, w);
    const DerivTable t = disc.table(c, pts, 0, m);
    const int* d = disc.dofs().dofs(c);
    for (int k = 0; k < nb; ++k) local[k] = uh[d[k]];
    for (int q = 0; q < vrule.size(); ++q) {
      Jet jet;
      if (u) jet = u->jet(pts[q], m);
      for (int a = 0; a < set->size(); ++a) {
        const MultiIndex& alpha = (*set)[a];
        double e = -local.dot(t.partials[a].col(q));
        if (u) e += jet.derivative(alpha);
        vol2[total_degree(alpha)] += w[q] * multinomial(alpha) * e * e;
      }
    }
  }

  if (m >= 2) {
    const QuadRule frule = face_rule(dim - 1, deg);
    const auto jset = MultiIndexSet::get(dim, m - 1);
    const double h = disc.mesh().h_global;
    Eigen::VectorXd right(nb);
    for (int f = 0; f < disc.faces().size(); ++f) {
      const Face& face = disc.faces().faces[f];
      disc.face_quadrature(f, frule, pts, w);
      const DerivTable tl = disc.table(face.left_cell, pts, 0, m - 1);
      const int* dl = disc.dofs().dofs(face.left_cell);
      for (int k = 0; k < nb; ++k) local[k] = uh[dl[k]];
      DerivTable tr;
      if (!face.is_boundary()) {
        tr = disc.table(face.right_cell, pts, 0, m - 1);
        const int* dr = disc.dofs().dofs(face.right_cell);
        for (int k = 0; k < nb; ++k) right[k] = uh[dr[k]];
      }
      for (int q = 0; q < frule.size(); ++q) {
        Jet jet;
        if (face.is_boundary() && u) jet = u->jet(pts[q], m - 1);
        for (int a = jset->degree_begin(1); a < jset->size(); ++a) {
          const MultiIndex& alpha = (*jset)[a];
          double jmp;
          if (face.is_boundary()) {
            jmp = -local.dot(tl.partials[a].col(q));
            if (u) jmp += jet.derivative(alpha);
          } else {
            // The exact solution is smooth across interior faces.
            jmp = local.dot(tl.partials[a].col(q)) - right.dot(tr.partials[a].col(q));
          }
          const int j = total_degree(alpha);
          jump2[j - 1] += std::pow(h, -(2 * m - 2 * j - 1)) * w[q] * multinomial(alpha) * jmp * jmp;
        }
      }
    }
  }

  ErrorBreakdown out;
  double total = 0.0;
  for (double v : vol2) {
    out.volume.push_back(std::sqrt(v));
    total += v;
  }
  for (double v : jump2) {
    out.jump.push_back(std::sqrt(v));
    total += v;
  }
  out.total = std::sqrt(total);
  return out;
}

CsrMatrix restrict_to_free(const CsrMatrix& A, const DofMap& dofs) {
  LinearSystem sys;
  sys.A = A;
  sys.b = Eigen::VectorXd::Zero(A.rows());
  sys.constrained.assign(dofs.boundary.begin(), dofs.boundary.end());
  sys.constrained_values = Eigen::VectorXd::Zero(A.rows());
  return eliminate_constraints(sys).A;
}

CsrMatrix sum(const CsrMatrix& a, const CsrMatrix& b) {
  CsrMatrix out = a;
  for (size_t k = 0; k < out.values().size(); ++k) out.values()[k] += b.values()[k];
  return out;
}

}  // namespace

ErrorBreakdown discrete_hm_error(const ProblemSpec& spec, const Discretization& disc, const Eigen::VectorXd& uh,
                                 const ExactSolution& u) {
  return hm_parts(spec, disc, uh, &u);
}

ErrorBreakdown discrete_hm_norm(const ProblemSpec& spec, const Discretization& disc, const Eigen::VectorXd& uh) {
  return hm_parts(spec, disc, uh, nullptr);
}

double eoc(double e_prev, double h_prev, double e_cur, double h_cur) {
  if (!(e_prev > 0.0) || !(e_cur > 0.0) || !(h_prev > 0.0) || !(h_cur > 0.0) || h_prev == h_cur)
    return std::numeric_limits<double>::quiet_NaN();
  return std::log(e_prev / e_cur) / std::log(h_prev / h_cur);
}

void ConvergenceTable::compute_eoc() {
  for (size_t i = 0; i < rows.size(); ++i) {
    if (i == 0) {
      rows[i].eoc = std::numeric_limits<double>::quiet_NaN();
      rows[i].eoc_valid = false;
      continue;
    }
    rows[i].eoc = eoc(rows[i - 1].error.total, rows[i - 1].h, rows[i].error.total, rows[i].h);
    rows[i].eoc_valid = std::isfinite(rows[i].eoc);
  }
}

namespace {

std::string fmt_eoc(const ConvergenceRow& r) {
  if (!r.eoc_valid) return "";
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << r.eoc;
  return os.str();
}

}  // namespace

void ConvergenceTable::write_csv(std::ostream& os) const {
  for (const auto& [k, v] : metadata) os << "# " << k << " = " << v << '\n';
  const size_t nv = rows.empty() ? 0 : rows.front().error.volume.size();
  const size_t nj = rows.empty() ? 0 : rows.front().error.jump.size();
  os << "n,h,dofs,err_total";
  for (size_t i = 0; i < nv; ++i) os << (i == 0 ? ",err_L2" : ",err_D" + std::to_string(i));
  for (size_t j = 0; j < nj; ++j) os << ",err_jump" << j + 1;
  os << ",residual,eoc\n";
  os << std::setprecision(10) << std::scientific;
  for (const auto& r : rows) {
    os << r.n << ',' << r.h << ',' << r.dofs << ',' << r.error.total;
    for (double v : r.error.volume) os << ',' << v;
    for (double v : r.error.jump) os << ',' << v;
    os << ',' << r.residual << ',' << fmt_eoc(r) << '\n';
  }
  os << std::defaultfloat;
}

void ConvergenceTable::write_markdown(std::ostream& os) const {
  for (const auto& [k, v] : metadata) os << "- " << k << ": " << v << '\n';
  os << "\n| 1/h | dofs | error | EOC |\n|---|---|---|---|\n";
  for (const auto& r : rows) {
    std::ostringstream e;
    e << std::scientific << std::setprecision(4) << r.error.total;
    os << "| " << r.n << " | " << r.dofs << " | " << e.str() << " | " << fmt_eoc(r) << " |\n";
  }
}

MonitorForms monitor_forms(const ProblemSpec& spec, const Discretization& disc) {
  const int m = spec.m;
  const int dim = spec.dim;
  const int nb = disc.dofs().dofs_per_cell;
  const double h = disc.mesh().h_global;
  const int deg = 2 * spec.r + spec.quad_boost;

  CsrMatrix vol = make_ip_matrix(disc);
  assemble_volume(spec, disc, vol);
  CsrMatrix pen = make_ip_matrix(disc);
  assemble_stabilization(spec, disc, pen, 1.0);

  CsrMatrix cells = make_ip_matrix(disc);
  const auto set = MultiIndexSet::get(dim, m);
  const QuadRule vrule = simplex_rule(dim, deg);
  std::vector<Point> pts;
  std::vector<double> w;
  for (int c = 0; c < disc.mesh().num_cells(); ++c) {
    disc.cell_quadrature(c, vrule, pts, w);
    const DerivTable t = disc.table(c, pts, 0, m);
    const Eigen::Map<const Eigen::VectorXd> wv(w.data(), w.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nb, nb);
    for (int a = 0; a < set->size(); ++a)
      K.noalias() += multinomial((*set)[a]) * (t.partials[a] * wv.asDiagonal() * t.partials[a].transpose());
    cells.add_block(disc.dofs().dofs(c), nb, disc.dofs().dofs(c), nb, K);
  }

  CsrMatrix jumps = make_ip_matrix(disc);
  if (m >= 2) {
    const QuadRule frule = face_rule(dim - 1, deg);
    const auto jset = MultiIndexSet::get(dim, m - 1);
    for (int f = 0; f < disc.faces().size(); ++f) {
      const Face& face = disc.faces().faces[f];
      disc.face_quadrature(f, frule, pts, w);
      const Eigen::Map<const Eigen::VectorXd> wv(w.data(), w.size());
      const bool interior = !face.is_boundary();
      const DerivTable tl = disc.table(face.left_cell, pts, 0, m - 1);
      DerivTable tr;
      std::vector<int> ids(disc.dofs().dofs(face.left_cell), disc.dofs().dofs(face.left_cell) + nb);
      if (interior) {
        tr = disc.table(face.right_cell, pts, 0, m - 1);
        ids.insert(ids.end(), disc.dofs().dofs(face.right_cell), disc.dofs().dofs(face.right_cell) + nb);
      }
      const int nl = static_cast<int>(ids.size());
      Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nl, nl);
      Eigen::MatrixXd J(nl, frule.size());
      for (int a = jset->degree_begin(1); a < jset->size(); ++a) {
        const int j = total_degree((*jset)[a]);
        J.topRows(nb) = tl.partials[a];
        if (interior) J.bottomRows(nb) = -tr.partials[a];
        K.noalias() +=
            (std::pow(h, -(2 * m - 2 * j - 1)) * multinomial((*jset)[a])) * (J * wv.asDiagonal() * J.transpose());
      }
      jumps.add_block(ids.data(), nl, ids.data(), nl, K);
    }
  }

  const DofMap& dofs = disc.dofs();
  MonitorForms forms;
  forms.volume = restrict_to_free(vol, dofs);
  forms.penalty = restrict_to_free(pen, dofs);
  forms.jumps = restrict_to_free(jumps, dofs);
  forms.norm = restrict_to_free(sum(cells, jumps), dofs);
  return forms;
}

double max_rayleigh_quotient(const CsrMatrix& N, const CsrMatrix& D, int iterations, int restarts, unsigned seed) {
  const int n = N.rows();
  if (n == 0) return 0.0;
  using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
  ColMatrix Dc = D.view();
  double diag = 0.0;
  for (int i = 0; i < n; ++i) diag = std::max(diag, std::abs(Dc.coeff(i, i)));
  const double shift = 1e-14 * std::max(diag, 1e-300);
  for (int i = 0; i < n; ++i) Dc.coeffRef(i, i) += shift;
  Eigen::SimplicialLDLT<ColMatrix> ldlt(Dc);
  if (ldlt.info() != Eigen::Success) throw SolverError("Rayleigh monitor: denominator factorization failed");

  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = dist(gen);
    x.normalize();
    for (int it = 0; it < iterations; ++it) {
      x = ldlt.solve(N.multiply(x));
      x.normalize();
    }
    const double num = x.dot(N.multiply(x));
    const double den = x.dot(Dc * x);
    best = std::max(best, num / den);
  }
  return best;
}

std::vector<MonitorLevel> rayleigh_monitors(const ProblemSpec& spec, const std::vector<int>& ns) {
  std::vector<MonitorLevel> out;
  for (int n : ns) {
    const Discretization disc(build_unit_square_mesh(n), spec.r, std::max(spec.m - 1, 0), spec.m);
    if (disc.dofs().num_dofs > 5000) throw ConfigError("Rayleigh monitors are limited to 5000 dofs");
    const MonitorForms f = monitor_forms(spec, disc);
    MonitorLevel level;
    level.n = n;
    level.dofs = f.norm.rows();
    if (spec.m >= 2) level.penalty_dominance = max_rayleigh_quotient(f.jumps, f.penalty);
    level.norm_equivalence = max_rayleigh_quotient(f.norm, sum(f.volume, f.penalty));
    out.push_back(level);
  }
  return out;
}

ConsistencyResult consistency_residual(const ProblemSpec& spec, const Discretization& disc, const ExactSolution& u) {
  const int m = spec.m;
  const int mt = spec.m_tilde();
  const int dim = spec.dim;
  const int nb = disc.dofs().dofs_per_cell;
  const Eigen::VectorXd source = assemble_source(spec, disc, u);
  Eigen::VectorXd a = Eigen::VectorXd::Zero(disc.dofs().num_dofs);

  const QuadRule vrule = simplex_rule(dim, spec.volume_quad_degree());
  std::vector<Point> pts;
  std::vector<double> w;
  for (int c = 0; c < disc.mesh().num_cells(); ++c) {
    disc.cell_quadrature(c, vrule, pts, w);
    const DerivTable t = disc.table(c, pts, mt);
    Eigen::VectorXd local = Eigen::VectorXd::Zero(nb);
    for (int q = 0; q < vrule.size(); ++q) {
      const Jet jet = u.jet(pts[q], m);
      if (spec.even()) {
        local += w[q] * laplacian_power(jet, mt) * t.lap[mt].col(q);
      } else {
        for (int k = 0; k < dim; ++k) local += w[q] * gradient_laplacian_power(jet, mt, k) * t.grad_lap[mt][k].col(q);
      }
    }
    const int* d = disc.dofs().dofs(c);
    for (int k = 0; k < nb; ++k) a[d[k]] += local[k];
  }

  const FaceForm form = face_form(m);
  if (!form.coupling.empty()) {
    const QuadRule frule = face_rule(dim - 1, spec.face_quad_degree());
    for (int f = 0; f < disc.faces().size(); ++f) {
      const Face& face = disc.faces().faces[f];
      const FaceOperators ops = face_operators(disc, f, frule, m - 1);
      std::vector<TraceData> traces;
      for (const Point& x : ops.points) traces.push_back(boundary_trace_data(u, x, m));
      Eigen::VectorXd local = Eigen::VectorXd::Zero(ops.num_local);
      for (const auto& t : form.coupling) {
        Eigen::VectorXd g(frule.size());
        for (int q = 0; q < frule.size(); ++q) {
          double v = 0.0;
          if (t.avg == Trace::kValue) {
            v = traces[q].lap[t.avg_power];
          } else {
            for (int k = 0; k < dim; ++k) v += traces[q].grad_lap[t.avg_power][k] * face.normal[k];
          }
          g[q] = ops.weights[q] * v;
        }
        local += t.sign * (ops.jump(t.jump, t.jump_power) * g);
      }
      for (int k = 0; k < ops.num_local; ++k) a[ops.dofs[k]] += local[k];
    }
  }

  ConsistencyResult res;
  for (int i = 0; i < disc.dofs().num_dofs; ++i) {
    if (disc.dofs().boundary[i]) continue;
    res.max_residual = std::max(res.max_residual, std::abs(a[i] - source[i]));
    res.scale = std::max(res.scale, std::abs(source[i]));
  }
  return res;
}

}  // namespace c0ip
