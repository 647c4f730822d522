#include "c0ip/assembly.hpp"

#include <cmath>

#include "c0ip/error.hpp"

namespace c0ip {

void ProblemSpec::validate() const {
  if (dim < 1 || dim > kMaxDim) throw ConfigError("dimension must be 1, 2 or 3");
  if (m < 1) throw ConfigError("m must be at least 1");
  if (r < m) throw ConfigError("polynomial degree r must satisfy r >= m");
  if (r > kMaxBasisDegree) throw ConfigError("polynomial degree r must not exceed " + std::to_string(kMaxBasisDegree));
  if (!(tau >= 0.0)) throw ConfigError("tau must be nonnegative");
  if (quad_boost < 0) throw ConfigError("quadrature boost must be nonnegative");
  if (volume_quad_degree() > kMaxQuadratureDegree) throw ConfigError("quadrature degree too high");
}

FaceForm face_form(int m) {
  FaceForm form;
  const int mt = m / 2;
  if (m % 2 == 0) {
    for (int i = 0; i <= mt - 1; ++i) form.coupling.push_back({Trace::kValue, mt + i, Trace::kNormal, mt - i - 1, -1.0});
    for (int i = 0; i <= mt - 2; ++i) form.coupling.push_back({Trace::kNormal, mt + i, Trace::kValue, mt - i - 1, 1.0});
    for (int i = 0; i <= mt - 1; ++i) form.penalty.push_back({Trace::kNormal, mt - i - 1, 4 * i + 1});
    for (int i = 0; i <= mt - 2; ++i) form.penalty.push_back({Trace::kValue, mt - i - 1, 4 * i + 3});
  } else {
    for (int i = 0; i <= mt - 1; ++i)
      form.coupling.push_back({Trace::kValue, mt + i + 1, Trace::kNormal, mt - i - 1, 1.0});
    for (int i = 0; i <= mt - 1; ++i) form.coupling.push_back({Trace::kNormal, mt + i, Trace::kValue, mt - i, -1.0});
    for (int i = 0; i <= mt - 1; ++i) form.penalty.push_back({Trace::kNormal, mt - i - 1, 4 * i + 3});
    for (int i = 0; i <= mt - 1; ++i) form.penalty.push_back({Trace::kValue, mt - i, 4 * i + 1});
  }
  return form;
}

Discretization::Discretization(Mesh mesh, int degree, int max_power, int max_partial)
    : mesh_(std::move(mesh)),
      faces_(build_face_table(mesh_)),
      basis_(ReferenceBasis::get(mesh_.dim, degree)),
      dofs_(build_dof_map(mesh_, faces_, *basis_)),
      max_power_(max_power),
      max_partial_(max_partial) {
  const int nc = mesh_.num_cells();
  maps_.reserve(nc);
  classes_.resize(nc);
  std::map<std::array<long long, kMaxDim * kMaxDim>, int> lookup;
  const double scale = 1e9 / mesh_.h_global;
  for (int c = 0; c < nc; ++c) {
    maps_.push_back(affine_map(mesh_, c));
    std::array<long long, kMaxDim * kMaxDim> key{};
    for (int i = 0; i < kMaxDim; ++i)
      for (int j = 0; j < kMaxDim; ++j) key[i * kMaxDim + j] = std::llround(maps_[c].J[i][j] * scale);
    auto [it, inserted] = lookup.try_emplace(key, static_cast<int>(bases_.size()));
    if (inserted) bases_.push_back(std::make_shared<const PhysicalBasis>(basis_, maps_[c], max_power, max_partial));
    classes_[c] = it->second;
  }
}

void Discretization::cell_quadrature(int cell, const QuadRule& rule, std::vector<Point>& pts,
                                     std::vector<double>& w) const {
  const AffineMap& m = maps_[cell];
  pts.resize(rule.size());
  w.resize(rule.size());
  for (int q = 0; q < rule.size(); ++q) {
    pts[q] = m.map(rule.points[q]);
    w[q] = rule.weights[q] * std::abs(m.detJ);
  }
}

void Discretization::face_quadrature(int face, const QuadRule& rule, std::vector<Point>& pts,
                                     std::vector<double>& w) const {
  const Face& f = faces_.faces[face];
  const double scale = f.measure * factorial(mesh_.dim - 1);
  pts.resize(rule.size());
  w.resize(rule.size());
  for (int q = 0; q < rule.size(); ++q) {
    pts[q] = face_point(mesh_, f, rule.points[q]);
    w[q] = rule.weights[q] * scale;
  }
}

DerivTable Discretization::table(int cell, const std::vector<Point>& pts, int max_power, int max_partial) const {
  return evaluate_derivatives(physical(cell), maps_[cell].b, pts, max_power, max_partial);
}

FaceOperators face_operators(const Discretization& disc, int face, const QuadRule& rule, int max_power) {
  const Face& f = disc.faces().faces[face];
  const int nb = disc.dofs().dofs_per_cell;
  FaceOperators ops;
  disc.face_quadrature(face, rule, ops.points, ops.weights);
  const bool interior = !f.is_boundary();
  ops.num_local = interior ? 2 * nb : nb;
  ops.dofs.assign(disc.dofs().dofs(f.left_cell), disc.dofs().dofs(f.left_cell) + nb);
  if (interior) ops.dofs.insert(ops.dofs.end(), disc.dofs().dofs(f.right_cell), disc.dofs().dofs(f.right_cell) + nb);

  const DerivTable left = disc.table(f.left_cell, ops.points, max_power);
  DerivTable right;
  if (interior) right = disc.table(f.right_cell, ops.points, max_power);

  const int nq = rule.size();
  auto fill = [&](const Eigen::MatrixXd& l, const Eigen::MatrixXd* r, Eigen::MatrixXd& avg, Eigen::MatrixXd& jump) {
    if (!r) {
      avg = l;
      jump = l;
      return;
    }
    avg.resize(2 * nb, nq);
    jump.resize(2 * nb, nq);
    avg.topRows(nb) = 0.5 * l;
    avg.bottomRows(nb) = 0.5 * (*r);
    jump.topRows(nb) = l;
    jump.bottomRows(nb) = -(*r);
  };
  for (int p = 0; p <= max_power; ++p) {
    ops.avg_value.emplace_back();
    ops.jump_value.emplace_back();
    ops.avg_normal.emplace_back();
    ops.jump_normal.emplace_back();
    fill(left.lap[p], interior ? &right.lap[p] : nullptr, ops.avg_value.back(), ops.jump_value.back());
    const Eigen::MatrixXd gl = left.normal_derivative(p, f.normal);
    Eigen::MatrixXd gr;
    if (interior) gr = right.normal_derivative(p, f.normal);
    fill(gl, interior ? &gr : nullptr, ops.avg_normal.back(), ops.jump_normal.back());
  }
  return ops;
}

CsrMatrix make_ip_matrix(const Discretization& disc) {
  return CsrMatrix(disc.dofs().num_dofs, ip_sparsity_pattern(disc.mesh(), disc.faces(), disc.dofs()));
}

void assemble_volume(const ProblemSpec& spec, const Discretization& disc, CsrMatrix& A) {
  const QuadRule rule = simplex_rule(spec.dim, spec.volume_quad_degree());
  const int mt = spec.m_tilde();
  const int nb = disc.dofs().dofs_per_cell;
  std::vector<Eigen::MatrixXd> local(disc.num_classes());
  std::vector<Point> pts;
  std::vector<double> w;
  for (int c = 0; c < disc.mesh().num_cells(); ++c) {
    Eigen::MatrixXd& K = local[disc.jacobian_class(c)];
    if (K.size() == 0) {
      disc.cell_quadrature(c, rule, pts, w);
      const DerivTable t = disc.table(c, pts, mt);
      const Eigen::Map<const Eigen::VectorXd> wv(w.data(), w.size());
      K = Eigen::MatrixXd::Zero(nb, nb);
      if (spec.even()) {
        K.noalias() += t.lap[mt] * wv.asDiagonal() * t.lap[mt].transpose();
      } else {
        for (int k = 0; k < spec.dim; ++k)
          K.noalias() += t.grad_lap[mt][k] * wv.asDiagonal() * t.grad_lap[mt][k].transpose();
      }
    }
    A.add_block(disc.dofs().dofs(c), nb, disc.dofs().dofs(c), nb, K);
  }
}

namespace {

void assemble_faces(const ProblemSpec& spec, const Discretization& disc, CsrMatrix& A, double coupling_scale,
                    double penalty_scale) {
  const FaceForm form = face_form(spec.m);
  if (form.coupling.empty() && form.penalty.empty()) return;
  const QuadRule rule = face_rule(spec.dim - 1, spec.face_quad_degree());
  const double h = disc.mesh().h_global;
  for (int f = 0; f < disc.faces().size(); ++f) {
    const FaceOperators ops = face_operators(disc, f, rule, spec.m - 1);
    const Eigen::Map<const Eigen::VectorXd> wv(ops.weights.data(), ops.weights.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(ops.num_local, ops.num_local);
    if (coupling_scale != 0.0) {
      for (const auto& t : form.coupling) {
        // K(i, j) = C(phi_j, phi_i) + C(phi_i, phi_j)
        const Eigen::MatrixXd YW = ops.jump(t.jump, t.jump_power) * wv.asDiagonal();
        const Eigen::MatrixXd M = YW * ops.avg(t.avg, t.avg_power).transpose();
        K += (coupling_scale * t.sign) * (M + M.transpose());
      }
    }
    if (penalty_scale != 0.0) {
      for (const auto& t : form.penalty) {
        const Eigen::MatrixXd& J = ops.jump(t.jump, t.power);
        K.noalias() += (penalty_scale * std::pow(h, -t.h_exponent)) * (J * wv.asDiagonal() * J.transpose());
      }
    }
    A.add_block(ops.dofs.data(), ops.num_local, ops.dofs.data(), ops.num_local, K);
  }
}

}  // namespace

void assemble_coupling(const ProblemSpec& spec, const Discretization& disc, CsrMatrix& A) {
  assemble_faces(spec, disc, A, 1.0, 0.0);
}

void assemble_stabilization(const ProblemSpec& spec, const Discretization& disc, CsrMatrix& A, double scale) {
  assemble_faces(spec, disc, A, 0.0, scale);
}

CsrMatrix assemble_matrix(const ProblemSpec& spec, const Discretization& disc) {
  CsrMatrix A = make_ip_matrix(disc);
  assemble_volume(spec, disc, A);
  assemble_faces(spec, disc, A, 1.0, spec.tau);
  return A;
}

Eigen::VectorXd assemble_source(const ProblemSpec& spec, const Discretization& disc, const ExactSolution& u) {
  const QuadRule rule = simplex_rule(spec.dim, spec.volume_quad_degree());
  const int nb = disc.dofs().dofs_per_cell;
  const int order = 2 * spec.m;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(disc.dofs().num_dofs);
  std::vector<Point> pts;
  std::vector<double> w;
  Eigen::VectorXd fw(rule.size());
  for (int c = 0; c < disc.mesh().num_cells(); ++c) {
    disc.cell_quadrature(c, rule, pts, w);
    for (int q = 0; q < rule.size(); ++q) fw[q] = w[q] * m_laplace(u.jet(pts[q], order), spec.m);
    const DerivTable t = disc.table(c, pts, 0);
    const Eigen::VectorXd local = t.lap[0] * fw;
    const int* d = disc.dofs().dofs(c);
    for (int k = 0; k < nb; ++k) b[d[k]] += local[k];
  }
  return b;
}

Eigen::VectorXd assemble_load(const ProblemSpec& spec, const Discretization& disc, const ExactSolution& u) {
  Eigen::VectorXd b = assemble_source(spec, disc, u);
  const FaceForm form = face_form(spec.m);
  if (form.coupling.empty() && form.penalty.empty()) return b;
  const QuadRule rule = face_rule(spec.dim - 1, spec.face_quad_degree());
  const double h = disc.mesh().h_global;
  const int nq = rule.size();
  for (int f = 0; f < disc.faces().size(); ++f) {
    const Face& face = disc.faces().faces[f];
    if (!face.is_boundary()) continue;
    const FaceOperators ops = face_operators(disc, f, rule, spec.m - 1);
    std::vector<TraceData> traces;
    traces.reserve(nq);
    for (const Point& x : ops.points) traces.push_back(boundary_trace_data(u, x, spec.m));
    auto datum = [&](Trace t, int p) {
      Eigen::VectorXd g(nq);
      for (int q = 0; q < nq; ++q) {
        if (t == Trace::kValue) {
          g[q] = traces[q].lap[p];
        } else {
          double s = 0.0;
          for (int k = 0; k < spec.dim; ++k) s += traces[q].grad_lap[p][k] * face.normal[k];
          g[q] = s;
        }
        g[q] *= ops.weights[q];
      }
      return g;
    };
    Eigen::VectorXd local = Eigen::VectorXd::Zero(ops.num_local);
    for (const auto& t : form.coupling) local += t.sign * (ops.avg(t.avg, t.avg_power) * datum(t.jump, t.jump_power));
    for (const auto& t : form.penalty)
      local += spec.tau * std::pow(h, -t.h_exponent) * (ops.jump(t.jump, t.power) * datum(t.jump, t.power));
    for (int k = 0; k < ops.num_local; ++k) b[ops.dofs[k]] += local[k];
  }
  return b;
}

void apply_essential_bc(const Discretization& disc, const ExactSolution& u, LinearSystem& sys) {
  const DofMap& dofs = disc.dofs();
  sys.constrained.assign(dofs.boundary.begin(), dofs.boundary.end());
  sys.constrained_values = Eigen::VectorXd::Zero(dofs.num_dofs);
  for (int i = 0; i < dofs.num_dofs; ++i)
    if (dofs.boundary[i]) sys.constrained_values[i] = u.value(dofs.points[i]);
}

LinearSystem assemble_system(const ProblemSpec& spec, const Discretization& disc, const ExactSolution& u) {
  LinearSystem sys;
  sys.A = assemble_matrix(spec, disc);
  sys.b = assemble_load(spec, disc, u);
  apply_essential_bc(disc, u, sys);
  return sys;
}

}  // namespace c0ip
