// Hand-written forms for m = 2, 3, 4, kept deliberately separate from the
// generic term tables in assembly.cpp. Physical derivatives come from the
// chain rule applied to reference derivatives.

#include <cmath>
#include <functional>
#include <map>

#include "c0ip/assembly.hpp"
#include "c0ip/error.hpp"

namespace c0ip {

namespace {

class ChainRule {
 public:
  ChainRule(const ReferenceBasis& ref, const AffineMap& map, const Point& x)
      : ref_(ref), map_(map), xi_(map.inverse_map(x)) {}

  /// d/dx_{i1} ... d/dx_{ik} of every basis function.
  Eigen::VectorXd derivative(const std::vector<int>& xs) {
    const int d = ref_.dim();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(ref_.size());
    std::vector<int> js(xs.size(), 0);
    for (;;) {
      double coef = 1.0;
      MultiIndex alpha{};
      for (size_t l = 0; l < xs.size(); ++l) {
        coef *= map_.inv_transpose[xs[l]][js[l]];
        ++alpha[js[l]];
      }
      if (coef != 0.0) out += coef * reference(alpha);
      size_t l = 0;
      while (l < js.size() && ++js[l] == d) js[l++] = 0;
      if (l == js.size()) break;
    }
    return out;
  }

  Eigen::VectorXd laplacian_power(int p, int grad_component = -1) {
    const int d = ref_.dim();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(ref_.size());
    std::vector<int> is(p, 0);
    for (;;) {
      std::vector<int> xs;
      if (grad_component >= 0) xs.push_back(grad_component);
      for (int i : is) {
        xs.push_back(i);
        xs.push_back(i);
      }
      out += derivative(xs);
      int l = 0;
      while (l < p && ++is[l] == d) is[l++] = 0;
      if (l == p) break;
    }
    return out;
  }

  Eigen::VectorXd normal_laplacian_power(int p, const Point& nu) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(ref_.size());
    for (int c = 0; c < ref_.dim(); ++c) out += nu[c] * laplacian_power(p, c);
    return out;
  }

 private:
  const Eigen::VectorXd& reference(const MultiIndex& alpha) {
    auto it = cache_.find(alpha);
    if (it != cache_.end()) return it->second;
    Eigen::VectorXd v(ref_.size());
    for (int k = 0; k < ref_.size(); ++k) v[k] = ref_.derivative(k, alpha, xi_);
    return cache_.emplace(alpha, v).first->second;
  }

  const ReferenceBasis& ref_;
  const AffineMap& map_;
  Point xi_;
  std::map<MultiIndex, Eigen::VectorXd> cache_;
};

// Per-side trace values at one face point; index 0 = left, 1 = right.
struct SideTraces {
  std::vector<Eigen::VectorXd> lap;     // Delta^p phi
  std::vector<Eigen::VectorXd> normal;  // d/dnu Delta^p phi
};

}  // namespace

Eigen::MatrixXd assemble_specialized(const ProblemSpec& spec, const Discretization& disc) {
  if (spec.m < 2 || spec.m > 4) throw ConfigError("specialized forms exist for m = 2, 3, 4 only");
  const int n = disc.dofs().num_dofs;
  const int nb = disc.dofs().dofs_per_cell;
  const int d = spec.dim;
  const double h = disc.mesh().h_global;
  const double tau = spec.tau;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);

  // Volume terms.
  const QuadRule vrule = simplex_rule(d, spec.volume_quad_degree());
  std::vector<Point> pts;
  std::vector<double> w;
  for (int c = 0; c < disc.mesh().num_cells(); ++c) {
    disc.cell_quadrature(c, vrule, pts, w);
    const int* dofs = disc.dofs().dofs(c);
    for (size_t q = 0; q < pts.size(); ++q) {
      ChainRule cr(disc.basis(), disc.map(c), pts[q]);
      std::vector<Eigen::VectorXd> g;
      if (spec.m == 2) g.push_back(cr.laplacian_power(1));
      if (spec.m == 3)
        for (int k = 0; k < d; ++k) g.push_back(cr.laplacian_power(1, k));
      if (spec.m == 4) g.push_back(cr.laplacian_power(2));
      for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j) {
          double s = 0.0;
          for (const auto& v : g) s += v[i] * v[j];
          A(dofs[i], dofs[j]) += w[q] * s;
        }
    }
  }

  // Face terms.
  const QuadRule frule = face_rule(d - 1, spec.face_quad_degree());
  for (int fi = 0; fi < disc.faces().size(); ++fi) {
    const Face& f = disc.faces().faces[fi];
    disc.face_quadrature(fi, frule, pts, w);
    const int sides = f.is_boundary() ? 1 : 2;
    const int cells[2] = {f.left_cell, f.right_cell};
    std::vector<int> ids;
    for (int s = 0; s < sides; ++s) ids.insert(ids.end(), disc.dofs().dofs(cells[s]), disc.dofs().dofs(cells[s]) + nb);
    const int nl = static_cast<int>(ids.size());

    for (size_t q = 0; q < pts.size(); ++q) {
      SideTraces tr[2];
      for (int s = 0; s < sides; ++s) {
        ChainRule cr(disc.basis(), disc.map(cells[s]), pts[q]);
        for (int p = 0; p < spec.m; ++p) {
          tr[s].lap.push_back(cr.laplacian_power(p));
          tr[s].normal.push_back(cr.normal_laplacian_power(p, f.normal));
        }
      }
      // Local dof l belongs to side l / nb.
      auto avg = [&](bool normal, int p, int l) {
        const int s = l / nb;
        const double v = normal ? tr[s].normal[p][l % nb] : tr[s].lap[p][l % nb];
        return sides == 1 ? v : 0.5 * v;
      };
      auto jump = [&](bool normal, int p, int l) {
        const int s = l / nb;
        const double v = normal ? tr[s].normal[p][l % nb] : tr[s].lap[p][l % nb];
        return s == 0 ? v : -v;
      };
      for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nl; ++j) {
          // a(phi_j, phi_i): u = phi_j, v = phi_i
          double c = 0.0, s = 0.0;
          if (spec.m == 2) {
            // -<{Delta u}, [grad v]> - <{Delta v}, [grad u]> + tau/h <[grad u], [grad v]>
            c = -avg(false, 1, j) * jump(true, 0, i) - avg(false, 1, i) * jump(true, 0, j);
            s = jump(true, 0, j) * jump(true, 0, i) / h;
          } else if (spec.m == 3) {
            // <{Delta^2 u}, [grad v]> - <{grad Delta u}, [Delta v]> and the swapped pair
            c = avg(false, 2, j) * jump(true, 0, i) - avg(true, 1, j) * jump(false, 1, i) +
                avg(false, 2, i) * jump(true, 0, j) - avg(true, 1, i) * jump(false, 1, j);
            s = jump(true, 0, j) * jump(true, 0, i) / std::pow(h, 3) + jump(false, 1, j) * jump(false, 1, i) / h;
          } else {
            // -<{Delta^2 u}, [grad Delta v]> - <{Delta^3 u}, [grad v]> + <{grad Delta^2 u}, [Delta v]> (+ swapped)
            c = -avg(false, 2, j) * jump(true, 1, i) - avg(false, 3, j) * jump(true, 0, i) +
                avg(true, 2, j) * jump(false, 1, i) - avg(false, 2, i) * jump(true, 1, j) -
                avg(false, 3, i) * jump(true, 0, j) + avg(true, 2, i) * jump(false, 1, j);
            s = jump(true, 1, j) * jump(true, 1, i) / h + jump(true, 0, j) * jump(true, 0, i) / std::pow(h, 5) +
                jump(false, 1, j) * jump(false, 1, i) / std::pow(h, 3);
          }
          A(ids[i], ids[j]) += w[q] * (c + tau * s);
        }
    }
  }
  return A;
}

double check_specialization(const ProblemSpec& spec, const Discretization& disc) {
  const Eigen::MatrixXd general = assemble_matrix(spec, disc).to_dense();
  const Eigen::MatrixXd special = assemble_specialized(spec, disc);
  const double scale = std::max(general.cwiseAbs().maxCoeff(), 1e-300);
  return (general - special).cwiseAbs().maxCoeff() / scale;
}

}  // namespace c0ip
