#include "chcross/reference.hpp"

#include <cmath>
#include <stdexcept>

#include "chcross/quadrature.hpp"

namespace chcross {

namespace {

SparseMatrix scatter(const Mesh& mesh,
                     const std::function<double(int, const std::array<int, 3>&)>&
                         element_coef) {
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.element_count()) * 9);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const ElementGeometry g = mesh.element_geometry(e);
    const auto& tri = mesh.element(e);
    const double coef = element_coef(e, tri);
    for (int li = 0; li < 3; ++li) {
      for (int lj = 0; lj < 3; ++lj) {
        triplets.push_back(
            {tri[li], tri[lj],
             coef * (g.grad[li].x * g.grad[lj].x + g.grad[li].y * g.grad[lj].y)});
      }
    }
  }
  return SparseMatrix::from_triplets(mesh.node_count(), mesh.node_count(),
                                     std::move(triplets));
}

}  // namespace

SparseMatrix naive_assemble_mass(const Mesh& mesh) {
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.element_count()) * 9);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const double area = mesh.element_geometry(e).area;
    const auto& tri = mesh.element(e);
    for (int li = 0; li < 3; ++li) {
      for (int lj = 0; lj < 3; ++lj) {
        triplets.push_back(
            {tri[li], tri[lj], area / 12.0 * (li == lj ? 2.0 : 1.0)});
      }
    }
  }
  SparseMatrix M = SparseMatrix::from_triplets(mesh.node_count(),
                                               mesh.node_count(),
                                               std::move(triplets));
  M.symmetric_hint = true;
  return M;
}

SparseMatrix naive_assemble_stiffness(const Mesh& mesh) {
  SparseMatrix K = scatter(mesh, [&mesh](int e, const std::array<int, 3>&) {
    return mesh.element_geometry(e).area;
  });
  K.symmetric_hint = true;
  return K;
}

SparseMatrix naive_assemble_weighted_stiffness(const Mesh& mesh,
                                               const NodalFunction& w, int p) {
  if (w.mesh != &mesh) {
    throw std::invalid_argument(
        "naive_assemble_weighted_stiffness: weight lives on another mesh");
  }
  if (p != 1 && p != 2) {
    throw std::invalid_argument(
        "naive_assemble_weighted_stiffness: p must be 1 or 2");
  }
  const auto& wv = w.values;
  SparseMatrix Kw =
      scatter(mesh, [&mesh, &wv, p](int e, const std::array<int, 3>& tri) {
        const double area = mesh.element_geometry(e).area;
        const double w0 = wv[tri[0]], w1 = wv[tri[1]], w2 = wv[tri[2]];
        return p == 1 ? area * ((w0 + w1 + w2) / 3.0)
                      : area *
                            ((w0 * w0 + w1 * w1 + w2 * w2 + w0 * w1 + w0 * w2 +
                              w1 * w2) /
                             6.0);
      });
  Kw.symmetric_hint = true;
  return Kw;
}

std::vector<double> naive_matvec(const SparseMatrix& A,
                                 const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != A.ncols()) {
    throw std::invalid_argument("naive_matvec: dimension mismatch");
  }
  const auto& row_ptr = A.pattern().row_ptr();
  const auto& col_idx = A.pattern().col_idx();
  const auto& vals = A.values();
  std::vector<double> y(static_cast<std::size_t>(A.nrows()), 0.0);
  for (int i = 0; i < A.nrows(); ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      s += vals[static_cast<std::size_t>(k)] *
           x[static_cast<std::size_t>(col_idx[static_cast<std::size_t>(k)])];
    }
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

double naive_lp_norm(const NodalFunction& v, double p) {
  if (v.mesh == nullptr) throw std::invalid_argument("naive_lp_norm: no mesh");
  if (!(p >= 1.0)) throw std::invalid_argument("naive_lp_norm: p must be >= 1");
  const Mesh& mesh = *v.mesh;
  const QuadratureRule& rule = std::floor(p) == p
                                   ? triangle_rule(static_cast<int>(p) + 1)
                                   : triangle_rule(4);
  double total = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const ElementGeometry g = mesh.element_geometry(e);
    const auto& tri = mesh.element(e);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      const double val = l[0] * v.values[tri[0]] + l[1] * v.values[tri[1]] +
                         l[2] * v.values[tri[2]];
      s += rule.weights[q] * std::pow(std::abs(val), p);
    }
    total += g.area * s;
  }
  return std::pow(total, 1.0 / p);
}

double naive_grad_lp_norm(const NodalFunction& v, double p) {
  if (v.mesh == nullptr) {
    throw std::invalid_argument("naive_grad_lp_norm: no mesh");
  }
  if (!(p >= 1.0)) {
    throw std::invalid_argument("naive_grad_lp_norm: p must be >= 1");
  }
  const Mesh& mesh = *v.mesh;
  double total = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const ElementGeometry g = mesh.element_geometry(e);
    const auto& tri = mesh.element(e);
    const double gx = v.values[tri[0]] * g.grad[0].x +
                      v.values[tri[1]] * g.grad[1].x +
                      v.values[tri[2]] * g.grad[2].x;
    const double gy = v.values[tri[0]] * g.grad[0].y +
                      v.values[tri[1]] * g.grad[1].y +
                      v.values[tri[2]] * g.grad[2].y;
    const double mag2 = gx * gx + gy * gy;
    total += g.area * (p == 2.0 ? mag2 : std::pow(std::sqrt(mag2), p));
  }
  return std::pow(total, 1.0 / p);
}

}  // namespace chcross
