#include "chcross/assembly.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "chcross/quadrature.hpp"

namespace chcross {

Assembler::Assembler(const Mesh& mesh) : mesh_(&mesh) {
  const int n = mesh.node_count();
  const int ne = mesh.element_count();

  geom_.reserve(static_cast<std::size_t>(ne));
  for (int e = 0; e < ne; ++e) geom_.push_back(mesh.element_geometry(e));

  // Incidence list, counting pass then fill; element order within a node's
  // range is ascending because elements are visited in order.
  inc_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int e = 0; e < ne; ++e)
    for (int li = 0; li < 3; ++li) ++inc_ptr_[mesh.element(e)[li] + 1];
  for (int i = 0; i < n; ++i) inc_ptr_[i + 1] += inc_ptr_[i];
  incidence_.resize(static_cast<std::size_t>(inc_ptr_[n]));
  {
    std::vector<int> cursor(inc_ptr_.begin(), inc_ptr_.end() - 1);
    for (int e = 0; e < ne; ++e)
      for (int li = 0; li < 3; ++li) {
        const int i = mesh.element(e)[li];
        incidence_[static_cast<std::size_t>(cursor[i]++)] = {e, li};
      }
  }

  // Sparsity pattern: per row, the union of vertices of incident elements.
  std::vector<int> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> col_idx;
  col_idx.reserve(static_cast<std::size_t>(n) * 7);
  std::vector<int> nbr;
  for (int i = 0; i < n; ++i) {
    nbr.clear();
    for (int k = inc_ptr_[i]; k < inc_ptr_[i + 1]; ++k) {
      const auto& tri = mesh.element(incidence_[static_cast<std::size_t>(k)][0]);
      nbr.insert(nbr.end(), tri.begin(), tri.end());
    }
    std::sort(nbr.begin(), nbr.end());
    nbr.erase(std::unique(nbr.begin(), nbr.end()), nbr.end());
    col_idx.insert(col_idx.end(), nbr.begin(), nbr.end());
    row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<int>(col_idx.size());
  }
  pattern_ = std::make_shared<CsrPattern>(n, n, std::move(row_ptr),
                                          std::move(col_idx));

  // Slot of (row, tri[lj]) per incidence entry: phase 2 needs no searches.
  slot_.resize(incidence_.size() * 3);
  for (std::size_t k = 0; k < incidence_.size(); ++k) {
    const int e = incidence_[k][0];
    const int li = incidence_[k][1];
    const auto& tri = mesh.element(e);
    for (int lj = 0; lj < 3; ++lj)
      slot_[3 * k + static_cast<std::size_t>(lj)] =
          pattern_->find(tri[li], tri[lj]);
  }
}

SparseMatrix Assembler::gather_matrix(const std::vector<double>& local,
                                      const Exec& ex) const {
  SparseMatrix A(pattern_);
  auto& vals = A.values();
  const int n = mesh_->node_count();
  parallel_for(static_cast<std::size_t>(n), ex, [&](std::size_t i) {
    for (int k = inc_ptr_[i]; k < inc_ptr_[i + 1]; ++k) {
      const std::size_t kk = static_cast<std::size_t>(k);
      const std::size_t base =
          9u * static_cast<std::size_t>(incidence_[kk][0]) +
          3u * static_cast<std::size_t>(incidence_[kk][1]);
      for (std::size_t lj = 0; lj < 3; ++lj)
        vals[static_cast<std::size_t>(slot_[3 * kk + lj])] += local[base + lj];
    }
  });
  return A;
}

SparseMatrix Assembler::mass(const Exec& ex) const {
  const int ne = mesh_->element_count();
  std::vector<double> local(static_cast<std::size_t>(ne) * 9);
  parallel_for(static_cast<std::size_t>(ne), ex, [&](std::size_t e) {
    const double A = geom_[e].area;
    for (std::size_t li = 0; li < 3; ++li)
      for (std::size_t lj = 0; lj < 3; ++lj)
        local[9 * e + 3 * li + lj] = A / 12.0 * (li == lj ? 2.0 : 1.0);
  });
  SparseMatrix M = gather_matrix(local, ex);
  M.symmetric_hint = true;
  return M;
}

SparseMatrix Assembler::stiffness(const Exec& ex) const {
  const int ne = mesh_->element_count();
  std::vector<double> local(static_cast<std::size_t>(ne) * 9);
  parallel_for(static_cast<std::size_t>(ne), ex, [&](std::size_t e) {
    const ElementGeometry& g = geom_[e];
    for (std::size_t li = 0; li < 3; ++li)
      for (std::size_t lj = 0; lj < 3; ++lj)
        local[9 * e + 3 * li + lj] =
            g.area * (g.grad[li].x * g.grad[lj].x + g.grad[li].y * g.grad[lj].y);
  });
  SparseMatrix K = gather_matrix(local, ex);
  K.symmetric_hint = true;
  return K;
}

SparseMatrix Assembler::weighted_stiffness(const NodalFunction& w, int p,
                                           const Exec& ex) const {
  if (w.mesh != mesh_)
    throw std::invalid_argument("weighted_stiffness: weight lives on another mesh");
  if (p != 1 && p != 2)
    throw std::invalid_argument("weighted_stiffness: p must be 1 or 2");
  const int ne = mesh_->element_count();
  std::vector<double> local(static_cast<std::size_t>(ne) * 9);
  const auto& wv = w.values;
  parallel_for(static_cast<std::size_t>(ne), ex, [&](std::size_t e) {
    const ElementGeometry& g = geom_[e];
    const auto& tri = mesh_->element(static_cast<int>(e));
    const double w0 = wv[tri[0]], w1 = wv[tri[1]], w2 = wv[tri[2]];
    // int_K w   = |K| (w0+w1+w2)/3          (centroid rule, exact for P1)
    // int_K w^2 = |K|/6 (sum wi^2 + sum_{i<j} wi wj)   (exact for P1 squared)
    // The nodal average is divided out before scaling by the area so a unit
    // weight reproduces the plain stiffness entries bitwise.
    const double coef =
        p == 1 ? g.area * ((w0 + w1 + w2) / 3.0)
               : g.area *
                     ((w0 * w0 + w1 * w1 + w2 * w2 + w0 * w1 + w0 * w2 + w1 * w2) /
                      6.0);
    for (std::size_t li = 0; li < 3; ++li)
      for (std::size_t lj = 0; lj < 3; ++lj)
        local[9 * e + 3 * li + lj] =
            coef * (g.grad[li].x * g.grad[lj].x + g.grad[li].y * g.grad[lj].y);
  });
  SparseMatrix Kw = gather_matrix(local, ex);
  Kw.symmetric_hint = true;
  return Kw;
}

std::vector<double> Assembler::load(const std::function<double(double)>& g,
                                    const NodalFunction& u,
                                    const Exec& ex) const {
  if (u.mesh != mesh_)
    throw std::invalid_argument("load: field lives on another mesh");
  const int ne = mesh_->element_count();
  const QuadratureRule& rule = triangle_rule(4);
  std::vector<double> local(static_cast<std::size_t>(ne) * 3, 0.0);
  const auto& uv = u.values;
  std::atomic<bool> bad{false};
  parallel_for(static_cast<std::size_t>(ne), ex, [&](std::size_t e) {
    const double A = geom_[e].area;
    const auto& tri = mesh_->element(static_cast<int>(e));
    const double u0 = uv[tri[0]], u1 = uv[tri[1]], u2 = uv[tri[2]];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      const double gq = g(l[0] * u0 + l[1] * u1 + l[2] * u2);
      if (!std::isfinite(gq)) {
        bad.store(true, std::memory_order_relaxed);
        return;
      }
      const double aw = A * rule.weights[q] * gq;
      local[3 * e + 0] += aw * l[0];
      local[3 * e + 1] += aw * l[1];
      local[3 * e + 2] += aw * l[2];
    }
  });
  if (bad.load())
    throw std::domain_error("load: non-finite integrand");

  std::vector<double> b(static_cast<std::size_t>(mesh_->node_count()), 0.0);
  parallel_for(b.size(), ex, [&](std::size_t i) {
    double s = 0.0;
    for (int k = inc_ptr_[i]; k < inc_ptr_[i + 1]; ++k) {
      const auto& inc = incidence_[static_cast<std::size_t>(k)];
      s += local[3u * static_cast<std::size_t>(inc[0]) +
                 static_cast<std::size_t>(inc[1])];
    }
    b[i] = s;
  });
  return b;
}

SparseMatrix assemble_mass(const Mesh& mesh, const Exec& ex) {
  return Assembler(mesh).mass(ex);
}

SparseMatrix assemble_stiffness(const Mesh& mesh, const Exec& ex) {
  return Assembler(mesh).stiffness(ex);
}

SparseMatrix assemble_weighted_stiffness(const Mesh& mesh,
                                         const NodalFunction& w, int p,
                                         const Exec& ex) {
  return Assembler(mesh).weighted_stiffness(w, p, ex);
}

std::vector<double> assemble_load(const Mesh& mesh,
                                  const std::function<double(double)>& g,
                                  const NodalFunction& u, const Exec& ex) {
  return Assembler(mesh).load(g, u, ex);
}

double integrate_composed(const Mesh& mesh,
                          const std::function<double(double)>& g,
                          const NodalFunction& u, const Exec& ex) {
  if (u.mesh != &mesh)
    throw std::invalid_argument("integrate_composed: field lives on another mesh");
  const QuadratureRule& rule = triangle_rule(4);
  const auto& uv = u.values;
  return chunked_sum(
      static_cast<std::size_t>(mesh.element_count()), ex, [&](std::size_t e) {
        const ElementGeometry geo = mesh.element_geometry(static_cast<int>(e));
        const auto& tri = mesh.element(static_cast<int>(e));
        const double u0 = uv[tri[0]], u1 = uv[tri[1]], u2 = uv[tri[2]];
        double s = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
          const auto& l = rule.points[q];
          s += rule.weights[q] * g(l[0] * u0 + l[1] * u1 + l[2] * u2);
        }
        return geo.area * s;
      });
}

}  // namespace chcross
