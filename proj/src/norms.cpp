#include "chcross/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "chcross/quadrature.hpp"

namespace chcross {

namespace {

void check(const NodalFunction& v, double p) {
  if (v.mesh == nullptr) throw std::invalid_argument("norm: field has no mesh");
  if (!(p >= 1.0)) throw std::invalid_argument("norm: p must be >= 1");
}

bool is_integer(double p) { return std::floor(p) == p; }

}  // namespace

double lp_norm(const NodalFunction& v, double p, const Exec& ex) {
  check(v, p);
  const Mesh& mesh = *v.mesh;
  const QuadratureRule& rule =
      is_integer(p) ? triangle_rule(static_cast<int>(p) + 1) : triangle_rule(4);
  const auto& vv = v.values;
  const double total = chunked_sum(
      static_cast<std::size_t>(mesh.element_count()), ex, [&](std::size_t e) {
        const ElementGeometry geo = mesh.element_geometry(static_cast<int>(e));
        const auto& tri = mesh.element(static_cast<int>(e));
        const double v0 = vv[tri[0]], v1 = vv[tri[1]], v2 = vv[tri[2]];
        double s = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
          const auto& l = rule.points[q];
          const double val = l[0] * v0 + l[1] * v1 + l[2] * v2;
          s += rule.weights[q] * std::pow(std::abs(val), p);
        }
        return geo.area * s;
      });
  return std::pow(total, 1.0 / p);
}

double grad_lp_norm(const NodalFunction& v, double p, const Exec& ex) {
  check(v, p);
  const Mesh& mesh = *v.mesh;
  const auto& vv = v.values;
  const bool p_is_2 = p == 2.0;
  const double total = chunked_sum(
      static_cast<std::size_t>(mesh.element_count()), ex, [&](std::size_t e) {
        const ElementGeometry geo = mesh.element_geometry(static_cast<int>(e));
        const auto& tri = mesh.element(static_cast<int>(e));
        const double gx = vv[tri[0]] * geo.grad[0].x + vv[tri[1]] * geo.grad[1].x +
                          vv[tri[2]] * geo.grad[2].x;
        const double gy = vv[tri[0]] * geo.grad[0].y + vv[tri[1]] * geo.grad[1].y +
                          vv[tri[2]] * geo.grad[2].y;
        const double mag2 = gx * gx + gy * gy;
        return geo.area * (p_is_2 ? mag2 : std::pow(std::sqrt(mag2), p));
      });
  return std::pow(total, 1.0 / p);
}

double h1_norm(const NodalFunction& v, const Exec& ex) {
  const double a = lp_norm(v, 2.0, ex);
  const double b = grad_lp_norm(v, 2.0, ex);
  return std::sqrt(a * a + b * b);
}

double w1_6_5_norm(const NodalFunction& v, const Exec& ex) {
  const double p = 6.0 / 5.0;
  const double a = lp_norm(v, p, ex);
  const double b = grad_lp_norm(v, p, ex);
  return std::pow(std::pow(a, p) + std::pow(b, p), 1.0 / p);
}

double l2_inner_product(const NodalFunction& u, const NodalFunction& v,
                        const Exec& ex) {
  check(u, 2.0);
  check(v, 2.0);
  if (u.mesh != v.mesh) {
    throw std::invalid_argument("l2_inner_product: fields on different meshes");
  }
  const Mesh& mesh = *u.mesh;
  const auto& uu = u.values;
  const auto& vv = v.values;
  return chunked_sum(
      static_cast<std::size_t>(mesh.element_count()), ex, [&](std::size_t e) {
        const ElementGeometry geo = mesh.element_geometry(static_cast<int>(e));
        const auto& tri = mesh.element(static_cast<int>(e));
        const double u0 = uu[tri[0]], u1 = uu[tri[1]], u2 = uu[tri[2]];
        const double v0 = vv[tri[0]], v1 = vv[tri[1]], v2 = vv[tri[2]];
        return geo.area / 12.0 *
               (2.0 * (u0 * v0 + u1 * v1 + u2 * v2) + u0 * v1 + u0 * v2 +
                u1 * v0 + u1 * v2 + u2 * v0 + u2 * v1);
      });
}

}  // namespace chcross
