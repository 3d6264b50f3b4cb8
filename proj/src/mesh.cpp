#include "chcross/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chcross {

Mesh::Mesh(double x0, double x1, double y0, double y1, int nx, int ny)
    : x0_(x0), x1_(x1), y0_(y0), y1_(y1), nx_(nx), ny_(ny) {
  if (!(x1 > x0) || !(y1 > y0))
    throw std::invalid_argument("Mesh: domain bounds must satisfy x1 > x0, y1 > y0");
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("Mesh: nx and ny must be at least 1");
  hx_ = (x1 - x0) / nx;
  hy_ = (y1 - y0) / ny;

  nodes_.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    const double y = j == ny ? y1 : y0 + j * hy_;
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? x1 : x0 + i * hx_;
      nodes_.push_back({x, y});
    }
  }

  elements_.reserve(static_cast<std::size_t>(2) * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = j * (nx + 1) + i;
      const int b = a + 1;
      const int c = b + (nx + 1);
      const int d = a + (nx + 1);
      elements_.push_back({a, b, c});
      elements_.push_back({a, c, d});
    }
  }
}

double Mesh::h() const { return std::hypot(hx_, hy_); }

double Mesh::area() const { return (x1_ - x0_) * (y1_ - y0_); }

bool Mesh::same_domain(const Mesh& other) const {
  return x0_ == other.x0_ && x1_ == other.x1_ && y0_ == other.y0_ &&
         y1_ == other.y1_;
}

ElementGeometry Mesh::element_geometry(int e) const {
  if (e < 0 || e >= element_count())
    throw std::invalid_argument("element_geometry: index " + std::to_string(e) +
                                " out of range");
  const auto& tri = elements_[e];
  const Vec2& p0 = nodes_[tri[0]];
  const Vec2& p1 = nodes_[tri[1]];
  const Vec2& p2 = nodes_[tri[2]];
  const double det =
      (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  ElementGeometry g;
  g.area = 0.5 * det;
  // Gradients of the barycentric coordinates; rows are rotated edge vectors
  // divided by det, so grad[0] + grad[1] + grad[2] = 0 exactly in real
  // arithmetic.
  g.grad[0] = {(p1.y - p2.y) / det, (p2.x - p1.x) / det};
  g.grad[1] = {(p2.y - p0.y) / det, (p0.x - p2.x) / det};
  g.grad[2] = {(p0.y - p1.y) / det, (p1.x - p0.x) / det};
  return g;
}

Mesh build_rect_mesh(double x0, double x1, double y0, double y1, int nx, int ny) {
  return Mesh(x0, x1, y0, y1, nx, ny);
}

NodalFunction interpolate_nodal(const Mesh& mesh,
                                const std::function<double(double, double)>& f) {
  NodalFunction u(mesh);
  for (int i = 0; i < mesh.node_count(); ++i) {
    const Vec2& p = mesh.node(i);
    const double v = f(p.x, p.y);
    if (!std::isfinite(v))
      throw std::domain_error("interpolate_nodal: non-finite value at node " +
                              std::to_string(i));
    u.values[static_cast<std::size_t>(i)] = v;
  }
  return u;
}

namespace {

// Splits t in [0, n] into cell index and local coordinate in [0, 1], snapping
// within 1e-12 of a grid line so that coincident nodes transfer exactly.
void locate(double t, int n, int* cell, double* local) {
  double fl = std::floor(t);
  double frac = t - fl;
  int i = static_cast<int>(fl);
  if (frac > 1.0 - 1e-12) {
    i += 1;
    frac = 0.0;
  } else if (frac < 1e-12) {
    frac = 0.0;
  }
  if (i < 0) {
    i = 0;
    frac = 0.0;
  }
  if (i >= n) {
    i = n - 1;
    frac = 1.0;
  }
  *cell = i;
  *local = frac;
}

}  // namespace

NodalFunction transfer_to_mesh(const NodalFunction& src, const Mesh& dst) {
  if (src.mesh == nullptr)
    throw std::invalid_argument("transfer_to_mesh: source has no mesh");
  const Mesh& sm = *src.mesh;
  if (!sm.same_domain(dst))
    throw std::invalid_argument("transfer_to_mesh: meshes cover different rectangles");

  NodalFunction out(dst);
  const int snx = sm.nx();
  const auto& v = src.values;
  for (int k = 0; k < dst.node_count(); ++k) {
    const Vec2& p = dst.node(k);
    int i, j;
    double xi, eta;
    locate((p.x - sm.x0()) / sm.hx(), snx, &i, &xi);
    locate((p.y - sm.y0()) / sm.hy(), sm.ny(), &j, &eta);
    const int a = j * (snx + 1) + i;
    const int b = a + 1;
    const int c = b + (snx + 1);
    const int d = a + (snx + 1);
    double val;
    if (xi == 0.0 && eta == 0.0) {
      // Snapped corners copy the nodal value bitwise; the affine formulas
      // below would reintroduce roundoff (va + (vb - va) need not equal vb).
      val = v[a];
    } else if (xi == 1.0 && eta == 0.0) {
      val = v[b];
    } else if (xi == 1.0 && eta == 1.0) {
      val = v[c];
    } else if (xi == 0.0 && eta == 1.0) {
      val = v[d];
    } else if (xi >= eta) {
      // lower triangle (a,b,c): affine with v(0,0)=va, v(1,0)=vb, v(1,1)=vc
      val = v[a] + (v[b] - v[a]) * xi + (v[c] - v[b]) * eta;
    } else {
      // upper triangle (a,c,d): affine with v(0,0)=va, v(1,1)=vc, v(0,1)=vd
      val = v[a] + (v[c] - v[d]) * xi + (v[d] - v[a]) * eta;
    }
    out.values[static_cast<std::size_t>(k)] = val;
  }
  return out;
}

}  // namespace chcross
