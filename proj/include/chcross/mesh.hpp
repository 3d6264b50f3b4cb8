#pragma once

#include <array>
#include <functional>
#include <vector>

namespace chcross {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Constant P1 geometry data of one triangle: positive area and the three
// (constant) basis-function gradients, which always sum to the zero vector.
struct ElementGeometry {
  double area = 0.0;
  std::array<Vec2, 3> grad{};
};

// Uniform conforming triangulation of the rectangle [x0,x1]x[y0,y1].
//
// Each of the nx*ny cells is cut along its lower-left -> upper-right
// diagonal into two counterclockwise triangles:
//
//   d---c      cell (i,j), node(i,j) = j*(nx+1) + i  (lexicographic, x fastest)
//   | / |      lower triangle (a,b,c), upper triangle (a,c,d)
//   a---b
//
// The mesh is immutable after construction and safe to share across threads.
class Mesh {
 public:
  Mesh(double x0, double x1, double y0, double y1, int nx, int ny);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int element_count() const { return static_cast<int>(elements_.size()); }
  const Vec2& node(int i) const { return nodes_[i]; }
  const std::array<int, 3>& element(int e) const { return elements_[e]; }
  const std::vector<std::array<int, 3>>& elements() const { return elements_; }

  double x0() const { return x0_; }
  double x1() const { return x1_; }
  double y0() const { return y0_; }
  double y1() const { return y1_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double h() const;       // mesh size: maximum element diameter
  double area() const;    // |Omega|

  bool same_domain(const Mesh& other) const;

  // Throws std::invalid_argument when e is out of range.
  ElementGeometry element_geometry(int e) const;

 private:
  double x0_, x1_, y0_, y1_;
  int nx_, ny_;
  double hx_, hy_;
  std::vector<Vec2> nodes_;
  std::vector<std::array<int, 3>> elements_;
};

// A P1 finite element function given by its nodal values. Non-owning mesh
// reference: the mesh must outlive the function.
struct NodalFunction {
  const Mesh* mesh = nullptr;
  std::vector<double> values;

  NodalFunction() = default;
  explicit NodalFunction(const Mesh& m, double fill = 0.0)
      : mesh(&m), values(static_cast<std::size_t>(m.node_count()), fill) {}
  NodalFunction(const Mesh& m, std::vector<double> v)
      : mesh(&m), values(std::move(v)) {}
};

Mesh build_rect_mesh(double x0, double x1, double y0, double y1, int nx, int ny);

// values[i] = f(node_i). Throws std::domain_error when f is non-finite at a node.
NodalFunction interpolate_nodal(const Mesh& mesh,
                                const std::function<double(double, double)>& f);

// Evaluates the P1 interpolant of src at every node of dst (same rectangle
// required). Exact when dst nodes coincide with src nodes; coordinates within
// 1e-12 of a src grid line are snapped so nested meshes transfer bitwise.
NodalFunction transfer_to_mesh(const NodalFunction& src, const Mesh& dst);

}  // namespace chcross
