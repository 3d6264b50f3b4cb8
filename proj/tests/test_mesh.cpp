#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "chcross/mesh.hpp"

using namespace chcross;

TEST_SUITE("mesh") {

TEST_CASE("node and element counts") {
  const Mesh m(0.0, 1.0, 0.0, 1.0, 3, 2);
  CHECK(m.node_count() == 4 * 3);
  CHECK(m.element_count() == 2 * 3 * 2);
  CHECK(m.nx() == 3);
  CHECK(m.ny() == 2);
}

TEST_CASE("nodes are lexicographic with exact endpoints") {
  const Mesh m(-1.0, 2.0, 0.5, 4.5, 4, 3);
  for (int j = 0; j <= 3; ++j) {
    for (int i = 0; i <= 4; ++i) {
      const Vec2& p = m.node(j * 5 + i);
      CHECK(p.x == doctest::Approx(-1.0 + 3.0 * i / 4.0).epsilon(1e-15));
      CHECK(p.y == doctest::Approx(0.5 + 4.0 * j / 3.0).epsilon(1e-15));
    }
  }
  // Boundary nodes carry the exact interval endpoints, not accumulated sums.
  CHECK(m.node(4).x == 2.0);
  CHECK(m.node(3 * 5).y == 4.5);
  CHECK(m.node(3 * 5 + 4).x == 2.0);
  CHECK(m.node(3 * 5 + 4).y == 4.5);
}

TEST_CASE("elements are counterclockwise with positive area") {
  const Mesh m(0.0, 2.0, 0.0, 1.0, 5, 3);
  const double cell = (2.0 / 5.0) * (1.0 / 3.0);
  double total = 0.0;
  for (int e = 0; e < m.element_count(); ++e) {
    const ElementGeometry g = m.element_geometry(e);
    CHECK(g.area > 0.0);
    CHECK(g.area == doctest::Approx(cell / 2.0).epsilon(1e-13));
    total += g.area;
  }
  CHECK(total == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(m.area() == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("basis gradients sum to zero and match the unit right triangle") {
  const Mesh m(0.0, 1.0, 0.0, 1.0, 1, 1);
  // Lower triangle of the unit square: vertices (0,0), (1,0), (1,1).
  const ElementGeometry g = m.element_geometry(0);
  for (int k = 0; k < 2; ++k) {
    double sx = 0.0, sy = 0.0;
    const ElementGeometry ge = m.element_geometry(k);
    for (const Vec2& gr : ge.grad) {
      sx += gr.x;
      sy += gr.y;
    }
    CHECK(std::abs(sx) <= 1e-14);
    CHECK(std::abs(sy) <= 1e-14);
  }
  // Hat of vertex (0,0) on triangle ((0,0),(1,0),(1,1)) is 1 - x.
  CHECK(g.grad[0].x == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(g.grad[0].y == doctest::Approx(0.0).epsilon(1e-14));
  // Hat of vertex (1,0) is x - y.
  CHECK(g.grad[1].x == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.grad[1].y == doctest::Approx(-1.0).epsilon(1e-14));
  // Hat of vertex (1,1) is y.
  CHECK(g.grad[2].x == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(g.grad[2].y == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("mesh size is the element diameter") {
  const Mesh m(0.0, 3.0, 0.0, 4.0, 3, 4);
  CHECK(m.h() == doctest::Approx(std::hypot(1.0, 1.0)).epsilon(1e-14));
  const Mesh anis(0.0, 4.0, 0.0, 1.0, 2, 2);
  CHECK(anis.h() == doctest::Approx(std::hypot(2.0, 0.5)).epsilon(1e-14));
}

TEST_CASE("constructor validates its arguments") {
  CHECK_THROWS_AS(Mesh(0.0, 1.0, 0.0, 1.0, 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(Mesh(0.0, 1.0, 0.0, 1.0, 4, -1), std::invalid_argument);
  CHECK_THROWS_AS(Mesh(1.0, 1.0, 0.0, 1.0, 4, 4), std::invalid_argument);
  CHECK_THROWS_AS(Mesh(0.0, 1.0, 2.0, 1.0, 4, 4), std::invalid_argument);
}

TEST_CASE("element_geometry rejects out-of-range indices") {
  const Mesh m(0.0, 1.0, 0.0, 1.0, 2, 2);
  CHECK_THROWS_AS(m.element_geometry(-1), std::invalid_argument);
  CHECK_THROWS_AS(m.element_geometry(m.element_count()), std::invalid_argument);
}

TEST_CASE("interpolate_nodal evaluates at the nodes") {
  const Mesh m(0.0, 1.0, 0.0, 2.0, 2, 2);
  const NodalFunction u =
      interpolate_nodal(m, [](double x, double y) { return x + 2.0 * y; });
  REQUIRE(u.mesh == &m);
  REQUIRE(static_cast<int>(u.values.size()) == m.node_count());
  for (int i = 0; i < m.node_count(); ++i) {
    CHECK(u.values[i] ==
          doctest::Approx(m.node(i).x + 2.0 * m.node(i).y).epsilon(1e-15));
  }
}

TEST_CASE("interpolate_nodal rejects non-finite data") {
  const Mesh m(0.0, 1.0, 0.0, 1.0, 2, 2);
  CHECK_THROWS_AS(interpolate_nodal(m,
                                    [](double x, double y) {
                                      return x == 0.0 && y == 0.0
                                                 ? std::numeric_limits<
                                                       double>::infinity()
                                                 : 1.0;
                                    }),
                  std::domain_error);
  CHECK_THROWS_AS(interpolate_nodal(m,
                                    [](double, double) {
                                      return std::numeric_limits<
                                          double>::quiet_NaN();
                                    }),
                  std::domain_error);
}

TEST_CASE("transfer_to_mesh onto the same mesh is the identity") {
  const Mesh m(0.0, 6.283185307179586, 0.0, 6.283185307179586, 7, 7);
  const NodalFunction u = interpolate_nodal(
      m, [](double x, double y) { return std::cos(x) * std::sin(y) + 0.25; });
  const NodalFunction v = transfer_to_mesh(u, m);
  REQUIRE(v.values.size() == u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    CHECK(v.values[i] == u.values[i]);  // bitwise
  }
}

TEST_CASE("transfer between nested meshes is exact at shared nodes") {
  const Mesh fine(0.0, 2.0, 0.0, 2.0, 16, 16);
  const Mesh coarse(0.0, 2.0, 0.0, 2.0, 8, 8);
  const NodalFunction uf = interpolate_nodal(
      fine, [](double x, double y) { return std::cos(3.0 * x) + y * y; });
  const NodalFunction uc = transfer_to_mesh(uf, coarse);
  for (int j = 0; j <= 8; ++j) {
    for (int i = 0; i <= 8; ++i) {
      const double vf = uf.values[(2 * j) * 17 + 2 * i];
      CHECK(uc.values[j * 9 + i] == vf);  // bitwise at coincident nodes
    }
  }
}

TEST_CASE("transfer reproduces affine functions on non-nested meshes") {
  const Mesh src(0.0, 1.0, 0.0, 1.0, 4, 4);
  const Mesh dst(0.0, 1.0, 0.0, 1.0, 7, 5);
  const auto f = [](double x, double y) { return 2.0 * x - 3.0 * y + 1.0; };
  const NodalFunction u = interpolate_nodal(src, f);
  const NodalFunction v = transfer_to_mesh(u, dst);
  for (int i = 0; i < dst.node_count(); ++i) {
    CHECK(v.values[i] ==
          doctest::Approx(f(dst.node(i).x, dst.node(i).y)).epsilon(1e-12));
  }
}

TEST_CASE("transfer rejects a different rectangle") {
  const Mesh a(0.0, 1.0, 0.0, 1.0, 4, 4);
  const Mesh b(0.0, 2.0, 0.0, 1.0, 4, 4);
  const NodalFunction u(a, 1.0);
  CHECK_THROWS_AS(transfer_to_mesh(u, b), std::invalid_argument);
  CHECK(a.same_domain(a));
  CHECK_FALSE(a.same_domain(b));
}

}  // TEST_SUITE
