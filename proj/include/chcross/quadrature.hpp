#pragma once

#include <array>
#include <vector>

namespace chcross {

// Quadrature rule on the reference triangle in barycentric coordinates.
// Weights sum to 1; an integral over a physical element K is
// |K| * sum_q w_q * g(point_q). All rules have strictly positive weights,
// which the discrete energy inequality relies on (the pointwise convexity
// argument must survive quadrature).
struct QuadratureRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

// Smallest built-in rule exact for polynomials up to the requested total
// degree: centroid (1), 3-point (2), Dunavant 6-point (3-4), and a collapsed
// tensor product rule beyond. Returned references are to cached immutable
// rules. Throws std::invalid_argument for negative degree.
const QuadratureRule& triangle_rule(int degree);

// Collapsed (Duffy) construction: maps a tensor Gauss-Legendre grid on the
// unit square through (u, v) -> (u(1-v), v) with Jacobian (1-v). Exact for
// the requested degree with positive weights; also serves as an arbitrarily
// high-order rule generator.
QuadratureRule collapsed_product_rule(int degree);

// Gauss-Legendre nodes and weights on [0, 1] (weights sum to 1).
void gauss_legendre_01(int n, std::vector<double>* x, std::vector<double>* w);

}  // namespace chcross
