#include "chcross/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace chcross {

namespace {

QuadratureRule make_degree1() {
  QuadratureRule r;
  r.degree = 1;
  r.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
  r.weights = {1.0};
  return r;
}

QuadratureRule make_degree2() {
  QuadratureRule r;
  r.degree = 2;
  const double a = 2.0 / 3.0, b = 1.0 / 6.0;
  r.points = {{a, b, b}, {b, a, b}, {b, b, a}};
  r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return r;
}

QuadratureRule make_degree4() {
  // Dunavant 6-point rule, exact to degree 4, all weights positive.
  QuadratureRule r;
  r.degree = 4;
  const double a = 0.445948490915964886318329253883254;
  const double wa = 0.223381589678011471811203136894619;
  const double b = 0.091576213509770743459571463402202;
  const double wb = 0.109951743655321868903270146790906;
  auto push = [&r](double l0, double l1, double l2, double w) {
    r.points.push_back({l0, l1, l2});
    r.weights.push_back(w);
  };
  push(1.0 - 2.0 * a, a, a, wa);
  push(a, 1.0 - 2.0 * a, a, wa);
  push(a, a, 1.0 - 2.0 * a, wa);
  push(1.0 - 2.0 * b, b, b, wb);
  push(b, 1.0 - 2.0 * b, b, wb);
  push(b, b, 1.0 - 2.0 * b, wb);
  return r;
}

}  // namespace

void gauss_legendre_01(int n, std::vector<double>* x, std::vector<double>* w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_01: n must be >= 1");
  x->assign(static_cast<std::size_t>(n), 0.0);
  w->assign(static_cast<std::size_t>(n), 0.0);
  // Newton iteration on P_n over [-1, 1], then map to [0, 1].
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      if (n == 1) p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? t : p1;
      const double pm = n == 1 ? 1.0 : p0;
      pp = n * (t * pn - pm) / (t * t - 1.0);
      const double dt = pn / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    (*x)[static_cast<std::size_t>(i)] = 0.5 * (1.0 - t);  // descending t -> ascending x
    (*w)[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - t * t) * pp * pp);
  }
}

QuadratureRule collapsed_product_rule(int degree) {
  if (degree < 0)
    throw std::invalid_argument("collapsed_product_rule: negative degree");
  // The Jacobian (1-v) raises the v-degree by one: n Gauss points are exact
  // to 2n-1, so n = (degree + 3) / 2 covers both directions.
  const int n = (degree + 3) / 2;
  std::vector<double> gx, gw;
  gauss_legendre_01(n, &gx, &gw);
  QuadratureRule r;
  r.degree = degree;
  for (int iu = 0; iu < n; ++iu) {
    for (int iv = 0; iv < n; ++iv) {
      const double u = gx[static_cast<std::size_t>(iu)];
      const double v = gx[static_cast<std::size_t>(iv)];
      const double x = u * (1.0 - v);
      const double y = v;
      r.points.push_back({1.0 - x - y, x, y});
      // Raw weight integrates over the triangle of area 1/2; the factor 2
      // normalizes to the sum-to-one convention.
      r.weights.push_back(2.0 * gw[static_cast<std::size_t>(iu)] *
                          gw[static_cast<std::size_t>(iv)] * (1.0 - v));
    }
  }
  return r;
}

const QuadratureRule& triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_rule: negative degree");
  static const QuadratureRule deg1 = make_degree1();
  static const QuadratureRule deg2 = make_degree2();
  static const QuadratureRule deg4 = make_degree4();
  if (degree <= 1) return deg1;
  if (degree == 2) return deg2;
  if (degree <= 4) return deg4;
  static std::map<int, QuadratureRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(degree);
  if (it == cache.end())
    it = cache.emplace(degree, collapsed_product_rule(degree)).first;
  return it->second;
}

}  // namespace chcross
