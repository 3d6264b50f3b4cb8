#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "chcross/potential.hpp"

using namespace chcross;

TEST_SUITE("potential") {

TEST_CASE("untruncated quartic well") {
  const Potential F;
  CHECK_FALSE(F.truncated());
  CHECK(F.value(0.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(F.value(1.0) == 0.0);
  CHECK(F.value(-1.0) == 0.0);
  CHECK(F.value(3.0) == doctest::Approx(16.0).epsilon(1e-15));
  CHECK(F.derivative(2.0) == doctest::Approx(6.0).epsilon(1e-15));  // 8 - 2
  CHECK(F.derivative(0.0) == 0.0);
  CHECK(F.derivative(-2.0) == doctest::Approx(-6.0).epsilon(1e-15));
  CHECK(F.second_derivative(2.0) == doctest::Approx(11.0).epsilon(1e-15));
  CHECK_THROWS_AS(F.lipschitz_bound(), std::logic_error);
  CHECK_THROWS_AS(F.truncation_radius(), std::logic_error);
}

TEST_CASE("truncated well keeps the quartic inside the radius") {
  const Potential F(2.0);
  CHECK(F.truncated());
  CHECK(F.truncation_radius() == 2.0);
  CHECK(F.lipschitz_bound() == doctest::Approx(11.0).epsilon(1e-15));
  // |s| <= M: untouched quartic values.
  CHECK(F.value(2.0) == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(F.value(-0.5) == Potential().value(-0.5));
  CHECK(F.derivative(1.5) == Potential().derivative(1.5));
}

TEST_CASE("quadratic continuation outside the radius") {
  const Potential F(2.0);
  // f is linear with slope L = 3M^2 - 1 = 11 outside: f(10) = f(2) + 11*8.
  CHECK(F.derivative(10.0) == doctest::Approx(6.0 + 11.0 * 8.0).epsilon(1e-14));
  CHECK(F.derivative(-10.0) ==
        doctest::Approx(-(6.0 + 11.0 * 8.0)).epsilon(1e-14));
  CHECK(F.second_derivative(5.0) == doctest::Approx(11.0).epsilon(1e-15));
  CHECK(F.second_derivative(-7.0) == doctest::Approx(11.0).epsilon(1e-15));
  // F itself continues with the matching quadratic.
  const double s = 3.25;
  const double want = 2.25 + 6.0 * (s - 2.0) + 0.5 * 11.0 * (s - 2.0) * (s - 2.0);
  CHECK(F.value(s) == doctest::Approx(want).epsilon(1e-14));
  CHECK(F.value(3.0) == doctest::Approx(13.75).epsilon(1e-14));

  const Potential G(1.5);
  CHECK(G.lipschitz_bound() == doctest::Approx(5.75).epsilon(1e-15));
  // F(1.5) + f(1.5)(3 - 1.5) + (L/2)(3 - 1.5)^2 with F(1.5) = 25/64.
  CHECK(G.value(3.0) == doctest::Approx(9.671875).epsilon(1e-14));
}

TEST_CASE("C1 gluing at the truncation radius") {
  for (double M : {1.0, 1.5, 2.0, 3.7}) {
    const Potential F(M);
    for (double sign : {1.0, -1.0}) {
      const double at = sign * M;
      const double h = 1e-7;
      // Value and first derivative continuous across the seam.
      CHECK(F.value(at + sign * h) - F.value(at) ==
            doctest::Approx(sign * F.derivative(at) * h).epsilon(1e-6));
      CHECK(F.derivative(at + sign * h) - F.derivative(at) ==
            doctest::Approx(sign * F.second_derivative(at) * h).epsilon(1e-6));
    }
  }
}

TEST_CASE("finite differences confirm f = F'") {
  const Potential F(1.5);
  const Potential G;
  const double h = 1e-6;
  for (double s = -4.0; s <= 4.0; s += 0.37) {
    const double fd_f = (F.value(s + h) - F.value(s - h)) / (2.0 * h);
    CHECK(F.derivative(s) == doctest::Approx(fd_f).epsilon(1e-6));
    const double fd_g = (G.value(s + h) - G.value(s - h)) / (2.0 * h);
    CHECK(G.derivative(s) == doctest::Approx(fd_g).epsilon(1e-6));
  }
}

TEST_CASE("derivative slope is bounded by the Lipschitz constant") {
  const Potential F(1.5);
  const double L = F.lipschitz_bound();
  for (double s = -20.0; s <= 20.0; s += 0.0917) {
    CHECK(std::abs(F.second_derivative(s)) <= L + 1e-12);
  }
  // The bound is attained at the seam.
  CHECK(F.second_derivative(1.5) == doctest::Approx(L).epsilon(1e-14));
}

TEST_CASE("truncated f is monotone where the quartic is steepest") {
  // Between the wells f dips; outside, the continuation keeps |f| growing
  // linearly, never flattening out.
  const Potential F(2.0);
  double prev = F.derivative(2.0);
  for (double s = 2.1; s < 12.0; s += 0.1) {
    const double cur = F.derivative(s);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("radius below one is rejected") {
  CHECK_THROWS_AS(Potential(0.5), std::invalid_argument);
  CHECK_THROWS_AS(Potential(-2.0), std::invalid_argument);
  CHECK_THROWS_AS(Potential(std::nan("")), std::invalid_argument);
  CHECK_NOTHROW(Potential(1.0));
}

}  // TEST_SUITE
