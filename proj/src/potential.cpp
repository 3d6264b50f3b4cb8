#include "chcross/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace chcross {

namespace {

double quartic_value(double s) {
  const double t = s * s - 1.0;
  return 0.25 * t * t;
}

double quartic_derivative(double s) { return s * s * s - s; }

}  // namespace

Potential::Potential() : radius_() {}

Potential::Potential(double truncation_radius) : radius_(truncation_radius) {
  if (!(truncation_radius >= 1.0) || !std::isfinite(truncation_radius)) {
    throw std::invalid_argument("Potential: truncation radius must be >= 1");
  }
}

double Potential::truncation_radius() const {
  if (!radius_) throw std::logic_error("Potential: untruncated well has no radius");
  return *radius_;
}

double Potential::value(double s) const {
  if (!radius_ || std::abs(s) <= *radius_) return quartic_value(s);
  const double m = *radius_;
  const double sign = s > 0.0 ? 1.0 : -1.0;
  const double d = s - sign * m;
  const double fm = sign * quartic_derivative(m);
  const double dfm = 3.0 * m * m - 1.0;
  return quartic_value(m) + fm * d + 0.5 * dfm * d * d;
}

double Potential::derivative(double s) const {
  if (!radius_ || std::abs(s) <= *radius_) return quartic_derivative(s);
  const double m = *radius_;
  const double sign = s > 0.0 ? 1.0 : -1.0;
  const double dfm = 3.0 * m * m - 1.0;
  return dfm * (s - sign * m) + sign * quartic_derivative(m);
}

double Potential::second_derivative(double s) const {
  if (!radius_ || std::abs(s) <= *radius_) return 3.0 * s * s - 1.0;
  const double m = *radius_;
  return 3.0 * m * m - 1.0;
}

double Potential::lipschitz_bound() const {
  if (!radius_) {
    throw std::logic_error(
        "Potential: untruncated well has no global Lipschitz bound");
  }
  const double m = *radius_;
  return 3.0 * m * m - 1.0;
}

}  // namespace chcross
