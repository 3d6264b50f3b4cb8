#pragma once

#include <optional>

namespace chcross {

// Double-well potential F(s) = (1/4)(s^2 - 1)^2 with optional truncation.
//
// With a truncation radius M >= 1 the potential keeps the quartic profile on
// [-M, M] and continues it outside by the quadratic with matching value and
// slope at +-M:
//
//   F(s) = F(+-M) + f(+-M)(s -+ M) + (1/2) f'(M) (s -+ M)^2,   |s| > M,
//
// which makes F of class C^1 with a globally Lipschitz derivative f = F'.
// The Lipschitz constant of f is then L = 3 M^2 - 1, attained at s = +-M.
// Without truncation f' is unbounded and no Lipschitz constant exists.
class Potential {
 public:
  // Untruncated quartic well.
  Potential();

  // Truncated well with radius M (requires M >= 1).
  explicit Potential(double truncation_radius);

  bool truncated() const { return radius_.has_value(); }

  // Truncation radius M; throws std::logic_error if untruncated.
  double truncation_radius() const;

  // F(s).
  double value(double s) const;

  // f(s) = F'(s).
  double derivative(double s) const;

  // f'(s); piecewise polynomial, constant 3M^2 - 1 outside [-M, M].
  double second_derivative(double s) const;

  // Global Lipschitz constant L = 3M^2 - 1 of the truncated derivative;
  // throws std::logic_error for the untruncated well.
  double lipschitz_bound() const;

 private:
  std::optional<double> radius_;
};

}  // namespace chcross
