#pragma once

#include <cmath>
#include <cstdlib>

namespace magnon {

/// Ordinary Bessel function J_l(x) for any integer order and any real argument.
/// std::cyl_bessel_j only covers order >= 0 and x >= 0; the rest follows from
/// J_{-l}(x) = (-1)^l J_l(x) and J_l(-x) = (-1)^l J_l(x).
template <class Real>
Real bessel_j(long order, Real x) {
  const bool odd = (std::labs(order) % 2) == 1;
  Real sign = 1;
  if (order < 0 && odd) sign = -sign;
  if (x < 0 && odd) sign = -sign;
  const Real value = std::cyl_bessel_j(static_cast<Real>(std::labs(order)), std::abs(x));
  return sign * value;
}

}  // namespace magnon
