#pragma once

#include <cmath>

#include "magnon/types.hpp"

namespace magnon {

/// max_ij |a_ij - e^{i phi} b_ij| with phi chosen to maximize the overlap
/// <b, a> (Frobenius). Works for vectors and matrices alike.
template <class DerivedA, class DerivedB>
typename DerivedA::RealScalar phase_aligned_max_deviation(const Eigen::MatrixBase<DerivedA>& a,
                                                          const Eigen::MatrixBase<DerivedB>& b) {
  using Real = typename DerivedA::RealScalar;
  detail::require_same_size(a.rows(), b.rows(), "phase alignment (rows)");
  detail::require_same_size(a.cols(), b.cols(), "phase alignment (cols)");
  const auto overlap = (b.conjugate().cwiseProduct(a)).sum();
  Complex<Real> phase(1, 0);
  if (std::abs(overlap) > Real(0)) phase = overlap / std::abs(overlap);
  return (a - phase * b).cwiseAbs().maxCoeff();
}

/// Matrix power by repeated squaring.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> matrix_power(
    const Eigen::MatrixBase<Derived>& m, unsigned exponent) {
  using Out = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Out result = Out::Identity(m.rows(), m.cols());
  Out base = m;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

}  // namespace magnon
