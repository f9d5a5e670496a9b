// Delta-kicked rotor in the cosine basis |m> = cos(m theta)/sqrt(pi), m >= 1,
// and its correspondence with the kicked chain:
//   chain site m  <->  rotor level m,   2*J*T0 <-> k,   n0 <-> P0/hbar,   C_j <-> hbar.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "magnon/chain.hpp"

namespace magnon {

template <class Real = double>
struct RotorParams {
  Real k = 0;              ///< kick strength K/hbar
  Real hbar_eff = 0;       ///< effective Planck constant
  long n_tilde0 = 0;       ///< momentum offset P0/hbar
  Index size = 0;          ///< basis truncation, levels 1..size

  static Index minimum_size(Real k) {
    return static_cast<Index>(std::ceil(8 * (std::abs(static_cast<double>(k)) + 10)));
  }

  void validate() const {
    if (size < minimum_size(k)) {
      throw ValidationError("rotor: size must be >= 8*(|k| + 10) = " +
                            std::to_string(minimum_size(k)));
    }
  }
};

/// Coefficients over cos(m theta)/sqrt(pi), m = 1..size.
template <class Real = double>
class RotorState {
 public:
  explicit RotorState(ComplexVector<Real> coefficients) : coefficients_(std::move(coefficients)) {
    const Real deviation = std::abs(coefficients_.squaredNorm() - Real(1));
    if (!(deviation <= ExcitationState<Real>::norm_tolerance())) {
      throw ValidationError("rotor state: coefficients not normalized");
    }
  }

  /// The chain state mapped level-for-site onto a rotor basis of `size` levels.
  static RotorState from_chain(const ExcitationState<Real>& s, Index size) {
    if (size < s.sites()) throw ValidationError("rotor state: size smaller than chain");
    ComplexVector<Real> c = ComplexVector<Real>::Zero(size);
    c.head(s.sites()) = s.amplitudes();
    return RotorState(std::move(c));
  }

  Index size() const { return coefficients_.size(); }
  const ComplexVector<Real>& coefficients() const { return coefficients_; }
  Complex<Real> operator()(Index level) const { return coefficients_(level - 1); }

 private:
  ComplexVector<Real> coefficients_;
};

/// Diagonal of u(hbar): exp[-i (hbar/2) (n - n_tilde0)^2], n = 1..size.
template <class Real>
ComplexVector<Real> rotor_kick_u(Real hbar_eff, long n_tilde0, Index size) {
  ComplexVector<Real> d(size);
  for (Index n = 1; n <= size; ++n) {
    d(n - 1) = detail::parabolic_phase(hbar_eff, static_cast<long long>(n - n_tilde0));
  }
  return d;
}

/// <m| exp(i k cos theta) |n> = i^(m-n) J_{m-n}(k) + i^(m+n) J_{m+n}(k), m, n >= 1.
/// The second term is the reflection off the m = 0 end of the half-line.
template <class Real>
ComplexMatrix<Real> rotor_free_v_exact(Real k, Index size) {
  ComplexMatrix<Real> v(size, size);
  for (Index m = 1; m <= size; ++m) {
    for (Index n = 1; n <= size; ++n) {
      const long d = static_cast<long>(m - n);
      const long s = static_cast<long>(m + n);
      v(m - 1, n - 1) = detail::i_pow<Real>(d) * bessel_j<Real>(d, k) +
                        detail::i_pow<Real>(s) * bessel_j<Real>(s, k);
    }
  }
  return v;
}

/// One period at the hbar = 4*pi resonance, where u is the identity for
/// integer offsets and only exp(i k cos theta) remains.
template <class Real>
ComplexMatrix<Real> resonance_propagator(Real k, Index size) {
  return rotor_free_v_exact(k, size);
}

/// max |v(k) - u(2 pi) v(-k) u(2 pi)| with n_tilde0 = 0.
template <class Real>
Real parity_identity_residual(Real k, Index size) {
  const ComplexVector<Real> stagger = rotor_kick_u(2 * pi_v<Real>, 0, size);
  const ComplexMatrix<Real> lhs = rotor_free_v_exact(k, size);
  const ComplexMatrix<Real> rhs =
      stagger.asDiagonal() * rotor_free_v_exact(-k, size) * stagger.asDiagonal();
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

/// max |chainV(m, n) - rotorV(m, n)| over m, n in the window.
template <class Real>
Real mapping_residual(const Propagator<Real>& chain_v, const ComplexMatrix<Real>& rotor_v,
                      SiteWindow window) {
  if (window.first < 1 || window.first > window.last || window.last > chain_v.dimension() ||
      window.last > rotor_v.rows()) {
    throw ValidationError("mapping residual: window outside chain or rotor basis");
  }
  const Index first = window.first - 1;
  const Index count = window.last - window.first + 1;
  return (chain_v.matrix().block(first, first, count, count) -
          rotor_v.block(first, first, count, count))
      .cwiseAbs()
      .maxCoeff();
}

template <class Real = double>
struct PhasePoint {
  Index step = 0;
  Real theta = 0;
  Real p = 0;
};

/// Standard map p <- p + K sin(theta), theta <- theta + p (mod 2 pi).
/// The returned trajectory has steps + 1 points, starting with the initial one.
template <class Real>
std::vector<PhasePoint<Real>> classical_standard_map(Real kick, Real theta0, Real p0, Index steps) {
  const Real two_pi = 2 * pi_v<Real>;
  std::vector<PhasePoint<Real>> out;
  out.reserve(static_cast<std::size_t>(steps + 1));
  Real theta = theta0;
  Real p = p0;
  out.push_back({0, theta, p});
  for (Index t = 1; t <= steps; ++t) {
    p += kick * std::sin(theta);
    theta = std::fmod(theta + p, two_pi);
    if (theta < 0) theta += two_pi;
    out.push_back({t, theta, p});
  }
  return out;
}

}  // namespace magnon
