// Single-excitation dynamics of an open Heisenberg chain kicked by a
// parabolic magnetic field.
//
// Conventions: sites are 1-based in every public interface; |m> is the state
// with spin m up and all others down. The single-excitation Hamiltonian keeps
// the hopping -J between neighbours and the -J shift on both end sites. The
// site-independent constants of the zz and uniform-field terms are dropped and
// reported alongside the matrix.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "magnon/bessel.hpp"
#include "magnon/types.hpp"

namespace magnon {

/// Static parameters of the chain and of the kicking field.
template <class Real = double>
struct ChainConfig {
  Index sites = 2;         ///< N
  Real coupling = 1;       ///< J
  Real period = 0;         ///< T0, time between kicks
  Index field_center = 1;  ///< n0, minimum of the parabolic field (1-based)
  Real field = 0;          ///< B, uniform field; only a global phase in the sector

  /// Dimensionless kick period 2*J*T0.
  Real dimensionless_period() const { return 2 * coupling * period; }

  /// Time t such that 2*J*t equals the given dimensionless duration.
  Real time_for(Real dimensionless) const { return dimensionless / (2 * coupling); }

  void validate() const {
    if (sites < 2) throw ValidationError("chain: N must be >= 2, got " + std::to_string(sites));
    if (field_center < 1 || field_center > sites) {
      throw ValidationError("chain: n0 must lie in [1, N], got " + std::to_string(field_center));
    }
    if (coupling == Real(0)) throw ValidationError("chain: J must be nonzero");
    if (!std::isfinite(static_cast<double>(period)) || period < 0) {
      throw ValidationError("chain: T0 must be finite and >= 0");
    }
  }
};

/// Normalized amplitude vector over the single-excitation basis.
template <class Real = double>
class ExcitationState {
 public:
  static Real norm_tolerance() {
    return std::max(Real(1e-12), Real(64) * std::numeric_limits<Real>::epsilon());
  }

  /// Validates that the amplitudes are normalized.
  explicit ExcitationState(ComplexVector<Real> amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 1) throw ValidationError("state: empty amplitude vector");
    const Real deviation = std::abs(amplitudes_.squaredNorm() - Real(1));
    if (!(deviation <= norm_tolerance())) {
      throw ValidationError("state: amplitudes not normalized (|sum|a|^2 - 1| = " +
                            std::to_string(static_cast<double>(deviation)) + ")");
    }
  }

  /// Wraps amplitudes produced by unitary evolution without re-checking the norm.
  static ExcitationState adopt(ComplexVector<Real> amplitudes) {
    ExcitationState s;
    s.amplitudes_ = std::move(amplitudes);
    return s;
  }

  static ExcitationState basis(Index sites, Index site) {
    if (site < 1 || site > sites) throw ValidationError("state: basis site out of range");
    ComplexVector<Real> v = ComplexVector<Real>::Zero(sites);
    v(site - 1) = Real(1);
    return ExcitationState(std::move(v));
  }

  Index sites() const { return amplitudes_.size(); }
  const ComplexVector<Real>& amplitudes() const { return amplitudes_; }
  Complex<Real> operator()(Index site) const { return amplitudes_(site - 1); }
  Real norm() const { return amplitudes_.norm(); }

 private:
  ExcitationState() = default;
  ComplexVector<Real> amplitudes_;
};

enum class PropagatorKind { free_step, kick, product, bessel_approx };

inline const char* to_string(PropagatorKind kind) {
  switch (kind) {
    case PropagatorKind::free_step: return "free-step";
    case PropagatorKind::kick: return "kick";
    case PropagatorKind::product: return "product";
    case PropagatorKind::bessel_approx: return "bessel-approx";
  }
  return "unknown";
}

/// Dense operator acting on ExcitationState.
template <class Real = double>
class Propagator {
 public:
  Propagator(ComplexMatrix<Real> matrix, PropagatorKind kind)
      : matrix_(std::move(matrix)), kind_(kind) {
    detail::require_same_size(matrix_.rows(), matrix_.cols(), "propagator");
  }

  static Propagator identity(Index dimension) {
    return Propagator(ComplexMatrix<Real>::Identity(dimension, dimension), PropagatorKind::product);
  }

  Index dimension() const { return matrix_.rows(); }
  const ComplexMatrix<Real>& matrix() const { return matrix_; }
  PropagatorKind kind() const { return kind_; }

  /// max_ij |(P^dagger P - I)_ij|
  Real unitarity_error() const {
    const ComplexMatrix<Real> g = matrix_.adjoint() * matrix_;
    return (g - ComplexMatrix<Real>::Identity(dimension(), dimension())).cwiseAbs().maxCoeff();
  }

  ExcitationState<Real> apply(const ExcitationState<Real>& state) const {
    detail::require_same_size(dimension(), state.sites(), "propagator apply");
    return ExcitationState<Real>::adopt(matrix_ * state.amplitudes());
  }

  friend Propagator operator*(const Propagator& lhs, const Propagator& rhs) {
    detail::require_same_size(lhs.dimension(), rhs.dimension(), "propagator product");
    return Propagator(lhs.matrix_ * rhs.matrix_, PropagatorKind::product);
  }

 private:
  ComplexMatrix<Real> matrix_;
  PropagatorKind kind_;
};

/// H1 together with the constants removed from it.
template <class Real = double>
struct SingleExcitationHamiltonian {
  RealMatrix<Real> matrix;
  Real exchange_offset = 0;  ///< -J(N-5)/2 from the zz terms
  Real field_offset = 0;     ///< -B(2-N) from the uniform field
};

template <class Real>
SingleExcitationHamiltonian<Real> build_single_excitation_hamiltonian(const ChainConfig<Real>& cfg) {
  const Index n = cfg.sites;
  if (n < 2) throw ValidationError("hamiltonian: N must be >= 2, got " + std::to_string(n));
  const Real j = cfg.coupling;
  SingleExcitationHamiltonian<Real> h;
  h.matrix = RealMatrix<Real>::Zero(n, n);
  for (Index m = 0; m + 1 < n; ++m) {
    h.matrix(m, m + 1) = -j;
    h.matrix(m + 1, m) = -j;
  }
  h.matrix(0, 0) = -j;
  h.matrix(n - 1, n - 1) = -j;
  h.exchange_offset = -j * Real(n - 5) / 2;
  h.field_offset = -cfg.field * Real(2 - n);
  return h;
}

/// Eigendecomposition of a real symmetric matrix, reused to build exp(-iHt)
/// for any t.
template <class Real = double>
class SpectralDecomposition {
 public:
  explicit SpectralDecomposition(const RealMatrix<Real>& hermitian) {
    detail::require_same_size(hermitian.rows(), hermitian.cols(), "spectral decomposition");
    Eigen::SelfAdjointEigenSolver<RealMatrix<Real>> solver(hermitian);
    if (solver.info() != Eigen::Success) throw NumericalAlarm("spectral decomposition failed");
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
  }

  const RealVector<Real>& eigenvalues() const { return eigenvalues_; }
  const RealMatrix<Real>& eigenvectors() const { return eigenvectors_; }
  Index dimension() const { return eigenvalues_.size(); }

  Real reconstruction_error(const RealMatrix<Real>& source) const {
    const RealMatrix<Real> r = eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.transpose();
    return (r - source).cwiseAbs().maxCoeff();
  }

  Real orthonormality_error() const {
    const Index n = dimension();
    return (eigenvectors_.transpose() * eigenvectors_ - RealMatrix<Real>::Identity(n, n))
        .cwiseAbs()
        .maxCoeff();
  }

  ComplexVector<Real> phases(Real t) const {
    ComplexVector<Real> p(dimension());
    for (Index k = 0; k < dimension(); ++k) p(k) = std::polar(Real(1), -eigenvalues_(k) * t);
    return p;
  }

  /// exp(-i H t)
  ComplexMatrix<Real> exponential(Real t) const {
    const ComplexMatrix<Real> q = eigenvectors_.template cast<Complex<Real>>();
    return q * phases(t).asDiagonal() * q.transpose();
  }

  /// exp(-i H t) v in O(N^2).
  ComplexVector<Real> evolve(const ComplexVector<Real>& v, Real t) const {
    detail::require_same_size(dimension(), v.size(), "spectral evolve");
    const ComplexMatrix<Real> q = eigenvectors_.template cast<Complex<Real>>();
    ComplexVector<Real> c = q.transpose() * v;
    c = c.cwiseProduct(phases(t));
    return q * c;
  }

 private:
  RealVector<Real> eigenvalues_;
  RealMatrix<Real> eigenvectors_;
};

template <class Real>
Propagator<Real> free_propagator(const SpectralDecomposition<Real>& spectrum, Real t) {
  return Propagator<Real>(spectrum.exponential(t), PropagatorKind::free_step);
}

template <class Real>
Propagator<Real> free_propagator(const RealMatrix<Real>& hamiltonian, Real t) {
  return free_propagator(SpectralDecomposition<Real>(hamiltonian), t);
}

/// Infinite-chain kernel i^(m-n) J_{m-n}(x) restricted to N sites. Only
/// approximately unitary.
template <class Real>
Propagator<Real> bessel_kernel(Index sites, Real x) {
  ComplexMatrix<Real> k(sites, sites);
  for (Index m = 0; m < sites; ++m) {
    for (Index n = 0; n < sites; ++n) {
      const long l = static_cast<long>(m - n);
      k(m, n) = detail::i_pow<Real>(l) * bessel_j<Real>(l, x);
    }
  }
  return Propagator<Real>(std::move(k), PropagatorKind::bessel_approx);
}

namespace detail {

/// exp[-i (C/2) k^2] for integer k. Whole turns of C (multiples of 2*pi)
/// contribute the exact sign (-1)^(q k^2); only the remainder goes through
/// floating-point trigonometry.
template <class Real>
Complex<Real> parabolic_phase(Real strength, long long offset) {
  const Real two_pi = 2 * pi_v<Real>;
  const Real turns = std::round(strength / two_pi);
  const Real remainder = strength - turns * two_pi;
  const long long square = offset * offset;
  const long long q = static_cast<long long>(std::abs(turns));
  const Real sign = ((q % 2) * (square % 2)) == 1 ? Real(-1) : Real(1);
  return sign * std::polar(Real(1), -(remainder / 2) * Real(square));
}

}  // namespace detail

/// Inclusive 1-based site range.
struct SiteWindow {
  Index first = 1;
  Index last = 1;
};

/// Diagonal of the kick: exp[-i (C/2) (n - n0)^2] on sites inside `window`,
/// 1 elsewhere.
template <class Real>
ComplexVector<Real> kick_phases(Real strength, const ChainConfig<Real>& cfg, SiteWindow window) {
  if (window.first < 1 || window.last > cfg.sites || window.first > window.last) {
    throw ValidationError("kick: site window outside the chain");
  }
  ComplexVector<Real> d = ComplexVector<Real>::Ones(cfg.sites);
  for (Index n = window.first; n <= window.last; ++n) {
    d(n - 1) = detail::parabolic_phase(strength, static_cast<long long>(n - cfg.field_center));
  }
  return d;
}

template <class Real>
ComplexVector<Real> kick_phases(Real strength, const ChainConfig<Real>& cfg) {
  return kick_phases(strength, cfg, SiteWindow{1, cfg.sites});
}

template <class Real>
Propagator<Real> kick_operator(Real strength, const ChainConfig<Real>& cfg) {
  return Propagator<Real>(kick_phases(strength, cfg).asDiagonal(), PropagatorKind::kick);
}

/// Kick restricted to a sub-interval of sites (identity outside it).
template <class Real>
Propagator<Real> kick_operator(Real strength, const ChainConfig<Real>& cfg, SiteWindow window) {
  return Propagator<Real>(kick_phases(strength, cfg, window).asDiagonal(), PropagatorKind::kick);
}

/// One period: kick first, then free evolution, i.e. V * U * psi.
template <class Real>
ExcitationState<Real> apply_step(const ExcitationState<Real>& state, const Propagator<Real>& free,
                                 const Propagator<Real>& kick) {
  detail::require_same_size(free.dimension(), state.sites(), "apply_step (free)");
  detail::require_same_size(kick.dimension(), state.sites(), "apply_step (kick)");
  return ExcitationState<Real>::adopt(free.matrix() * (kick.matrix() * state.amplitudes()));
}

/// The kicked chain with its spectral decomposition and one-period free
/// propagator cached. Cheap to query; immutable after construction.
template <class Real = double>
class KickedChain {
 public:
  explicit KickedChain(ChainConfig<Real> cfg)
      : cfg_(std::move(cfg)),
        hamiltonian_(build_single_excitation_hamiltonian(cfg_)),
        spectrum_(hamiltonian_.matrix),
        period_step_(spectrum_.exponential(cfg_.period)) {
    if (cfg_.field_center < 1 || cfg_.field_center > cfg_.sites) {
      throw ValidationError("chain: n0 must lie in [1, N]");
    }
  }

  const ChainConfig<Real>& config() const { return cfg_; }
  Index sites() const { return cfg_.sites; }
  const SingleExcitationHamiltonian<Real>& hamiltonian() const { return hamiltonian_; }
  const SpectralDecomposition<Real>& spectrum() const { return spectrum_; }

  /// V(T0) as a dense matrix.
  const ComplexMatrix<Real>& period_matrix() const { return period_step_; }
  Propagator<Real> period_propagator() const {
    return Propagator<Real>(period_step_, PropagatorKind::free_step);
  }
  Propagator<Real> propagator(Real t) const { return free_propagator(spectrum_, t); }

  ExcitationState<Real> evolve(const ExcitationState<Real>& s, Real t) const {
    return ExcitationState<Real>::adopt(spectrum_.evolve(s.amplitudes(), t));
  }
  ExcitationState<Real> evolve_dimensionless(const ExcitationState<Real>& s, Real two_j_t) const {
    return evolve(s, cfg_.time_for(two_j_t));
  }
  ExcitationState<Real> free_period(const ExcitationState<Real>& s) const {
    detail::require_same_size(sites(), s.sites(), "free period");
    return ExcitationState<Real>::adopt(period_step_ * s.amplitudes());
  }
  ExcitationState<Real> kick(const ExcitationState<Real>& s, Real strength) const {
    detail::require_same_size(sites(), s.sites(), "kick");
    return ExcitationState<Real>::adopt(kick_phases(strength, cfg_).cwiseProduct(s.amplitudes()));
  }
  /// V(T0) U(C) psi
  ExcitationState<Real> step(const ExcitationState<Real>& s, Real strength) const {
    return free_period(kick(s, strength));
  }

 private:
  ChainConfig<Real> cfg_;
  SingleExcitationHamiltonian<Real> hamiltonian_;
  SpectralDecomposition<Real> spectrum_;
  ComplexMatrix<Real> period_step_;
};

}  // namespace magnon
