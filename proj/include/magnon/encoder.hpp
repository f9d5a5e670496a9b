// Few-site superposition states that extremize the resonance diffusion rate
// D = A sin^2(theta), and the wavepacket pairs they launch.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "magnon/chain.hpp"
#include "magnon/dkr.hpp"

namespace magnon {

/// Sites m0 + offsets of a chain of N sites.
struct EncodingSubspace {
  Index center = 0;           ///< m0
  std::vector<long> offsets;  ///< sorted, even, distinct
  Index sites = 0;            ///< N

  static EncodingSubspace centered(Index center, Index sites, int half_width = 2) {
    EncodingSubspace s{center, {}, sites};
    for (int n = -half_width; n <= half_width; ++n) s.offsets.push_back(2L * n);
    return s;
  }

  Index dimension() const { return static_cast<Index>(offsets.size()); }
  Index site(Index i) const { return center + offsets[static_cast<std::size_t>(i)]; }

  void validate() const {
    if (offsets.empty()) throw ValidationError("encoder: subspace has no offsets");
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      if (offsets[i] % 2 != 0) throw ValidationError("encoder: offsets must be even");
      if (i > 0 && offsets[i] <= offsets[i - 1]) {
        throw ValidationError("encoder: offsets must be sorted and distinct");
      }
    }
    if (center + offsets.front() < 3) {
      throw ValidationError("encoder: every site must satisfy m >= 3 (lowest site is " +
                            std::to_string(center + offsets.front()) + ")");
    }
    if (center + offsets.back() > sites - 2) {
      throw ValidationError("encoder: every site must satisfy m <= N - 2 (highest site is " +
                            std::to_string(center + offsets.back()) + ")");
    }
  }
};

/// sin^2(theta) restricted to the subspace: 1/2 on the diagonal, -1/4 between
/// levels two apart. Valid because no level reaches m <= 2.
template <class Real = double>
RealMatrix<Real> diffusion_matrix(const EncodingSubspace& subspace, Real scale = 1) {
  subspace.validate();
  const Index d = subspace.dimension();
  RealMatrix<Real> m = RealMatrix<Real>::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    m(i, i) = scale / 2;
    for (Index j = 0; j < d; ++j) {
      if (std::abs(subspace.site(i) - subspace.site(j)) == 2) m(i, j) = -scale / 4;
    }
  }
  return m;
}

template <class Real = double>
struct EncodedState {
  ExcitationState<Real> state;
  RealVector<Real> coefficients;  ///< in subspace order
  Real eigenvalue;
};

namespace detail {

template <class Real>
EncodedState<Real> extremal_diffusion_state(const EncodingSubspace& subspace, bool largest) {
  const RealMatrix<Real> d = diffusion_matrix<Real>(subspace);
  Eigen::SelfAdjointEigenSolver<RealMatrix<Real>> solver(d);
  if (solver.info() != Eigen::Success) throw NumericalAlarm("encoder: eigensolver failed");
  const Index n = d.rows();
  const Index pick = largest ? n - 1 : 0;
  if (n > 1) {
    const Index neighbour = largest ? n - 2 : 1;
    const Real gap = std::abs(solver.eigenvalues()(pick) - solver.eigenvalues()(neighbour));
    if (gap < Real(1e-12)) {
      throw NumericalAlarm("encoder: extremal eigenvalue is degenerate (gap " +
                           std::to_string(static_cast<double>(gap)) + ")");
    }
  }
  RealVector<Real> c = solver.eigenvectors().col(pick);
  c.normalize();
  // Sign: the lowest-site nonzero coefficient is positive.
  for (Index i = 0; i < n; ++i) {
    if (std::abs(c(i)) > Real(1e-8)) {
      if (c(i) < 0) c = -c;
      break;
    }
  }

  ComplexVector<Real> amplitudes = ComplexVector<Real>::Zero(subspace.sites);
  for (Index i = 0; i < n; ++i) amplitudes(subspace.site(i) - 1) = c(i);
  return {ExcitationState<Real>(std::move(amplitudes)), c, solver.eigenvalues()(pick)};
}

}  // namespace detail

template <class Real = double>
EncodedState<Real> max_diffusion_state(const EncodingSubspace& subspace) {
  return detail::extremal_diffusion_state<Real>(subspace, true);
}

template <class Real = double>
EncodedState<Real> min_diffusion_state(const EncodingSubspace& subspace) {
  return detail::extremal_diffusion_state<Real>(subspace, false);
}

/// <state| sin^2(theta) |state> on the rotor half-line m >= 1. The m = 1
/// diagonal picks up the cos(-theta) = cos(theta) fold; the m = 2 -> m = 0
/// coupling leaves the basis.
template <class Real>
Real sin_squared_expectation(const RotorState<Real>& state) {
  const auto& c = state.coefficients();
  Real total = 0;
  for (Index m = 1; m <= state.size(); ++m) {
    const Real diag = m == 1 ? Real(0.25) : Real(0.5);
    total += diag * std::norm(c(m - 1));
    if (m + 2 <= state.size()) total += Real(-0.5) * std::real(std::conj(c(m - 1)) * c(m + 1));
  }
  return total;
}

template <class Real = double>
struct DiffusionMeasurement {
  Real rate = 0;       ///< fitted b in E(t) = a + b t^2
  Real intercept = 0;  ///< fitted a
  Real expected = 0;   ///< <(hbar^2 k^2 / 2) sin^2(theta)>
  Real ratio() const { return rate / expected; }
};

/// Evolves `state` for `steps` resonance periods exp(i k cos theta), records
/// E(t) = <(hbar m)^2 / 2>, and fits E against a + b t^2.
template <class Real>
DiffusionMeasurement<Real> measured_diffusion_rate(const RotorState<Real>& state, Real k,
                                                   Real hbar_eff, Index steps) {
  if (steps < 2) throw ValidationError("diffusion rate: need at least 2 steps");
  const Index size = state.size();
  const ComplexMatrix<Real> v = resonance_propagator(k, size);
  RealVector<Real> energy_weight(size);
  for (Index m = 1; m <= size; ++m) energy_weight(m - 1) = hbar_eff * hbar_eff * Real(m * m) / 2;

  const Index edge = 10;
  ComplexVector<Real> c = state.coefficients();
  RealVector<Real> times(steps + 1);
  RealVector<Real> energies(steps + 1);
  for (Index t = 0; t <= steps; ++t) {
    if (t > 0) c = v * c;
    const RealVector<Real> prob = c.cwiseAbs2();
    const Real upper = prob.tail(edge).sum();
    const Real lower = prob.head(2).sum();
    if (upper > Real(1e-10) || lower > Real(1e-10)) {
      throw NumericalAlarm("diffusion rate: light cone reached the rotor truncation (step " +
                           std::to_string(t) + ")");
    }
    times(t) = Real(t);
    energies(t) = prob.dot(energy_weight);
  }

  // Least squares for E = a + b t^2.
  Eigen::Matrix<Real, Eigen::Dynamic, 2> design(steps + 1, 2);
  design.col(0).setOnes();
  design.col(1) = times.cwiseAbs2();
  const Eigen::Matrix<Real, 2, 1> fit = design.colPivHouseholderQr().solve(energies);

  DiffusionMeasurement<Real> out;
  out.intercept = fit(0);
  out.rate = fit(1);
  out.expected = hbar_eff * hbar_eff * k * k / 2 * sin_squared_expectation(state);
  return out;
}

template <class Real = double>
struct PacketLaunch {
  ExcitationState<Real> state;
  std::vector<std::string> warnings;
};

/// Free evolution of the max-diffusion encoder state for a dimensionless time
/// 2*J*t1.
template <class Real>
PacketLaunch<Real> generate_packet_pair(const KickedChain<Real>& chain,
                                        const EncodingSubspace& subspace, Real two_j_t1) {
  if (subspace.sites != chain.sites()) {
    throw DimensionError("packet pair: subspace chain length differs from chain");
  }
  const auto encoded = max_diffusion_state<Real>(subspace);
  PacketLaunch<Real> out{chain.evolve_dimensionless(encoded.state, two_j_t1), {}};
  const Index margin = std::min<Index>(10, chain.sites() / 2);
  const RealVector<Real> p = out.state.amplitudes().cwiseAbs2();
  const Real edge_weight = p.head(margin).sum() + p.tail(margin).sum();
  if (edge_weight > Real(1e-6)) {
    out.warnings.push_back("packet weight within " + std::to_string(margin) +
                           " sites of a chain end: " + std::to_string(static_cast<double>(edge_weight)));
  }
  return out;
}

}  // namespace magnon
