// Full 2^N Hilbert-space reference for small chains (N <= 12).
//
// The Hamiltonian is assembled from explicit Pauli matrices with Kronecker
// products, including the uniform field B, and states are evolved with a
// Taylor series in short substeps. Nothing here shares code with the
// single-excitation engine, so it can serve as its oracle.
#pragma once

#include <span>

#include <Eigen/SparseCore>

#include "magnon/chain.hpp"

namespace magnon {

struct BruteForceResult {
  ExcitationState<double> state;
  /// Probability outside the single-excitation sector before projection.
  double leakage = 0;
};

class BruteForceChain {
 public:
  static constexpr Index max_sites = 12;

  explicit BruteForceChain(const ChainConfig<double>& cfg);

  Index sites() const { return cfg_.sites; }
  Index dimension() const { return Index(1) << cfg_.sites; }
  const Eigen::SparseMatrix<std::complex<double>>& hamiltonian() const { return hamiltonian_; }

  /// Index of |m> (spin m up) in the computational basis; site m is bit m-1.
  static Index basis_index(Index site) { return Index(1) << (site - 1); }

  ComplexVector<double> embed(const ExcitationState<double>& state) const;
  BruteForceResult project(const ComplexVector<double>& full) const;

  /// exp(-i H t) on the full space.
  ComplexVector<double> evolve_full(const ComplexVector<double>& full, double t) const;
  /// Parabolic kick exp[-i (C/2) sum_n (n - n0)^2 (1 + sigma^z_n)/2].
  ComplexVector<double> kick_full(const ComplexVector<double>& full, double strength) const;

  BruteForceResult evolve(const ExcitationState<double>& initial, double t) const;
  /// Kick-then-free for every entry, with the configured period.
  BruteForceResult run_schedule(const ExcitationState<double>& initial,
                                std::span<const double> kicks) const;

 private:
  ChainConfig<double> cfg_;
  Eigen::SparseMatrix<std::complex<double>> hamiltonian_;
  RealVector<double> kick_generator_;  // diagonal of sum_n (n - n0)^2 (1 + sigma^z_n)/2
  double norm_bound_ = 0;
};

/// Convenience wrapper: full-space free evolution for time t.
BruteForceResult brute_force_evolve(const ChainConfig<double>& cfg, double t,
                                    const ExcitationState<double>& initial);

}  // namespace magnon
