#include <doctest.h>

#include <random>

#include "magnon/analysis.hpp"
#include "magnon/brute_force.hpp"
#include "magnon/control.hpp"
#include "oracles.hpp"

using namespace magnon;

namespace {

ExcitationState<double> sparse_random_state(Index n, std::vector<Index> sites, std::uint64_t seed) {
  ComplexVector<double> v = ComplexVector<double>::Zero(n);
  const auto r = oracle::random_state(Index(sites.size()), seed);
  for (std::size_t i = 0; i < sites.size(); ++i) v(sites[i] - 1) = r(Index(i));
  return ExcitationState<double>(v);
}

}  // namespace

TEST_CASE("full hamiltonian agrees with the dense Pauli construction") {
  const ChainConfig<double> cfg{6, 0.8, 0.1, 3, 0.4};
  const BruteForceChain bf(cfg);
  const Eigen::MatrixXcd dense = bf.hamiltonian();
  CHECK((dense - oracle::heisenberg(6, 0.8, 0.4)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("free evolution agrees with the subspace engine") {
  const ChainConfig<double> cfg{10, 1.0, 0.125, 5, 0.0};
  const KickedChain<double> chain(cfg);
  const auto psi = sparse_random_state(10, {2, 4, 5, 7, 9}, 42);
  const double t = cfg.time_for(3.0);
  const auto r = brute_force_evolve(cfg, t, psi);
  CHECK(aligned_amplitude_deviation(chain.evolve(psi, t), r.state) <= 1e-10);
  CHECK(r.leakage <= 1e-14);
}

TEST_CASE("random kick schedules agree for N = 8, 10, 12") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> strength(-8.0, 8.0);
  std::uniform_real_distribution<double> period(0.02, 0.6);
  for (Index n : {8, 10, 12}) {
    for (int trial = 0; trial < 2; ++trial) {
      const ChainConfig<double> cfg{n, 1.0, period(rng), 1 + Index(rng() % std::uint64_t(n)), 0.0};
      const KickedChain<double> chain(cfg);
      const BruteForceChain bf(cfg);
      const auto psi = ExcitationState<double>(oracle::random_state(n, rng()));
      KickSchedule<double> s{{}, cfg.field_center, cfg.period, KickConvention::kick_then_free};
      const int kicks = 1 + int(rng() % 20);
      for (int j = 0; j < kicks; ++j) s.entries.push_back(strength(rng));
      const auto engine = run_schedule(chain, psi, s).final_state;
      const auto ref = bf.run_schedule(psi, s.entries);
      CHECK(aligned_amplitude_deviation(engine, ref.state) <= 1e-10);
      CHECK(ref.leakage <= 1e-12);
    }
  }
}

TEST_CASE("uniform field only changes the global phase") {
  const auto psi = sparse_random_state(8, {1, 3, 4, 8}, 9);
  const ChainConfig<double> a{8, 1.0, 0.1, 4, 0.0};
  ChainConfig<double> b = a;
  b.field = 1.0;
  const auto ra = brute_force_evolve(a, 2.0, psi);
  const auto rb = brute_force_evolve(b, 2.0, psi);
  CHECK(std::abs(fidelity(ra.state, rb.state) - 1) <= 1e-12);
}

TEST_CASE("sector is invariant") {
  const ChainConfig<double> cfg{9, 1.0, 0.1, 5, 0.3};
  const BruteForceChain bf(cfg);
  const auto psi = ExcitationState<double>::basis(9, 1);
  const auto full = bf.evolve_full(bf.embed(psi), 4.0);
  const auto r = bf.project(full);
  CHECK(r.leakage <= 1e-14);
  CHECK(std::abs(r.state.norm() - 1) <= 1e-12);
}

TEST_CASE("oracle size limits") {
  CHECK_THROWS_AS(BruteForceChain(ChainConfig<double>{13, 1.0, 0.1, 5, 0.0}), ValidationError);
  CHECK_NOTHROW(BruteForceChain(ChainConfig<double>{2, 1.0, 0.1, 1, 0.0}));
}
