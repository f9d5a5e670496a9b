#include <doctest.h>

#include "magnon/analysis.hpp"
#include "magnon/encoder.hpp"
#include "oracles.hpp"

using namespace magnon;

TEST_CASE("diffusion matrix matches the sin^2 integral") {
  const auto s = EncodingSubspace::centered(20, 60, 3);
  const auto d = diffusion_matrix<double>(s);
  for (Index i = 0; i < s.dimension(); ++i) {
    for (Index j = 0; j < s.dimension(); ++j) {
      const auto ref = oracle::cosine_matrix_element(int(s.site(i)), int(s.site(j)), [](double th) {
        return std::complex<double>(std::sin(th) * std::sin(th), 0);
      });
      CHECK(std::abs(d(i, j) - ref.real()) < 1e-14);
    }
  }
}

TEST_CASE("diffusion matrix shape") {
  const auto five = EncodingSubspace::centered(101, 201);
  const auto d = diffusion_matrix<double>(five);
  CHECK(d.diagonal().isConstant(0.5));
  CHECK(d.diagonal(1).isConstant(-0.25));
  CHECK(d.diagonal(2).isZero(0));

  EncodingSubspace one{50, {0}, 100};
  CHECK(diffusion_matrix<double>(one)(0, 0) == 0.5);
  CHECK(diffusion_matrix<double>(five, 2.0) == 2 * d);

  // non-adjacent offsets only couple levels two apart
  EncodingSubspace gap{50, {-4, 0, 2}, 100};
  const auto g = diffusion_matrix<double>(gap);
  CHECK(g(0, 1) == 0.0);
  CHECK(g(1, 2) == -0.25);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d);
  for (int j = 1; j <= 5; ++j) {
    const double closed = 0.5 - 0.5 * std::cos(j * M_PI / 6);
    CHECK(std::abs(es.eigenvalues()(j - 1) - closed) <= 1e-12);
  }
}

TEST_CASE("five-state maximum diffusion state") {
  const auto s = EncodingSubspace::centered(101, 201);
  const auto e = max_diffusion_state<double>(s);
  const double r3 = std::sqrt(3.0);
  const Eigen::VectorXd closed = (Eigen::VectorXd(5) << 1 / (2 * r3), -0.5, 1 / r3, -0.5, 1 / (2 * r3)).finished();
  CHECK((e.coefficients - closed).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(e.eigenvalue - (0.5 + r3 / 4)) <= 1e-12);

  // printed values
  CHECK(std::abs(e.coefficients(2) - 0.577) <= 1e-3);
  CHECK(std::abs(e.coefficients(1) + 0.5) <= 1e-3);
  CHECK(std::abs(e.coefficients(3) + 0.5) <= 1e-3);
  CHECK(std::abs(e.coefficients(0) - 0.289) <= 1e-3);
  CHECK(std::abs(e.coefficients(4) - 0.289) <= 1e-3);

  // embedded on even offsets only
  for (Index m = 1; m <= 201; ++m) {
    const bool in = m >= 97 && m <= 105 && (m - 101) % 2 == 0;
    if (!in) CHECK(e.state(m) == std::complex<double>(0, 0));
  }
  CHECK(e.state(101).real() == doctest::Approx(1 / r3));
}

TEST_CASE("three-state and minimum states") {
  const auto three = EncodingSubspace::centered(10, 30, 1);
  const auto e3 = max_diffusion_state<double>(three);
  const Eigen::Vector3d closed(0.5, -1 / std::sqrt(2.0), 0.5);
  CHECK((e3.coefficients - closed).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(e3.eigenvalue - (0.5 + std::sqrt(2.0) / 4)) <= 1e-12);

  const auto five = EncodingSubspace::centered(101, 201);
  const auto lo = min_diffusion_state<double>(five);
  const double r3 = std::sqrt(3.0);
  const Eigen::VectorXd lo_closed = (Eigen::VectorXd(5) << 1 / (2 * r3), 0.5, 1 / r3, 0.5, 1 / (2 * r3)).finished();
  CHECK((lo.coefficients - lo_closed).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(lo.eigenvalue - (0.5 - r3 / 4)) <= 1e-12);
  const auto hi = max_diffusion_state<double>(five);
  CHECK(std::abs(hi.coefficients.dot(lo.coefficients)) <= 1e-14);

  EncodingSubspace one{50, {0}, 100};
  CHECK(max_diffusion_state<double>(one).state.amplitudes() == min_diffusion_state<double>(one).state.amplitudes());
}

TEST_CASE("argmax is invariant under scaling and shifts") {
  const auto s = EncodingSubspace::centered(40, 100, 3);
  const Eigen::MatrixXd d = diffusion_matrix<double>(s);
  const auto ref = max_diffusion_state<double>(s).coefficients;
  for (double a : {0.1, 3.0}) {
    for (double shift : {0.0, -2.0, 5.0}) {
      const Eigen::MatrixXd m = a * d + shift * Eigen::MatrixXd::Identity(d.rows(), d.cols());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
      Eigen::VectorXd v = es.eigenvectors().col(d.rows() - 1);
      if (v(0) < 0) v = -v;
      CHECK((v - ref).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("subspace validation") {
  auto s = EncodingSubspace::centered(2, 201);
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("m >= 3"), ValidationError);
  CHECK_THROWS_AS(EncodingSubspace::centered(5, 201).validate(), ValidationError);
  CHECK_NOTHROW(EncodingSubspace::centered(7, 201).validate());
  CHECK_THROWS_AS(EncodingSubspace::centered(197, 201).validate(), ValidationError);
  EncodingSubspace odd{50, {-1, 0, 1}, 100};
  CHECK_THROWS_AS(odd.validate(), ValidationError);
  EncodingSubspace unsorted{50, {2, 0}, 100};
  CHECK_THROWS_AS(unsorted.validate(), ValidationError);
}

TEST_CASE("measured diffusion rate") {
  const Index size = 256;
  const double hbar = 4 * pi_v<double>;
  const auto s = EncodingSubspace::centered(128, size);
  const auto hi = measured_diffusion_rate(RotorState<double>::from_chain(max_diffusion_state<double>(s).state, size), 1.0, hbar, 50);
  const auto lo = measured_diffusion_rate(RotorState<double>::from_chain(min_diffusion_state<double>(s).state, size), 1.0, hbar, 50);
  CHECK(hi.ratio() == doctest::Approx(1).epsilon(0.02));
  CHECK(lo.ratio() == doctest::Approx(1).epsilon(0.02));
  CHECK(lo.rate < hi.rate);
  CHECK(hi.rate / lo.rate == doctest::Approx(7 + 4 * std::sqrt(3.0)).epsilon(0.05));

  // independent check of <sin^2>: quadrature on the rotor wavefunction
  const auto rs = RotorState<double>::from_chain(max_diffusion_state<double>(s).state, size);
  double quad = 0;
  const int nodes = 4096;
  for (int q = 0; q < nodes; ++q) {
    const double th = 2 * M_PI * q / nodes;
    std::complex<double> psi = 0;
    for (Index m = 120; m <= 136; ++m) psi += rs(m) * std::cos(double(m) * th) / std::sqrt(M_PI);
    quad += std::norm(psi) * std::sin(th) * std::sin(th);
  }
  quad *= 2 * M_PI / nodes;
  CHECK(std::abs(sin_squared_expectation(rs) - quad) < 1e-12);

  // truncation alarm
  const auto edge = EncodingSubspace::centered(20, 64);
  CHECK_THROWS_AS(measured_diffusion_rate(RotorState<double>::from_chain(max_diffusion_state<double>(edge).state, 64), 1.0, hbar, 50),
                  NumericalAlarm);
}

TEST_CASE("packet pair generation") {
  const KickedChain<double> chain(ChainConfig<double>{201, 1.0, 0.125, 101, 0.0});
  const auto s = EncodingSubspace::centered(101, 201);
  const auto at0 = generate_packet_pair(chain, s, 0.0);
  CHECK(aligned_amplitude_deviation(at0.state, max_diffusion_state<double>(s).state) < 1e-14);

  const auto pair = generate_packet_pair(chain, s, 15.0);
  CHECK(pair.warnings.empty());
  CHECK(packet_summary(probability_profile(pair.state)).count() == 2);

  const auto late = generate_packet_pair(chain, s, 120.0);
  CHECK_FALSE(late.warnings.empty());
}

namespace {

// sum_m p_m^2 after free evolution from m0 = 101
double ipr(const EncodedState<double>& e, double tau) {
  static const KickedChain<double> chain(ChainConfig<double>{201, 1.0, 0.125, 101, 0.0});
  return 1 / participation_ratio(probability_profile(chain.evolve_dimensionless(e.state, tau)));
}

}  // namespace

TEST_CASE("maximum diffusion packets keep their shape") {
  const auto s = EncodingSubspace::centered(101, 201);
  const auto hi = max_diffusion_state<double>(s);
  const auto lo = min_diffusion_state<double>(s);
  // after the split into two packets the max-D profile barely changes,
  // while the min-D profile keeps spreading
  CHECK(ipr(hi, 45) / ipr(hi, 5) > 0.85);
  CHECK(ipr(lo, 45) / ipr(lo, 5) < 0.2);
  for (double tau : {30.0, 45.0, 60.0}) CHECK(ipr(hi, tau) > ipr(lo, tau));
}

TEST_CASE("maximum diffusion state is more localized at 2Jt = 15") {
  const auto s = EncodingSubspace::centered(101, 201);
  const double hi = ipr(max_diffusion_state<double>(s), 15);
  const double lo = ipr(min_diffusion_state<double>(s), 15);
  MESSAGE("IPR max-D " << hi << ", min-D " << lo);
  CHECK(hi > lo);
}
