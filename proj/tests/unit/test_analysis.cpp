#include <doctest.h>

#include <filesystem>

#include "magnon/analysis.hpp"
#include "magnon/encoder.hpp"
#include "magnon/io.hpp"
#include "oracles.hpp"

using namespace magnon;

namespace {

ExcitationState<double> pair_at(double two_j_t, Index m0 = 101) {
  static const KickedChain<double> chain(ChainConfig<double>{201, 1.0, 0.125, 101, 0.0});
  return chain.evolve_dimensionless(max_diffusion_state<double>(EncodingSubspace::centered(m0, 201)).state, two_j_t);
}

Profile profile_of(std::initializer_list<double> p) {
  Profile out{RealVector<double>(Index(p.size()))};
  Index i = 0;
  for (double v : p) out.probabilities(i++) = v;
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("magnon_test_" + name);
}

}  // namespace

TEST_CASE("probability profile") {
  const auto p = probability_profile(ExcitationState<double>::basis(201, 101));
  CHECK(p(101) == 1.0);
  CHECK(p.total() == 1.0);

  const auto e = probability_profile(max_diffusion_state<double>(EncodingSubspace::centered(101, 201)).state);
  CHECK(e(101) == doctest::Approx(1.0 / 3));
  CHECK(e(99) == doctest::Approx(0.25));
  CHECK(e(105) == doctest::Approx(1.0 / 12));
  CHECK(std::abs(e(105) - 0.0834) < 1e-4);

  const auto r = probability_profile(ExcitationState<double>(oracle::random_state(77, 5)));
  CHECK(std::abs(r.total() - 1) <= 1e-12);
}

TEST_CASE("fidelity") {
  const auto a = ExcitationState<double>(oracle::random_state(50, 1));
  CHECK(fidelity(a, a) == doctest::Approx(1).epsilon(1e-14));
  const auto rotated = ExcitationState<double>(a.amplitudes() * std::polar(1.0, 1.234));
  CHECK(fidelity(a, rotated) == doctest::Approx(1).epsilon(1e-14));
  const auto b = ExcitationState<double>(oracle::random_state(50, 2));
  CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)).epsilon(1e-14));
  CHECK(fidelity(ExcitationState<double>::basis(201, 101), ExcitationState<double>::basis(201, 102)) == 0.0);
  CHECK_THROWS_AS(fidelity(a, ExcitationState<double>::basis(10, 1)), DimensionError);
  CHECK(aligned_amplitude_deviation(a, rotated) < 1e-14);
}

TEST_CASE("participation ratio") {
  CHECK(participation_ratio(probability_profile(ExcitationState<double>::basis(9, 3))) == 1.0);
  CHECK(participation_ratio(profile_of({0.25, 0.25, 0.25, 0.25})) == doctest::Approx(4));
}

TEST_CASE("packet summary basics") {
  const auto one = packet_summary(probability_profile(ExcitationState<double>::basis(201, 101)));
  REQUIRE(one.count() == 1);
  CHECK(one.packets[0].peak_site == 101);
  CHECK(one.packets[0].width == 0.0);
  CHECK(one.packets[0].centroid == 101.0);
  CHECK(one.peak_separation == 0);
  CHECK(one.background_max == 0.0);

  // two bumps with a small background in between
  const auto two = packet_summary(profile_of({0, 0.3, 0.1, 0.001, 0.002, 0.001, 0.2, 0.3, 0.096, 0}));
  REQUIRE(two.count() == 2);
  CHECK(two.packets[0].peak_site == 2);
  CHECK(two.packets[1].peak_site == 8);
  CHECK(two.peak_distance == 6);
  CHECK(two.peak_separation == 5);
  CHECK(two.background_max == 0.002);
  CHECK(two.packets[0].first == 2);
  CHECK(two.packets[0].last == 3);
  CHECK(two.packets[1].first == 7);
  CHECK(two.packets[1].last == 9);
  CHECK(two.packets[1].centroid == doctest::Approx((7 * 0.2 + 8 * 0.3 + 9 * 0.096) / 0.596));

  // maxima closer than the merge radius form one packet
  const auto merged = packet_summary(profile_of({0, 0.3, 0.01, 0.25, 0, 0, 0}));
  CHECK(merged.count() == 1);
  const auto split = packet_summary(profile_of({0, 0.3, 0.01, 0.25, 0, 0, 0}), PacketDetection{0.1, 2});
  CHECK(split.count() == 2);

  CHECK_THROWS_AS(packet_summary(profile_of({0.5, 0.5}), PacketDetection{0.0, 3}), ValidationError);
  CHECK_THROWS_AS(packet_summary(profile_of({0.5, 0.5}), PacketDetection{1.0, 3}), ValidationError);
}

TEST_CASE("packet pair from the centered encoder") {
  const auto s = packet_summary(probability_profile(pair_at(15)));
  REQUIRE(s.count() == 2);
  CHECK(std::abs(s.packets[0].centroid + s.packets[1].centroid - 202) <= 0.01);
  CHECK(s.packets[0].peak_site == 86);
  CHECK(s.packets[1].peak_site == 116);
  CHECK(s.background_max <= std::min(s.packets[0].peak_probability, s.packets[1].peak_probability));
  CHECK(s.background_max * 10 <= std::min(s.packets[0].peak_probability, s.packets[1].peak_probability));
}

TEST_CASE("reflected pair geometry") {
  for (double t : {40.0, 60.0, 90.0, 120.0}) {
    const auto s = packet_summary(probability_profile(pair_at(t, 30)));
    // interference fringes split the packets after the first reflection
    if (t <= 60) CHECK(s.count() == 2);
    CHECK(s.peak_distance == 59);
    CHECK(s.peak_separation == 58);
  }
}

TEST_CASE("packet summary ignores global phase and conjugation") {
  const auto psi = pair_at(15);
  const auto a = packet_summary(probability_profile(psi));
  const auto b = packet_summary(probability_profile(ExcitationState<double>(psi.amplitudes() * std::polar(1.0, 0.7))));
  const auto c = packet_summary(probability_profile(ExcitationState<double>(psi.amplitudes().conjugate())));
  for (const auto* other : {&b, &c}) {
    REQUIRE(other->count() == a.count());
    for (std::size_t i = 0; i < a.count(); ++i) {
      CHECK(other->packets[i].peak_site == a.packets[i].peak_site);
      CHECK(other->packets[i].centroid == doctest::Approx(a.packets[i].centroid).epsilon(1e-12));
    }
  }
}

TEST_CASE("centroid tracking") {
  const KickedChain<double> chain(ChainConfig<double>{201, 1.0, 0.125, 101, 0.0});
  const auto psi = max_diffusion_state<double>(EncodingSubspace::centered(101, 201)).state;
  ExperimentTimeline t{psi, {FreeSegment{5.0}}};
  for (int i = 1; i <= 6; ++i) {
    t.segments.emplace_back(FreeSegment{5.0});
    t.segments.emplace_back(CaptureSegment{"c" + std::to_string(i)});
  }
  const auto record = run_timeline(chain, t);
  const auto track = centroid_track(record);
  REQUIRE(track.size() == 6);
  for (std::size_t i = 1; i < track.size(); ++i) {
    const double dt = track[i].elapsed - track[i - 1].elapsed;
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(std::abs(track[i].centroids[k] - track[i - 1].centroids[k]) <= dt);
    }
  }

  // an eigenstate does not move
  const Eigen::VectorXcd eig = chain.spectrum().eigenvectors().col(100).cast<std::complex<double>>();
  ExperimentTimeline still{ExcitationState<double>(eig), {CaptureSegment{"a"}, FreeSegment{30.0}, CaptureSegment{"b"}}};
  const auto rec = run_timeline(chain, still);
  CHECK(max_centroid_displacement(centroid_track(rec), 0, 1) <= 1e-10);
  CHECK_THROWS_AS(max_centroid_displacement(centroid_track(rec), 0, 5), ValidationError);
}

TEST_CASE("profile CSV") {
  const auto p = probability_profile(pair_at(15));
  const std::string csv = profile_csv(p);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 202);
  CHECK(csv.rfind("site,probability\n", 0) == 0);
  CHECK(profile_csv(probability_profile(pair_at(15))) == csv);

  const auto path = scratch("profile.csv");
  write_profile_csv(p, path);
  CHECK(io::read_text(path) == csv);
  const auto back = read_profile_csv(path);
  CHECK(back.probabilities == p.probabilities);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(read_profile_csv(scratch("missing.csv")), IoError);
  io::write_text(scratch("bad.csv"), "site,prob\n1,0.5\n");
  CHECK_THROWS_AS(read_profile_csv(scratch("bad.csv")), IoError);
  std::filesystem::remove(scratch("bad.csv"));
}
