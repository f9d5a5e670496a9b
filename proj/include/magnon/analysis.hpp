// Observables of site probability profiles: fidelities, packet detection,
// centroid tracking, and plot-ready export.
#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "magnon/chain.hpp"

namespace magnon {

/// p_m = |<m|psi>|^2
struct Profile {
  RealVector<double> probabilities;

  Index sites() const { return probabilities.size(); }
  double operator()(Index site) const { return probabilities(site - 1); }
  double total() const { return probabilities.sum(); }
};

Profile probability_profile(const ExcitationState<double>& state);

/// |<a|b>|^2 / (<a|a><b|b>).
double fidelity(const ExcitationState<double>& a, const ExcitationState<double>& b);

/// max_m |a_m - e^{i phi} b_m| after optimal global phase alignment.
double aligned_amplitude_deviation(const ExcitationState<double>& a,
                                   const ExcitationState<double>& b);

/// Participation ratio 1 / sum p_m^2, the reciprocal of the IPR sum p_m^2.
double participation_ratio(const Profile& profile);

struct PacketDetection {
  double threshold_fraction = 0.1;  ///< relative to the global maximum
  Index merge_radius = 3;           ///< peaks closer than this are one packet
};

struct Packet {
  Index peak_site = 0;
  double peak_probability = 0;
  Index first = 0;  ///< super-threshold support, inclusive
  Index last = 0;
  double weight = 0;
  double centroid = 0;
  double width = 0;  ///< rms about the centroid
};

struct PacketSummary {
  std::vector<Packet> packets;  ///< sorted by site
  /// Largest probability strictly between the outermost packets, outside
  /// every packet support. Zero for fewer than two packets.
  double background_max = 0;
  /// Sites strictly between the two highest peaks (|i - j| - 1); 0 if fewer
  /// than two packets.
  Index peak_separation = 0;
  /// |i - j| for the two highest peaks.
  Index peak_distance = 0;

  std::size_t count() const { return packets.size(); }
  std::vector<std::pair<Index, double>> peaks() const;
  /// Packets holding the `n` highest peaks, sorted by site.
  std::vector<Packet> main_packets(std::size_t n = 2) const;
};

PacketSummary packet_summary(const Profile& profile, const PacketDetection& detection = {});

/// One snapshot of a run.
struct Capture {
  std::string label;
  double elapsed = 0;     ///< dimensionless time 2Jt since the initial state
  long kick_index = -1;   ///< kick after which the capture was taken, -1 if none
  ExcitationState<double> state;
  Profile profile;
  PacketSummary summary;
};

struct RunRecord {
  std::vector<Capture> captures;
  ExcitationState<double> final_state;
  double elapsed = 0;

  const Capture& capture(const std::string& label) const;
};

struct CentroidSample {
  std::string label;
  double elapsed = 0;
  std::vector<double> centroids;  ///< main packets, sorted by site
};

/// Per-capture centroids of the `packets` highest-peak packets.
std::vector<CentroidSample> centroid_track(const RunRecord& record, std::size_t packets = 2);

/// Largest centroid shift between samples `from` and every later sample up to
/// `to` (inclusive), compared packet by packet in site order.
double max_centroid_displacement(const std::vector<CentroidSample>& track, std::size_t from,
                                 std::size_t to);

/// "site,probability" header plus one row per site in %.17e.
std::string profile_csv(const Profile& profile);
void write_profile_csv(const Profile& profile, const std::filesystem::path& path);
Profile read_profile_csv(const std::filesystem::path& path);

}  // namespace magnon
