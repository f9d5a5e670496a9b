#include "magnon/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "magnon/linalg.hpp"

namespace magnon {

Profile probability_profile(const ExcitationState<double>& state) {
  return Profile{state.amplitudes().cwiseAbs2()};
}

double fidelity(const ExcitationState<double>& a, const ExcitationState<double>& b) {
  detail::require_same_size(a.sites(), b.sites(), "fidelity");
  return std::norm(a.amplitudes().dot(b.amplitudes())) /
         (a.amplitudes().squaredNorm() * b.amplitudes().squaredNorm());
}

double aligned_amplitude_deviation(const ExcitationState<double>& a,
                                   const ExcitationState<double>& b) {
  detail::require_same_size(a.sites(), b.sites(), "amplitude deviation");
  return phase_aligned_max_deviation(a.amplitudes(), b.amplitudes());
}

double participation_ratio(const Profile& profile) {
  return 1.0 / profile.probabilities.squaredNorm();
}

std::vector<std::pair<Index, double>> PacketSummary::peaks() const {
  std::vector<std::pair<Index, double>> out;
  out.reserve(packets.size());
  for (const auto& p : packets) out.emplace_back(p.peak_site, p.peak_probability);
  return out;
}

std::vector<Packet> PacketSummary::main_packets(std::size_t n) const {
  std::vector<Packet> sorted = packets;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Packet& a, const Packet& b) {
    return a.peak_probability > b.peak_probability;
  });
  if (sorted.size() > n) sorted.resize(n);
  std::sort(sorted.begin(), sorted.end(),
            [](const Packet& a, const Packet& b) { return a.peak_site < b.peak_site; });
  return sorted;
}

namespace {

void finish_packet(const Profile& profile, double threshold, Packet& packet) {
  double weight = 0;
  double first_moment = 0;
  for (Index m = packet.first; m <= packet.last; ++m) {
    const double p = profile(m);
    if (p < threshold) continue;
    weight += p;
    first_moment += p * double(m);
  }
  packet.weight = weight;
  packet.centroid = first_moment / weight;
  double second = 0;
  for (Index m = packet.first; m <= packet.last; ++m) {
    const double p = profile(m);
    if (p < threshold) continue;
    const double d = double(m) - packet.centroid;
    second += p * d * d;
  }
  packet.width = std::sqrt(second / weight);
}

}  // namespace

PacketSummary packet_summary(const Profile& profile, const PacketDetection& detection) {
  if (!(detection.threshold_fraction > 0 && detection.threshold_fraction < 1)) {
    throw ValidationError("packet summary: threshold_fraction must lie in (0, 1)");
  }
  PacketSummary summary;
  const Index n = profile.sites();
  if (n == 0) return summary;
  const double threshold = detection.threshold_fraction * profile.probabilities.maxCoeff();

  // Contiguous super-threshold runs; each is a candidate packet peaked at its
  // largest entry (the first one on ties).
  std::vector<Packet> runs;
  for (Index m = 1; m <= n;) {
    if (profile(m) < threshold) {
      ++m;
      continue;
    }
    Packet p;
    p.first = m;
    while (m <= n && profile(m) >= threshold) {
      if (profile(m) > p.peak_probability) {
        p.peak_probability = profile(m);
        p.peak_site = m;
      }
      ++m;
    }
    p.last = m - 1;
    runs.push_back(p);
  }

  for (const Packet& run : runs) {
    if (!summary.packets.empty() &&
        run.peak_site - summary.packets.back().peak_site < detection.merge_radius) {
      Packet& prev = summary.packets.back();
      prev.last = run.last;
      if (run.peak_probability > prev.peak_probability) {
        prev.peak_probability = run.peak_probability;
        prev.peak_site = run.peak_site;
      }
    } else {
      summary.packets.push_back(run);
    }
  }
  for (Packet& p : summary.packets) finish_packet(profile, threshold, p);

  if (summary.packets.size() >= 2) {
    double background = 0;
    std::size_t next = 1;
    for (Index m = summary.packets.front().last + 1; m < summary.packets.back().first; ++m) {
      while (next < summary.packets.size() && summary.packets[next].last < m) ++next;
      const bool inside = next < summary.packets.size() && summary.packets[next].first <= m &&
                          m <= summary.packets[next].last;
      if (!inside) background = std::max(background, profile(m));
    }
    summary.background_max = background;
    const auto top = summary.main_packets(2);
    summary.peak_distance = top[1].peak_site - top[0].peak_site;
    summary.peak_separation = summary.peak_distance - 1;
  }
  return summary;
}

const Capture& RunRecord::capture(const std::string& label) const {
  for (const auto& c : captures) {
    if (c.label == label) return c;
  }
  throw ValidationError("run record: no capture labelled '" + label + "'");
}

std::vector<CentroidSample> centroid_track(const RunRecord& record, std::size_t packets) {
  std::vector<CentroidSample> out;
  out.reserve(record.captures.size());
  for (const auto& c : record.captures) {
    CentroidSample s{c.label, c.elapsed, {}};
    for (const auto& p : c.summary.main_packets(packets)) s.centroids.push_back(p.centroid);
    out.push_back(std::move(s));
  }
  return out;
}

double max_centroid_displacement(const std::vector<CentroidSample>& track, std::size_t from,
                                 std::size_t to) {
  if (from >= track.size() || to >= track.size() || from > to) {
    throw ValidationError("centroid displacement: sample range out of bounds");
  }
  const auto& ref = track[from].centroids;
  double worst = 0;
  for (std::size_t i = from + 1; i <= to; ++i) {
    const auto& cur = track[i].centroids;
    if (cur.size() != ref.size()) {
      throw NumericalAlarm("centroid displacement: packet count changed between '" +
                           track[from].label + "' and '" + track[i].label + "'");
    }
    for (std::size_t k = 0; k < ref.size(); ++k) worst = std::max(worst, std::abs(cur[k] - ref[k]));
  }
  return worst;
}

std::string profile_csv(const Profile& profile) {
  std::string out = "site,probability\n";
  char line[64];
  for (Index m = 1; m <= profile.sites(); ++m) {
    std::snprintf(line, sizeof line, "%ld,%.17e\n", static_cast<long>(m), profile(m));
    out += line;
  }
  return out;
}

void write_profile_csv(const Profile& profile, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  const std::string text = profile_csv(profile);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

Profile read_profile_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(f, line) || line != "site,probability") {
    throw IoError("'" + path.string() + "': missing site,probability header");
  }
  std::vector<double> values;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("'" + path.string() + "': malformed row");
    const long site = std::stol(line.substr(0, comma));
    if (site != static_cast<long>(values.size()) + 1) {
      throw IoError("'" + path.string() + "': rows out of order at site " + std::to_string(site));
    }
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  Profile p;
  p.probabilities = Eigen::Map<const RealVector<double>>(values.data(), Index(values.size()));
  return p;
}

}  // namespace magnon
