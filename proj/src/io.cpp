#include "magnon/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace magnon::io {

json state_to_json(const ExcitationState<double>& state) {
  json amps = json::array();
  for (Index m = 1; m <= state.sites(); ++m) amps.push_back({state(m).real(), state(m).imag()});
  return json{{"version", snapshot_version}, {"N", state.sites()}, {"amplitudes", std::move(amps)}};
}

ExcitationState<double> state_from_json(const json& doc) {
  try {
    reject_unknown_keys(doc, {"version", "N", "amplitudes"}, "state snapshot");
    if (doc.at("version").get<int>() != snapshot_version) {
      throw ValidationError("state snapshot: unsupported version " + doc.at("version").dump());
    }
    const auto n = doc.at("N").get<Index>();
    const auto& amps = doc.at("amplitudes");
    if (!amps.is_array() || Index(amps.size()) != n) {
      throw ValidationError("state snapshot: expected " + std::to_string(n) + " amplitudes, got " +
                            std::to_string(amps.size()));
    }
    ComplexVector<double> v(n);
    for (Index m = 0; m < n; ++m) {
      const auto& pair = amps.at(std::size_t(m));
      if (!pair.is_array() || pair.size() != 2) {
        throw ValidationError("state snapshot: amplitude " + std::to_string(m + 1) +
                              " is not a [re, im] pair");
      }
      v(m) = {pair[0].get<double>(), pair[1].get<double>()};
    }
    return ExcitationState<double>(std::move(v));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("state snapshot: ") + e.what());
  }
}

json schedule_to_json(const KickSchedule<double>& schedule) {
  return json{{"convention", to_string(schedule.convention)},
              {"T0", schedule.period},
              {"n0", schedule.field_center},
              {"entries", schedule.entries}};
}

KickSchedule<double> schedule_from_json(const json& doc) {
  try {
    reject_unknown_keys(doc, {"convention", "T0", "n0", "entries"}, "schedule");
    KickSchedule<double> s;
    s.convention = kick_convention_from_string(doc.at("convention").get<std::string>());
    s.period = doc.at("T0").get<double>();
    s.field_center = doc.at("n0").get<Index>();
    s.entries = doc.at("entries").get<std::vector<double>>();
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("schedule: ") + e.what());
  }
}

std::string trajectory_csv(const std::vector<PhasePoint<double>>& trajectory) {
  std::string out = "step,theta,p\n";
  char line[96];
  for (const auto& pt : trajectory) {
    std::snprintf(line, sizeof line, "%ld,%.17e,%.17e\n", static_cast<long>(pt.step), pt.theta, pt.p);
    out += line;
  }
  return out;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

json read_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("'" + path.string() + "': " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& doc) { write_text(path, dump(doc)); }

void reject_unknown_keys(const json& doc, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  if (!doc.is_object()) throw ValidationError(where + ": expected a JSON object");
  for (const auto& item : doc.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw ValidationError(where + ": unknown key '" + item.key() + "'");
  }
}

}  // namespace magnon::io
