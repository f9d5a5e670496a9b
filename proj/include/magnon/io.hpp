// File formats: state snapshots, schedule files, standard-map trajectories.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "magnon/chain.hpp"
#include "magnon/control.hpp"
#include "magnon/dkr.hpp"

namespace magnon::io {

using json = nlohmann::ordered_json;

inline constexpr int snapshot_version = 1;

/// {"version": 1, "N": int, "amplitudes": [[re, im], ...]}
json state_to_json(const ExcitationState<double>& state);
/// Validates version, length and norm.
ExcitationState<double> state_from_json(const json& doc);

/// {"convention": "...", "T0": .., "n0": .., "entries": [..]}
json schedule_to_json(const KickSchedule<double>& schedule);
KickSchedule<double> schedule_from_json(const json& doc);

/// "step,theta,p" CSV.
std::string trajectory_csv(const std::vector<PhasePoint<double>>& trajectory);

/// Pretty-printed JSON with a trailing newline; byte-stable for equal input.
std::string dump(const json& doc);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& doc);

/// Throws ValidationError naming the first key of `doc` not in `allowed`.
void reject_unknown_keys(const json& doc, std::initializer_list<const char*> allowed,
                         const std::string& where);

}  // namespace magnon::io
