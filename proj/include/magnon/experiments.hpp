// Config-driven experiment drivers: figure reproductions, identity checks,
// and the run manifests they emit.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "magnon/analysis.hpp"
#include "magnon/chain.hpp"
#include "magnon/control.hpp"
#include "magnon/encoder.hpp"
#include "magnon/io.hpp"

namespace magnon {

inline constexpr int manifest_schema_version = 1;

/// Times are dimensionless (2Jt); kick strengths are C.
struct FigureParameters {
  double two_j_t1 = 15;      ///< free evolution before the first kick
  double two_j_t2 = 30;      ///< free evolution after the last kick
  double strength = 0.5;     ///< C
  Index half_length = 100;   ///< M
  Index naive_kicks = 200;
};

enum class OutputFormat { csv, json };

struct ExperimentConfig {
  ChainConfig<double> chain{201, 1.0, 0.125, 101, 0.0};
  EncodingSubspace encoder = EncodingSubspace::centered(101, 201);
  FigureParameters figure_parameters;
  PacketDetection detection;
  /// Raw timeline segments, used by custom (non-figure) runs.
  io::json timeline = io::json::array();
  std::optional<std::string> figure;
  std::optional<std::filesystem::path> output;
  OutputFormat format = OutputFormat::csv;

  void validate() const;
};

/// The configuration reproducing a figure: "1a", "1b", "2" or "3".
ExperimentConfig default_figure_config(const std::string& which);

/// Parses and validates; unknown keys are rejected. Fields absent from `doc`
/// keep the values of `base`.
ExperimentConfig parse_experiment_config(const io::json& doc, const ExperimentConfig& base = {});
io::json experiment_config_to_json(const ExperimentConfig& config);

/// A manifest check: value compared against a bound.
struct Verdict {
  std::string name;
  double value = 0;
  double bound = 0;
  std::string relation;  ///< "<=", "<", ">=", "=="
  bool passed = false;
};

Verdict verdict(std::string name, double value, std::string relation, double bound);

struct ExperimentResult {
  std::string name;
  RunRecord record;
  std::vector<Verdict> verdicts;
  io::json metrics = io::json::object();
  io::json manifest;  ///< filled by build_manifest
  bool passed() const;
};

/// Runs the figure selected by `config.figure`.
ExperimentResult run_figure(const ExperimentConfig& config);
/// Runs the custom timeline in `config.timeline`.
ExperimentResult run_custom(const ExperimentConfig& config);
/// Dispatches on `config.figure`.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes capture profiles (CSV unless the format is json, in which case they
/// are embedded) and manifest.json under `dir`; fills result.manifest.
void write_experiment(ExperimentResult& result, const ExperimentConfig& config,
                      const std::filesystem::path& dir);
/// Builds the manifest without touching the filesystem.
io::json build_manifest(const ExperimentResult& result, const ExperimentConfig& config,
                        bool embed_profiles);

/// File stem for a capture label, e.g. "stop@200" -> "stop_200".
std::string capture_file_stem(const std::string& label);

struct CheckReport {
  std::string name;
  bool passed = false;
  io::json details = io::json::object();
};

/// "parity-identity", "sequence-identity", "mapping", "oracle", "diffusion-rate".
CheckReport run_check(const std::string& which);
const std::vector<std::string>& check_names();

/// Encoder coefficient table for the configured subspace.
struct EncoderTable {
  EncodedState<double> max_state;
  std::vector<Index> sites;
};
EncoderTable encode(const ExperimentConfig& config);

}  // namespace magnon
