// magnonctl: encode | figure | check | sweep
//
// Precedence, lowest first: built-in defaults, figure defaults, --config
// file, command-line flags. Outputs go to --out, else the config's "output",
// else $MAGNON_OUTPUT_ROOT/<run>, else ./magnon-out/<run>.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <thread>

#include <CLI11.hpp>

#include "magnon/experiments.hpp"

namespace {

using magnon::io::json;

enum Exit { ok = 0, check_failed = 1, config_error = 2, runtime_alarm = 3 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string out;
  std::string format;
};

std::filesystem::path output_root() {
  if (const char* env = std::getenv("MAGNON_OUTPUT_ROOT"); env && *env) return env;
  return "magnon-out";
}

json load_config_doc(const std::string& path) {
  if (path.empty()) return json::object();
  try {
    return magnon::io::read_json(path);
  } catch (const magnon::IoError& e) {
    throw ConfigError(e.what());
  }
}

magnon::ExperimentConfig apply_flags(json doc, const Options& opt, magnon::ExperimentConfig base) {
  if (!opt.format.empty()) doc["format"] = opt.format;
  if (!opt.out.empty()) doc["output"] = opt.out;
  return magnon::parse_experiment_config(doc, base);
}

std::filesystem::path output_dir(const magnon::ExperimentConfig& cfg, const std::string& run) {
  return cfg.output ? *cfg.output : output_root() / run;
}

void print_verdicts(const magnon::ExperimentResult& r) {
  for (const auto& v : r.verdicts) {
    std::printf("  %-4s %s: %.6g %s %.6g\n", v.passed ? "ok" : "FAIL", v.name.c_str(), v.value,
                v.relation.c_str(), v.bound);
  }
}

int cmd_encode(const Options& opt) {
  const auto cfg = apply_flags(load_config_doc(opt.config), opt, {});
  const auto table = magnon::encode(cfg);
  std::printf("encoding subspace m0=%ld, %ld states, D eigenvalue %.16f\n",
              static_cast<long>(cfg.encoder.center), static_cast<long>(cfg.encoder.dimension()),
              table.max_state.eigenvalue);
  std::printf("%6s %7s %10s\n", "site", "offset", "beta");
  for (std::size_t i = 0; i < table.sites.size(); ++i) {
    std::printf("%6ld %+7ld %10.4f\n", static_cast<long>(table.sites[i]), cfg.encoder.offsets[i],
                table.max_state.coefficients(static_cast<magnon::Index>(i)));
  }
  const auto dir = output_dir(cfg, "encode");
  json snapshot = magnon::io::state_to_json(table.max_state.state);
  magnon::io::write_json(dir / "encoder_state.json", snapshot);
  json betas = json::array();
  for (std::size_t i = 0; i < table.sites.size(); ++i) {
    betas.push_back({{"site", table.sites[i]},
                     {"offset", cfg.encoder.offsets[i]},
                     {"beta", table.max_state.coefficients(static_cast<magnon::Index>(i))}});
  }
  magnon::io::write_json(dir / "encoder_table.json",
                         json{{"m0", cfg.encoder.center},
                              {"eigenvalue", table.max_state.eigenvalue},
                              {"coefficients", std::move(betas)}});
  std::printf("wrote %s\n", (dir / "encoder_state.json").string().c_str());
  return ok;
}

int run_and_write(const magnon::ExperimentConfig& cfg, const std::string& run) {
  auto result = magnon::run_experiment(cfg);
  const auto dir = output_dir(cfg, run);
  magnon::write_experiment(result, cfg, dir);
  std::printf("%s: %s (%s)\n", result.name.c_str(), result.passed() ? "pass" : "FAIL",
              (dir / (result.name + "_manifest.json")).string().c_str());
  print_verdicts(result);
  return result.passed() ? ok : check_failed;
}

int cmd_figure(const Options& opt, const std::string& which) {
  json doc = load_config_doc(opt.config);
  if (which == "all") {
    int rc = ok;
    for (const char* fig : {"1a", "1b", "2", "3"}) {
      json d = doc;
      d.erase("figure");
      if (d.contains("timeline")) throw ConfigError("config: 'figure all' cannot take a timeline");
      const auto cfg = apply_flags(d, opt, magnon::default_figure_config(fig));
      rc = std::max(rc, run_and_write(cfg, std::string("figure-") + fig));
    }
    return rc;
  }
  magnon::ExperimentConfig base;
  if (!which.empty()) {
    if (doc.contains("timeline")) {
      throw ConfigError("config: a timeline config runs without a figure argument");
    }
    doc.erase("figure");
    base = magnon::default_figure_config(which);
  } else if (!doc.contains("figure") && !doc.contains("timeline")) {
    throw ConfigError("figure: name a figure (1a, 1b, 2, 3, all) or give a config with one");
  }
  const auto cfg = apply_flags(doc, opt, base);
  return run_and_write(cfg, cfg.figure ? "figure-" + *cfg.figure : std::string("custom"));
}

int cmd_check(const Options& opt, const std::string& which) {
  std::vector<std::string> names;
  if (which == "all") {
    names = magnon::check_names();
  } else {
    names = {which};
  }
  json reports = json::array();
  bool passed = true;
  for (const auto& n : names) {
    const auto rep = magnon::run_check(n);
    passed = passed && rep.passed;
    reports.push_back({{"check", rep.name}, {"passed", rep.passed}, {"details", rep.details}});
  }
  const json doc = names.size() == 1 ? reports[0] : json{{"checks", reports}, {"passed", passed}};
  std::fputs(magnon::io::dump(doc).c_str(), stdout);
  if (!opt.out.empty()) {
    magnon::io::write_json(std::filesystem::path(opt.out) / ("check_" + which + ".json"), doc);
  }
  return passed ? ok : check_failed;
}

// {"runs": [{"name": "...", "config": {...}}, ...]}
int cmd_sweep(const Options& opt, unsigned jobs) {
  if (opt.config.empty()) throw ConfigError("sweep: --config is required");
  const json doc = load_config_doc(opt.config);
  magnon::io::reject_unknown_keys(doc, {"runs"}, "sweep");
  const auto& runs_doc = doc.at("runs");
  if (!runs_doc.is_array() || runs_doc.empty()) throw ConfigError("sweep: 'runs' must be a non-empty array");

  const std::filesystem::path root = opt.out.empty() ? output_root() / "sweep" : std::filesystem::path(opt.out);
  struct Run {
    std::string name;
    magnon::ExperimentConfig cfg;
  };
  std::vector<Run> runs;
  std::vector<std::string> seen;
  for (const auto& r : runs_doc) {
    magnon::io::reject_unknown_keys(r, {"name", "config"}, "sweep run");
    Run run{r.at("name").get<std::string>(), {}};
    if (run.name.empty() || magnon::capture_file_stem(run.name) != run.name) {
      throw ConfigError("sweep: run name '" + run.name + "' must use [A-Za-z0-9_-]");
    }
    if (std::find(seen.begin(), seen.end(), run.name) != seen.end()) {
      throw ConfigError("sweep: duplicate run name '" + run.name + "'");
    }
    seen.push_back(run.name);
    json c = r.at("config");
    c.erase("output");
    if (!opt.format.empty()) c["format"] = opt.format;
    run.cfg = magnon::parse_experiment_config(c);
    run.cfg.output = root / run.name;
    runs.push_back(std::move(run));
  }

  std::atomic<std::size_t> next{0};
  std::vector<int> codes(runs.size(), ok);
  std::vector<std::string> messages(runs.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        auto result = magnon::run_experiment(runs[i].cfg);
        magnon::write_experiment(result, runs[i].cfg, *runs[i].cfg.output);
        codes[i] = result.passed() ? ok : check_failed;
        messages[i] = result.passed() ? "pass" : "FAIL";
      } catch (const magnon::ValidationError& e) {
        codes[i] = config_error;
        messages[i] = std::string("config error: ") + e.what();
      } catch (const std::exception& e) {
        codes[i] = runtime_alarm;
        messages[i] = std::string("alarm: ") + e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, unsigned(runs.size())));
  std::vector<std::future<void>> pool;
  for (unsigned t = 0; t < n; ++t) pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool) f.get();

  int rc = ok;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::printf("%s: %s\n", runs[i].name.c_str(), messages[i].c_str());
    rc = std::max(rc, codes[i]);
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kicked spin-chain magnon stopping and relaunch"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON config file");
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--format", opt.format, "capture format")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* encode = app.add_subcommand("encode", "print the encoder table and write the state snapshot");
  add_common(encode);

  std::string figure_name;
  auto* figure = app.add_subcommand("figure", "reproduce a figure timeline");
  figure->add_option("which", figure_name, "1a, 1b, 2, 3 or all")
      ->check(CLI::IsMember({"1a", "1b", "2", "3", "all"}));
  add_common(figure);

  std::string check_name;
  auto* check = app.add_subcommand("check", "run an identity check");
  std::vector<std::string> checks = magnon::check_names();
  checks.push_back("all");
  check->add_option("which", check_name, "check name or all")->required()->check(CLI::IsMember(checks));
  add_common(check);

  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("sweep", "run several configs concurrently");
  add_common(sweep);
  sweep->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : config_error;
  }

  try {
    if (*encode) return cmd_encode(opt);
    if (*figure) return cmd_figure(opt, figure_name);
    if (*check) return cmd_check(opt, check_name);
    return cmd_sweep(opt, jobs);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "magnonctl: %s\n", e.what());
    return config_error;
  } catch (const magnon::ValidationError& e) {
    std::fprintf(stderr, "magnonctl: %s\n", e.what());
    return config_error;
  } catch (const magnon::DimensionError& e) {
    std::fprintf(stderr, "magnonctl: %s\n", e.what());
    return config_error;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "magnonctl: config: %s\n", e.what());
    return config_error;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "magnonctl: alarm: %s\n", e.what());
    return runtime_alarm;
  }
}
