#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "subdelay/delay.hpp"
#include "subdelay/env.hpp"

namespace subdelay {

/// Everything needed to reproduce an experiment grid. Defaults are the
/// 20-arm, k=4 benchmark: both environment families, delays D1-D6, ETCG,
/// horizons 10^2..10^5, ten replications.
struct ExperimentConfig {
  std::vector<std::string> envs{"F1", "F2"};
  std::size_t n = 20;
  std::size_t k = 4;
  double f1_weight_lo = 0.1;
  double f1_weight_hi = 0.9;
  LinearEnv::Noise f1_noise{};
  std::vector<std::size_t> f2_sizes{6, 6, 6, 2};

  std::vector<std::string> delays{"D1", "D2", "D3", "D4", "D5", "D6"};
  std::vector<double> custom_pmf;  // used by the "custom" delay

  std::vector<std::string> agents{"etcg"};
  std::vector<std::uint64_t> horizons{100, 1000, 10000, 100000};
  std::size_t replications = 10;
  std::uint64_t master_seed = 1;
  std::filesystem::path output_dir = "results";

  bool trace = false;         // per-step trace CSVs
  bool alpha_one = false;     // also emit 1-regret summaries
  bool force_alg1_m = false;  // cetc-greedy uses the ETCG schedule for m
  bool full = false;          // include horizons above kDeskScaleHorizon

  static constexpr std::uint64_t kDeskScaleHorizon = 10'000;

  /// Throws ConfigError on the first violated constraint.
  void validate() const;

  /// Horizons that will actually run (large ones are dropped unless full).
  std::vector<std::uint64_t> effective_horizons() const;
};

/// Parses the YAML experiment file. Errors name the offending line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Reads the resolved config back out of a manifest written by run_experiment.
ExperimentConfig config_from_manifest(const std::filesystem::path& manifest_path);

/// Environment instance for a family name, drawn from the master seed.
Environment build_environment(const ExperimentConfig& config, const std::string& family);
DelayModel build_delay(const ExperimentConfig& config, const std::string& name);

/// One (env, delay, agent, T) combination of the grid.
struct Cell {
  std::size_t index;       // position in the grid
  std::size_t seed_index;  // shared by agents so they see common random numbers
  std::string env;
  std::string delay;
  std::string agent;
  std::uint64_t horizon;
};

std::vector<Cell> enumerate_cells(const ExperimentConfig& config);

struct RunOptions {
  /// Restrict to these cell indices; empty runs everything.
  std::vector<std::size_t> only_cells;
  /// Worker count; 0 reads SUBDELAY_THREADS, else hardware concurrency.
  std::size_t threads = 0;
  bool quiet = true;
  /// Called on the worker thread before each run; an exception thrown here
  /// fails that run like any simulation error.
  std::function<void(const Cell&, std::size_t replication)> before_run;
};

struct CellFailure {
  std::size_t run_id;
  std::size_t cell;
  std::size_t replication;
  std::string message;
};

struct ExperimentReport {
  std::size_t runs = 0;
  std::vector<CellFailure> failures;
  std::vector<std::string> warnings;
  std::filesystem::path manifest;
  bool ok() const noexcept { return failures.empty(); }
};

/// Runs the grid and writes summary.csv, slopes.csv, runs.csv, manifest.json
/// (plus trace and alpha=1 files when enabled) under config.output_dir.
ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

std::size_t worker_count(std::size_t requested);

std::string code_version();

}  // namespace subdelay
