// Copyright 2026 The qchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Experiment orchestration: configuration with per-experiment defaults,
 * deterministic disorder sweeps with resumable checkpoints, and CSV / JSON
 * emitters.
 *
 * Every random draw comes from realization_rng(seed, index, tag), where the
 * index encodes (sweep cell, realization). Results are reduced in realization
 * order, so tables do not depend on the worker count.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "qchain/circuit.hpp"
#include "qchain/evolution.hpp"
#include "qchain/spin_core.hpp"
#include "qchain/stats.hpp"

namespace qchain {

enum class Experiment { kSupremacy, kMagnus, kMblProbe, kPhaseDiagram, kTrain, kMemory };

[[nodiscard]] std::string_view to_string(Experiment e);
/// Throws ConfigError for unknown names.
[[nodiscard]] Experiment parse_experiment(std::string_view name);

struct ExperimentConfig {
  Experiment experiment = Experiment::kSupremacy;

  std::vector<int> L{9};
  std::vector<double> W{5.0};
  std::vector<double> omega{8.0};
  double F = 2.5;
  double J = 1.0;
  Envelope envelope = Envelope::kSinusoidal;

  int m = 30;                ///< cycles (analog) and layers (digital)
  std::size_t D = 500;       ///< realizations per sweep cell
  std::uint64_t seed = 1;
  std::string out = "out";

  /// supremacy: also run random circuits at matched depth.
  bool digital = true;
  /// Layers of circuit per analog cycle.
  int layers_per_cycle = 1;
  CircuitOptions circuit;

  IntegratorConfig integrator;
  /// Double the substep count until the K-vs-2K fidelity deficit is below tol.
  bool calibrate_substeps = true;
  int max_substeps = 1 << 16;
  Binning binning;
  /// Bins of the level-spacing ratio histogram on [0, 1].
  int ratio_bins = 50;

  // train
  std::size_t datasets = 50;
  std::size_t samples = 3000;
  double temperature = 1.0;
  std::uint64_t shots = 0;
  /// Datasets whose full candidate scatter is written out.
  std::size_t scatter_datasets = 1;

  // memory
  int m_ref_begin = 80;
  int m_ref_end = 90;
  int dm_max = 20;

  int threads = 0;  ///< 0 = all cores, capped by SIM_THREADS
  bool checkpoint = true;
  int dense_limit = kDefaultDenseLimit;

  /// Throws ConfigError on any invalid field.
  void validate() const;
};

/// Defaults for one experiment, following the corresponding figure setup.
[[nodiscard]] ExperimentConfig default_config(Experiment e);

/// Fields that determine the results, as a JSON string (no output path,
/// thread count or checkpoint switch).
[[nodiscard]] std::string config_json(const ExperimentConfig& config);
/// Stable 64-bit hash of config_json.
[[nodiscard]] std::uint64_t config_hash(const ExperimentConfig& config);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Column index by name; throws ArgumentError if absent.
  [[nodiscard]] std::size_t column(std::string_view name) const;
  /// Rows where every (column, value) pair matches exactly.
  [[nodiscard]] std::vector<std::vector<double>> select(
      const std::vector<std::pair<std::string, double>>& where) const;
  /// Value of `column` in the single row matching `where`; throws if not unique.
  [[nodiscard]] double value(std::string_view column,
                             const std::vector<std::pair<std::string, double>>& where) const;
};

struct Calibration {
  int L = 0;
  double W = 0.0;
  double omega = 0.0;
  int substeps = 0;
  double deficit = 0.0;  ///< fidelity deficit between K and 2K at the chosen K
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<Table> tables;
  std::vector<Calibration> calibrations;

  [[nodiscard]] const Table& table(std::string_view name) const;
};

struct RunOptions {
  /// Write CSV tables, manifest and checkpoints under config.out.
  bool write_files = true;
  /// Called with (stage, done, total) as realizations complete.
  std::function<void(const std::string&, std::size_t, std::size_t)> progress;
};

/// Runs the configured experiment. Throws ConfigError on invalid input and
/// NumericError / DivergenceError on numerical failure.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Smallest K (doubling from integrator.substeps_per_cycle) whose one-cycle
/// state differs from the 2K state by less than the tolerance in fidelity,
/// probed with a Haar-random state and one disorder draw.
[[nodiscard]] Calibration calibrate_substeps(const ModelParams& params, Envelope envelope,
                                             const IntegratorConfig& integrator,
                                             std::uint64_t seed, std::uint64_t cell,
                                             int max_substeps = 1 << 16);

/// `%.12g` CSV with a header row.
void write_csv(const Table& table, const std::filesystem::path& path);
/// Manifest: resolved config, seed, code version, calibrations, table names.
void write_manifest(const ExperimentResult& result, const std::filesystem::path& path);

/// Jackknife mean and standard error of `estimator` over `blocks` contiguous
/// groups of per-realization payloads. estimator sees the merged payload of
/// all realizations outside one block.
[[nodiscard]] MeanError jackknife(const std::vector<std::vector<double>>& payloads,
                                  const std::function<double(const std::vector<double>&)>& estimator,
                                  int blocks = 10);

/// Semantic version of the library.
[[nodiscard]] std::string_view version();

}  // namespace qchain
