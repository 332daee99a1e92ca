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

// sim <experiment> [options]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 1 anything else.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <utility>

#include "qchain/errors.hpp"
#include "qchain/harness.hpp"

namespace {

template <class T>
void overlay(T& field, const std::optional<T>& value) {
  if (value) field = *value;
}

struct Flags {
  std::vector<int> L;
  std::vector<double> W;
  std::vector<double> omega;
  std::optional<double> F, J, tol, x_max, temperature;
  std::optional<int> m, substeps, max_substeps, bins, ratio_bins, m_ref_begin, m_ref_end, dm_max,
      layers_per_cycle, threads, dense_limit;
  std::optional<std::size_t> D, datasets, samples, scatter_datasets;
  std::optional<std::uint64_t> seed, shots;
  std::optional<std::string> out, envelope;
  std::optional<bool> digital;
  bool no_modulation = false;
  bool no_calibrate = false;
  bool no_repeat = false;
  bool final_hadamard = false;
  bool no_checkpoint = false;
  bool quiet = false;
};

qchain::ExperimentConfig resolve(qchain::Experiment e, const Flags& f) {
  auto c = qchain::default_config(e);
  if (!f.L.empty()) c.L = f.L;
  if (!f.W.empty()) c.W = f.W;
  if (!f.omega.empty()) c.omega = f.omega;
  overlay(c.F, f.F);
  overlay(c.J, f.J);
  overlay(c.m, f.m);
  overlay(c.D, f.D);
  overlay(c.seed, f.seed);
  overlay(c.out, f.out);
  if (f.envelope) c.envelope = qchain::parse_envelope(*f.envelope);
  if (f.no_modulation) c.envelope = qchain::Envelope::kConstantHalf;
  overlay(c.digital, f.digital);
  overlay(c.layers_per_cycle, f.layers_per_cycle);
  overlay(c.integrator.substeps_per_cycle, f.substeps);
  overlay(c.integrator.convergence_tol, f.tol);
  overlay(c.max_substeps, f.max_substeps);
  if (f.no_calibrate) c.calibrate_substeps = false;
  overlay(c.binning.bins, f.bins);
  overlay(c.binning.x_max, f.x_max);
  overlay(c.ratio_bins, f.ratio_bins);
  overlay(c.datasets, f.datasets);
  overlay(c.samples, f.samples);
  overlay(c.temperature, f.temperature);
  overlay(c.shots, f.shots);
  overlay(c.scatter_datasets, f.scatter_datasets);
  overlay(c.m_ref_begin, f.m_ref_begin);
  overlay(c.m_ref_end, f.m_ref_end);
  overlay(c.dm_max, f.dm_max);
  overlay(c.threads, f.threads);
  overlay(c.dense_limit, f.dense_limit);
  if (f.no_repeat) c.circuit.no_repeat = true;
  if (f.final_hadamard) c.circuit.final_hadamard = true;
  if (f.no_checkpoint) c.checkpoint = false;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven disordered Ising chain simulator"};
  app.set_config("--config", "", "TOML or INI file with option values; flags override it");
  app.require_subcommand(1);
  Flags f;

  app.add_option("--L", f.L, "Chain lengths, comma separated")->delimiter(',');
  app.add_option("--W", f.W, "Disorder strengths, comma separated")->delimiter(',');
  app.add_option("--omega", f.omega, "Drive frequencies, comma separated")->delimiter(',');
  app.add_option("--F", f.F, "Drive amplitude");
  app.add_option("--J", f.J, "Nearest-neighbour coupling");
  app.add_option("--m", f.m, "Drive cycles (and circuit layers)");
  app.add_option("--D", f.D, "Realizations per sweep point (train: candidates per cycle)");
  app.add_option("--seed", f.seed, "Master seed");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--envelope", f.envelope, "sinusoidal | constant-half | zero");
  app.add_flag("--no-modulation", f.no_modulation, "Use the constant-half envelope");
  app.add_flag("--digital,!--no-digital", f.digital, "Also run random circuits (supremacy)");
  app.add_option("--layers-per-cycle", f.layers_per_cycle, "Circuit layers matched to one cycle");
  app.add_flag("--no-repeat", f.no_repeat, "Forbid repeating a site's previous gate");
  app.add_flag("--final-hadamard", f.final_hadamard, "Append a Hadamard layer to circuits");
  app.add_option("--substeps", f.substeps, "Starting substeps per cycle");
  app.add_option("--tol", f.tol, "Substep convergence tolerance (fidelity deficit)");
  app.add_option("--max-substeps", f.max_substeps, "Calibration ceiling");
  app.add_flag("--no-calibrate", f.no_calibrate, "Use --substeps as given");
  app.add_option("--bins", f.bins, "Histogram bins on x = N p");
  app.add_option("--x-max", f.x_max, "Upper edge of the histogram window");
  app.add_option("--ratio-bins", f.ratio_bins, "Bins of the spacing-ratio histogram");
  app.add_option("--datasets", f.datasets, "train: Boltzmann datasets");
  app.add_option("--samples", f.samples, "train: samples per dataset");
  app.add_option("--temperature", f.temperature, "train: k_B T");
  app.add_option("--shots", f.shots, "train: measurement shots per candidate (0 = exact)");
  app.add_option("--scatter-datasets", f.scatter_datasets, "train: datasets with full scatter output");
  app.add_option("--m-ref-begin", f.m_ref_begin, "memory: first reference cycle");
  app.add_option("--m-ref-end", f.m_ref_end, "memory: last reference cycle");
  app.add_option("--dm-max", f.dm_max, "memory: largest cycle offset");
  app.add_option("--threads", f.threads, "Worker threads (0 = all cores; SIM_THREADS caps)");
  app.add_option("--dense-limit", f.dense_limit, "Largest L for dense operators");
  app.add_flag("--no-checkpoint", f.no_checkpoint, "Disable resumable checkpoints");
  app.add_flag("--quiet,-q", f.quiet, "No progress output");

  std::optional<qchain::Experiment> chosen;
  const std::pair<qchain::Experiment, const char*> subcommands[] = {
      {qchain::Experiment::kSupremacy, "KL to Porter-Thomas per cycle, analog vs random circuits"},
      {qchain::Experiment::kMagnus, "Exact vs truncated high-frequency evolution"},
      {qchain::Experiment::kMblProbe, "Quasi-energy spacing ratios and output KL vs disorder"},
      {qchain::Experiment::kPhaseDiagram, "Spacing ratio and KL over a (W, omega) grid"},
      {qchain::Experiment::kTrain, "Greedy quenched-disorder generative training"},
      {qchain::Experiment::kMemory, "KL between output distributions m and m + dm cycles apart"}};
  for (const auto& [e, help] : subcommands) {
    auto* sub = app.add_subcommand(std::string(qchain::to_string(e)), help);
    sub->fallthrough();
    sub->callback([&chosen, e = e] { chosen = e; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto config = resolve(*chosen, f);
    qchain::RunOptions options;
    if (!f.quiet) {
      options.progress = [](const std::string& stage, std::size_t done, std::size_t total) {
        if (done == total || done % 10 == 0) {
          std::fprintf(stderr, "\r%s  %zu/%zu%s", stage.c_str(), done, total, done == total ? "\n" : "");
          std::fflush(stderr);
        }
      };
    }
    const auto result = qchain::run_experiment(config, options);
    if (!f.quiet) {
      for (const auto& c : result.calibrations) {
        std::fprintf(stderr, "substeps L=%d W=%g omega=%g: %d\n", c.L, c.W, c.omega, c.substeps);
      }
      std::fprintf(stderr, "wrote %zu tables to %s\n", result.tables.size(), config.out.c_str());
    }
  } catch (const qchain::ConfigError& e) {
    std::cerr << "sim: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const qchain::ArgumentError& e) {
    std::cerr << "sim: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const qchain::NumericError& e) {
    std::cerr << "sim: numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const qchain::DivergenceError& e) {
    std::cerr << "sim: numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "sim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
