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
 * Generative modelling with quenched disorder.
 *
 * Target data come from an all-to-all Boltzmann machine
 * E(z) = sum_i a_i z_i + sum_{i<j} b_ij z_i z_j, q(z) ~ exp(-E / kT).
 * Training is greedy in Hilbert space: each cycle propagates the committed
 * state under D freshly drawn disorder realizations and keeps the one whose
 * output distribution is closest (in KL) to the smoothed data histogram.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "qchain/evolution.hpp"
#include "qchain/rng.hpp"
#include "qchain/spin_core.hpp"

namespace qchain {

/// Exhaustive enumeration refuses chains longer than this.
inline constexpr int kBoltzmannEnumerationLimit = 20;

struct BoltzmannModel {
  std::vector<double> a;  ///< biases a_1..a_L
  std::vector<double> b;  ///< couplings b_ij for i<j, packed row by row
  double temperature = 1.0;

  [[nodiscard]] int num_sites() const { return static_cast<int>(a.size()); }
  /// b_ij for 1 <= i < j <= L.
  [[nodiscard]] double coupling(int i, int j) const;
  /// Index of b_ij in the packed vector (0-based sites i < j).
  [[nodiscard]] static std::size_t pair_index(int L, int i, int j);
  /// Throws ArgumentError on size mismatch or non-positive temperature.
  void validate() const;
};

/// a_i and b_ij uniform on [-J/2, J/2].
template <class Urbg>
BoltzmannModel random_boltzmann_model(int L, double J, double temperature, Urbg& rng) {
  if (L < 1) throw ArgumentError("random_boltzmann_model: L must be >= 1");
  std::uniform_real_distribution<double> coef(-0.5 * J, 0.5 * J);
  BoltzmannModel m;
  m.temperature = temperature;
  m.a.resize(static_cast<std::size_t>(L));
  for (auto& v : m.a) v = coef(rng);
  m.b.resize(static_cast<std::size_t>(L) * static_cast<std::size_t>(L - 1) / 2);
  for (auto& v : m.b) v = coef(rng);
  m.validate();
  return m;
}

/// E(z) for spins z_i in {+1, -1}.
[[nodiscard]] double boltzmann_energy(std::span<const int> z, const BoltzmannModel& model);
/// E(z) for the configuration encoded by a basis index (bit 0 -> +1).
[[nodiscard]] double boltzmann_energy(BasisIndex index, const BoltzmannModel& model);

/// q(z) for every basis index. Throws ResourceError above the enumeration limit.
[[nodiscard]] std::vector<double> exact_boltzmann(const BoltzmannModel& model);

struct Dataset {
  int L = 0;
  std::vector<BasisIndex> samples;     ///< configurations, basis-index encoded
  std::vector<double> empirical_hist;  ///< counts / n over all 2^L outcomes

  /// z of sample k as +-1 spins, site 1 first.
  [[nodiscard]] std::vector<int> spins(std::size_t k) const;
};

/// n i.i.d. draws from q by inverse CDF over the enumerated outcomes.
template <class Urbg>
Dataset sample_dataset(const BoltzmannModel& model, std::size_t n_samples, Urbg& rng) {
  const auto q = exact_boltzmann(model);
  std::vector<double> cdf(q.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) cdf[k] = (acc += q[k]);
  Dataset ds;
  ds.L = model.num_sites();
  ds.samples.reserve(n_samples);
  ds.empirical_hist.assign(q.size(), 0.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double x = u(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
    if (it == cdf.end()) --it;
    const auto k = static_cast<BasisIndex>(it - cdf.begin());
    ds.samples.push_back(k);
    ds.empirical_hist[k] += 1.0;
  }
  if (n_samples > 0) {
    for (auto& v : ds.empirical_hist) v /= static_cast<double>(n_samples);
  }
  return ds;
}

/// (q~ + eps) / (1 + eps 2^L); eps <= 0 selects the default 1 / (2 n_samples).
[[nodiscard]] std::vector<double> smoothed_target(const Dataset& dataset, double eps = 0.0);

/// KL(p_m || q~') of the state's full output distribution.
[[nodiscard]] double training_cost(const StateVector& state, const Dataset& dataset,
                                   double eps = 0.0);
[[nodiscard]] double training_cost(std::span<const double> probs,
                                   std::span<const double> smoothed);

struct TrainingOptions {
  IntegratorConfig integrator;
  int threads = 1;
  /// Target smoothing; <= 0 selects 1 / (2 n_samples).
  double smoothing = 0.0;
  /// Estimate each candidate's p_m from this many measurement shots instead of
  /// the exact distribution. 0 disables.
  std::uint64_t shots = 0;
  /// Keep every candidate's (cost, entropy); otherwise only the chosen one.
  bool record_candidates = true;
};

struct CycleRecord {
  std::size_t chosen = 0;
  double chosen_cost = 0.0;
  double chosen_entropy = 0.0;
  std::vector<double> costs;      ///< one per candidate, empty unless recorded
  std::vector<double> entropies;  ///< one per candidate, empty unless recorded
};

struct TrainingTrace {
  std::vector<CycleRecord> cycles;
  std::vector<DisorderRealization> chosen_unitaries;  ///< disorder of U_1, U_2, ...
  StateVector final_state;
};

/// Greedy quenched-disorder training from the all-up state. Each cycle draws D
/// disorder realizations from rng, propagates the committed state under each,
/// and commits the lowest-cost candidate (ties go to the lowest index).
[[nodiscard]] TrainingTrace train(const ModelParams& params, Envelope envelope,
                                  const Dataset& dataset, std::size_t D, int m_max,
                                  Philox4x32& rng, const TrainingOptions& options = {});

struct MemoryOptions {
  int m_ref_begin = 80;
  int m_ref_end = 90;  ///< inclusive
  int dm_max = 20;
  double smoothing = 1e-12;
  IntegratorConfig integrator;
};

/// KL(p_{m+dm} || p_m') averaged over m in [m_ref_begin, m_ref_end], for
/// dm = 0..dm_max, along one unconditional quenched trajectory. p_m' is p_m
/// smoothed by `smoothing`. `observer`, if set, sees the state after every cycle.
[[nodiscard]] std::vector<double> memory_divergence(
    const ModelParams& params, Envelope envelope, const MemoryOptions& options, Philox4x32& rng,
    const std::function<void(int, const StateVector&)>& observer = {});

}  // namespace qchain
