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

#include "qchain/genmodel.hpp"

#include <cmath>
#include <limits>

#include "qchain/parallel.hpp"
#include "qchain/stats.hpp"

namespace qchain {

namespace {

std::vector<double> shot_estimate(std::span<const double> probs, std::uint64_t shots,
                                  Philox4x32& rng) {
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) cdf[k] = (acc += probs[k]);
  std::vector<double> est(probs.size(), 0.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u(rng) * acc);
    if (it == cdf.end()) --it;
    est[static_cast<std::size_t>(it - cdf.begin())] += 1.0;
  }
  for (auto& v : est) v /= static_cast<double>(shots);
  return est;
}

}  // namespace

std::size_t BoltzmannModel::pair_index(int L, int i, int j) {
  // rows i = 0..L-2 hold L-1-i entries each
  const auto li = static_cast<std::size_t>(i);
  const auto n = static_cast<std::size_t>(L);
  return li * (2 * n - li - 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

double BoltzmannModel::coupling(int i, int j) const {
  const int L = num_sites();
  if (i < 1 || j <= i || j > L) throw ArgumentError("BoltzmannModel::coupling: need 1 <= i < j <= L");
  return b[pair_index(L, i - 1, j - 1)];
}

void BoltzmannModel::validate() const {
  const auto L = a.size();
  if (L == 0) throw ArgumentError("BoltzmannModel: no sites");
  if (b.size() != L * (L - 1) / 2) throw ArgumentError("BoltzmannModel: b must hold L(L-1)/2 couplings");
  if (!(temperature > 0.0)) throw ArgumentError("BoltzmannModel: temperature must be positive");
}

double boltzmann_energy(std::span<const int> z, const BoltzmannModel& model) {
  const int L = model.num_sites();
  if (z.size() != static_cast<std::size_t>(L)) throw ArgumentError("boltzmann_energy: z must have length L");
  double e = 0.0;
  std::size_t pair = 0;
  for (int i = 0; i < L; ++i) {
    e += model.a[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < L; ++j) {
      e += model.b[pair++] * z[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(j)];
    }
  }
  return e;
}

double boltzmann_energy(BasisIndex index, const BoltzmannModel& model) {
  const int L = model.num_sites();
  std::vector<int> z(static_cast<std::size_t>(L));
  for (int i = 0; i < L; ++i) z[static_cast<std::size_t>(i)] = basis_spin(index, i + 1, L);
  return boltzmann_energy(z, model);
}

std::vector<double> exact_boltzmann(const BoltzmannModel& model) {
  model.validate();
  const int L = model.num_sites();
  if (L > kBoltzmannEnumerationLimit) {
    throw ResourceError("exact_boltzmann: L = " + std::to_string(L) + " exceeds enumeration limit " +
                        std::to_string(kBoltzmannEnumerationLimit));
  }
  const std::size_t N = std::size_t{1} << L;
  std::vector<double> logw(N);
  double max_logw = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < N; ++k) {
    logw[k] = -boltzmann_energy(static_cast<BasisIndex>(k), model) / model.temperature;
    max_logw = std::max(max_logw, logw[k]);
  }
  double Z = 0.0;
  for (auto& v : logw) Z += (v = std::exp(v - max_logw));
  for (auto& v : logw) v /= Z;
  return logw;
}

std::vector<int> Dataset::spins(std::size_t k) const {
  if (k >= samples.size()) throw ArgumentError("Dataset::spins: index out of range");
  std::vector<int> z(static_cast<std::size_t>(L));
  for (int i = 0; i < L; ++i) z[static_cast<std::size_t>(i)] = basis_spin(samples[k], i + 1, L);
  return z;
}

std::vector<double> smoothed_target(const Dataset& dataset, double eps) {
  if (dataset.empirical_hist.empty()) throw ArgumentError("smoothed_target: empty dataset");
  if (eps <= 0.0) {
    if (dataset.samples.empty()) throw ArgumentError("smoothed_target: default smoothing needs samples");
    eps = 0.5 / static_cast<double>(dataset.samples.size());
  }
  const double norm = 1.0 + eps * static_cast<double>(dataset.empirical_hist.size());
  std::vector<double> q(dataset.empirical_hist);
  for (auto& v : q) v = (v + eps) / norm;
  return q;
}

double training_cost(std::span<const double> probs, std::span<const double> smoothed) {
  return kl_discrete(probs, smoothed);
}

double training_cost(const StateVector& state, const Dataset& dataset, double eps) {
  if (state.size() != dataset.empirical_hist.size()) {
    throw ArgumentError("training_cost: state dimension does not match the dataset");
  }
  const auto p = output_probs(state);
  return training_cost(p, smoothed_target(dataset, eps));
}

TrainingTrace train(const ModelParams& params, Envelope envelope, const Dataset& dataset,
                    std::size_t D, int m_max, Philox4x32& rng, const TrainingOptions& options) {
  params.validate();
  options.integrator.validate();
  if (D < 1) throw ArgumentError("train: D must be >= 1");
  if (m_max < 0) throw ArgumentError("train: m_max must be >= 0");
  if (dataset.L != params.L || dataset.empirical_hist.size() != params.dimension()) {
    throw ArgumentError("train: dataset and model have different L");
  }
  const auto target = smoothed_target(dataset, options.smoothing);

  TrainingTrace trace;
  trace.cycles.reserve(static_cast<std::size_t>(m_max));
  trace.chosen_unitaries.reserve(static_cast<std::size_t>(m_max));
  StateVector current = initial_state(params.L);

  std::vector<DisorderRealization> candidates(D);
  std::vector<StateVector> next(D);
  std::vector<double> costs(D);
  std::vector<double> entropies(D);
  for (int m = 1; m <= m_max; ++m) {
    for (auto& c : candidates) c = sample_disorder(params, rng);
    const std::uint64_t shot_seed = options.shots > 0 ? (std::uint64_t{rng()} << 32) | rng() : 0;

    parallel_for(D, options.threads, [&](std::size_t d) {
      const CyclePropagator prop(params, candidates[d], envelope, options.integrator);
      next[d] = prop.apply(current);
      auto p = output_probs(next[d]);
      entropies[d] = shannon_entropy(p);
      if (options.shots > 0) {
        auto shot_rng = realization_rng(shot_seed, d, StreamTag::kShots);
        p = shot_estimate(p, options.shots, shot_rng);
      }
      costs[d] = training_cost(p, target);
    });

    std::size_t best = 0;
    for (std::size_t d = 1; d < D; ++d) {
      if (costs[d] < costs[best]) best = d;
    }
    CycleRecord rec;
    rec.chosen = best;
    rec.chosen_cost = costs[best];
    rec.chosen_entropy = entropies[best];
    if (options.record_candidates) {
      rec.costs = costs;
      rec.entropies = entropies;
    }
    trace.cycles.push_back(std::move(rec));
    trace.chosen_unitaries.push_back(candidates[best]);
    current = std::move(next[best]);
  }
  trace.final_state = std::move(current);
  return trace;
}

std::vector<double> memory_divergence(const ModelParams& params, Envelope envelope,
                                      const MemoryOptions& options, Philox4x32& rng,
                                      const std::function<void(int, const StateVector&)>& observer) {
  params.validate();
  options.integrator.validate();
  if (options.m_ref_begin < 0 || options.m_ref_end < options.m_ref_begin) {
    throw ArgumentError("memory_divergence: invalid reference window");
  }
  if (options.dm_max < 0) throw ArgumentError("memory_divergence: dm_max must be >= 0");
  if (!(options.smoothing > 0.0)) throw ArgumentError("memory_divergence: smoothing must be positive");

  const int first = options.m_ref_begin;
  const int last = options.m_ref_end + options.dm_max;
  std::vector<std::vector<double>> probs;  // probs[m - first] for m in [first, last]
  probs.reserve(static_cast<std::size_t>(last - first + 1));

  StateVector state = initial_state(params.L);
  if (first == 0) probs.push_back(output_probs(state));
  if (observer) observer(0, state);
  for (int m = 1; m <= last; ++m) {
    const auto disorder = sample_disorder(params, rng);
    state = CyclePropagator(params, disorder, envelope, options.integrator).apply(state);
    if (observer) observer(m, state);
    if (m >= first) probs.push_back(output_probs(state));
  }

  const double norm = 1.0 + options.smoothing * static_cast<double>(params.dimension());
  std::vector<double> curve(static_cast<std::size_t>(options.dm_max) + 1, 0.0);
  std::vector<double> ref(params.dimension());
  const int window = options.m_ref_end - options.m_ref_begin + 1;
  for (int m = options.m_ref_begin; m <= options.m_ref_end; ++m) {
    const auto& pm = probs[static_cast<std::size_t>(m - first)];
    for (std::size_t k = 0; k < ref.size(); ++k) ref[k] = (pm[k] + options.smoothing) / norm;
    for (int dm = 0; dm <= options.dm_max; ++dm) {
      curve[static_cast<std::size_t>(dm)] += kl_discrete(probs[static_cast<std::size_t>(m + dm - first)], ref);
    }
  }
  for (auto& v : curve) v /= window;
  return curve;
}

}  // namespace qchain
