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
 * Distributional tools: the Porter-Thomas law for scaled probabilities
 * x = N p, binned KL estimates against it, level-spacing ratios of circular
 * spectra with their COE / Poisson / GOE reference densities, entropies and
 * Haar-random states.
 *
 * All logarithms are natural; divergences and entropies are in nats.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "qchain/evolution.hpp"
#include "qchain/spin_core.hpp"

namespace qchain {

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Basis-state probabilities pooled over D realizations of an N-dimensional
/// state, stored realization-major.
struct ProbSampleSet {
  std::vector<double> values;
  std::size_t N = 0;
  std::size_t D = 0;

  /// Appends one realization's probabilities; sets N on first use.
  void add_realization(std::span<const double> probs);
  /// Throws ArgumentError unless every value is in [0, 1], values.size() == N*D
  /// and each realization sums to 1 within 1e-8.
  void validate() const;
};

/// Uniform bins on x = N p in [0, x_max].
struct Binning {
  int bins = 48;
  double x_max = 12.0;

  [[nodiscard]] double width() const { return x_max / bins; }
  /// Throws ConfigError unless bins >= 1 and x_max > 0.
  void validate() const;
};

struct BinnedDistribution {
  std::vector<double> edges;   ///< bins + 1 ascending values of x
  std::vector<double> masses;  ///< fraction of all samples falling in each bin
};

/// Counts of scaled probabilities per bin. Histograms with equal binning
/// merge by addition, so realizations can be accumulated independently.
class PtHistogram {
 public:
  explicit PtHistogram(Binning binning = {});

  /// Adds every p of one normalized state, scaled by N = probs.size().
  void add_probabilities(std::span<const double> probs);
  void add_scaled(double x);
  void merge(const PtHistogram& other);

  [[nodiscard]] const Binning& binning() const { return binning_; }
  [[nodiscard]] std::span<const double> counts() const { return counts_; }
  [[nodiscard]] double outside() const { return outside_; }
  [[nodiscard]] double total() const { return total_; }
  [[nodiscard]] BinnedDistribution distribution() const;

  /// Flat form {counts..., outside}, for checkpoints and cross-thread reduction.
  [[nodiscard]] std::vector<double> to_vector() const;
  static PtHistogram from_vector(const Binning& binning, std::span<const double> flat);

 private:
  Binning binning_;
  std::vector<double> counts_;
  double outside_ = 0.0;
  double total_ = 0.0;
};

struct KlEstimate {
  double value = 0.0;
  /// Fewer than 10 samples per bin on average.
  bool low_statistics = false;
};

/// Porter-Thomas density of x = N p: exp(-x). Throws ArgumentError for x < 0.
[[nodiscard]] double pt_density(double x);

/// sum_i P_i log(P_i / Q_i); zero-P terms contribute 0. Throws ArgumentError
/// on length mismatch or if P does not sum to 1 within 1e-6, and
/// DivergenceError if some P_i > 0 has Q_i = 0.
[[nodiscard]] double kl_discrete(std::span<const double> P, std::span<const double> Q);

/// KL between the in-window histogram and Porter-Thomas bin masses, both
/// renormalized to [0, x_max].
[[nodiscard]] KlEstimate kl_to_pt(const PtHistogram& histogram);
[[nodiscard]] KlEstimate kl_to_pt(const ProbSampleSet& samples, const Binning& binning = {});

/// Porter-Thomas bin masses of `binning`, renormalized to the window.
[[nodiscard]] std::vector<double> pt_bin_masses(const Binning& binning);

struct SpacingRatios {
  std::vector<double> ratios;

  [[nodiscard]] double mean() const;
};

/// r_n = min(d_n, d_n+1) / max(d_n, d_n+1) over the N circular gaps of a phase
/// spectrum (the wrap-around gap 2 pi - theta_N + theta_1 included). Two
/// zero gaps give r = 1. Throws ArgumentError for fewer than 3 phases.
[[nodiscard]] SpacingRatios spacing_ratios(const FloquetSpectrum& spectrum);

enum class Ensemble { kCOE, kPOI, kGOE };

/// Reference density of r on [0, 1]. Throws ArgumentError outside [0, 1].
[[nodiscard]] double ensemble_density(Ensemble kind, double r);

/// -sum p log p. Throws ArgumentError if p does not sum to 1 within 1e-6.
[[nodiscard]] double shannon_entropy(std::span<const double> p);

/// Mean entropy of Haar-random states of L sites: L ln 2 - 1 + gamma.
[[nodiscard]] double pt_entropy(int L);

/// Normalized vector of i.i.d. standard complex Gaussians: Haar-uniform on
/// the unit sphere. N must be a power of two >= 2.
template <class Urbg>
StateVector haar_state(std::size_t N, Urbg& rng) {
  if (N < 2) throw ArgumentError("haar_state: N must be >= 2");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> amps(N);
  double norm2 = 0.0;
  for (auto& c : amps) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    c = {re, im};
    norm2 += re * re + im * im;
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& c : amps) c *= scale;
  return StateVector(std::move(amps));
}

/// Mean and standard error of a sample (error 0 for fewer than 2 values).
struct MeanError {
  double mean = 0.0;
  double sem = 0.0;  ///< standard error of the mean
};
[[nodiscard]] MeanError mean_and_error(std::span<const double> values);

}  // namespace qchain
