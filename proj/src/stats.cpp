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

#include "qchain/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace qchain {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Small-r expansion of the COE density; the closed form cancels two 1/r terms.
double coe_series(double r) {
  const double pi2 = kPi * kPi;
  const double pi4 = pi2 * pi2;
  const double c1 = 8.0 * pi2 / 9.0 - 4.0 / 3.0;
  const double c2 = 2.0 - 4.0 * pi2 / 3.0;
  const double c3 = -16.0 * pi4 / 45.0 - 8.0 / 3.0 + 16.0 * pi2 / 9.0;
  const double c4 = 4.0 * pi4 / 3.0 - 20.0 * pi2 / 9.0 + 10.0 / 3.0;
  return r * (c1 + r * (c2 + r * (c3 + r * c4)));
}

double coe_density(double r) {
  if (r < 1e-4) return coe_series(r);
  const double rp1 = r + 1.0;
  const double a = kTwoPi * r / rp1;
  const double b = kTwoPi / rp1;
  return (2.0 / 3.0) * (std::sin(a) / (kTwoPi * r * r) + 1.0 / (rp1 * rp1) +
                        std::sin(b) / kTwoPi - std::cos(b) / rp1 - std::cos(a) / (r * rp1));
}

}  // namespace

void ProbSampleSet::add_realization(std::span<const double> probs) {
  if (N == 0) N = probs.size();
  if (probs.size() != N) throw ArgumentError("ProbSampleSet: realization has wrong dimension");
  values.insert(values.end(), probs.begin(), probs.end());
  ++D;
}

void ProbSampleSet::validate() const {
  if (N == 0 || values.size() != N * D) {
    throw ArgumentError("ProbSampleSet: values.size() must equal N * D");
  }
  for (std::size_t d = 0; d < D; ++d) {
    const std::span<const double> group(values.data() + d * N, N);
    for (double p : group) {
      if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("ProbSampleSet: probability outside [0, 1]");
    }
    if (std::abs(sum_of(group) - 1.0) > 1e-8) {
      throw ArgumentError("ProbSampleSet: realization " + std::to_string(d) + " does not sum to 1");
    }
  }
}

void Binning::validate() const {
  if (bins < 1) throw ConfigError("Binning: bins must be >= 1");
  if (!(x_max > 0.0)) throw ConfigError("Binning: x_max must be positive");
}

PtHistogram::PtHistogram(Binning binning)
    : binning_(binning), counts_(static_cast<std::size_t>(std::max(binning.bins, 0)), 0.0) {
  binning_.validate();
}

void PtHistogram::add_scaled(double x) {
  total_ += 1.0;
  if (!(x >= 0.0) || x > binning_.x_max) {
    outside_ += 1.0;
    return;
  }
  auto k = static_cast<std::size_t>(x / binning_.width());
  k = std::min(k, counts_.size() - 1);  // x == x_max lands in the last bin
  counts_[k] += 1.0;
}

void PtHistogram::add_probabilities(std::span<const double> probs) {
  const auto n = static_cast<double>(probs.size());
  for (double p : probs) add_scaled(n * p);
}

void PtHistogram::merge(const PtHistogram& other) {
  if (other.binning_.bins != binning_.bins || other.binning_.x_max != binning_.x_max) {
    throw ArgumentError("PtHistogram::merge: binning mismatch");
  }
  for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
  outside_ += other.outside_;
  total_ += other.total_;
}

BinnedDistribution PtHistogram::distribution() const {
  BinnedDistribution out;
  out.edges.resize(counts_.size() + 1);
  for (std::size_t k = 0; k <= counts_.size(); ++k) {
    out.edges[k] = binning_.width() * static_cast<double>(k);
  }
  out.edges.back() = binning_.x_max;
  out.masses.resize(counts_.size(), 0.0);
  if (total_ > 0.0) {
    for (std::size_t k = 0; k < counts_.size(); ++k) out.masses[k] = counts_[k] / total_;
  }
  return out;
}

std::vector<double> PtHistogram::to_vector() const {
  std::vector<double> flat(counts_);
  flat.push_back(outside_);
  return flat;
}

PtHistogram PtHistogram::from_vector(const Binning& binning, std::span<const double> flat) {
  PtHistogram h(binning);
  if (flat.size() != h.counts_.size() + 1) {
    throw ArgumentError("PtHistogram::from_vector: expected bins + 1 values");
  }
  std::copy(flat.begin(), flat.end() - 1, h.counts_.begin());
  h.outside_ = flat.back();
  h.total_ = sum_of(flat);
  return h;
}

double pt_density(double x) {
  if (!(x >= 0.0)) throw ArgumentError("pt_density: x must be non-negative");
  return std::exp(-x);
}

double kl_discrete(std::span<const double> P, std::span<const double> Q) {
  if (P.size() != Q.size()) throw ArgumentError("kl_discrete: length mismatch");
  if (std::abs(sum_of(P) - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "kl_discrete: P sums to " << sum_of(P) << ", expected 1";
    throw ArgumentError(msg.str());
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (P[i] <= 0.0) continue;
    if (!(Q[i] > 0.0)) {
      throw DivergenceError("kl_discrete: P > 0 where Q = 0 at index " + std::to_string(i));
    }
    kl += P[i] * std::log(P[i] / Q[i]);
  }
  return std::max(kl, 0.0);
}

std::vector<double> pt_bin_masses(const Binning& binning) {
  binning.validate();
  std::vector<double> q(static_cast<std::size_t>(binning.bins));
  const double window = -std::expm1(-binning.x_max);
  for (int k = 0; k < binning.bins; ++k) {
    const double lo = binning.width() * k;
    const double hi = k + 1 == binning.bins ? binning.x_max : binning.width() * (k + 1);
    q[static_cast<std::size_t>(k)] = (std::exp(-lo) - std::exp(-hi)) / window;
  }
  return q;
}

KlEstimate kl_to_pt(const PtHistogram& histogram) {
  const auto counts = histogram.counts();
  const double inside = sum_of(counts);
  if (!(inside > 0.0)) throw ArgumentError("kl_to_pt: no samples inside the binning window");
  std::vector<double> p(counts.begin(), counts.end());
  for (auto& v : p) v /= inside;
  KlEstimate est;
  est.value = kl_discrete(p, pt_bin_masses(histogram.binning()));
  est.low_statistics = histogram.total() < 10.0 * histogram.binning().bins;
  return est;
}

KlEstimate kl_to_pt(const ProbSampleSet& samples, const Binning& binning) {
  if (samples.values.empty()) throw ArgumentError("kl_to_pt: empty sample set");
  if (samples.N == 0 || samples.values.size() % samples.N != 0) {
    throw ArgumentError("kl_to_pt: sample count is not a multiple of N");
  }
  PtHistogram h(binning);
  const auto n = static_cast<double>(samples.N);
  for (double p : samples.values) h.add_scaled(n * p);
  return kl_to_pt(h);
}

double SpacingRatios::mean() const {
  if (ratios.empty()) return 0.0;
  return sum_of(ratios) / static_cast<double>(ratios.size());
}

SpacingRatios spacing_ratios(const FloquetSpectrum& spectrum) {
  const auto& th = spectrum.phases;
  const std::size_t n = th.size();
  if (n < 3) throw ArgumentError("spacing_ratios: need at least 3 phases");
  if (!std::is_sorted(th.begin(), th.end())) throw ArgumentError("spacing_ratios: phases not sorted");
  std::vector<double> gaps(n);
  for (std::size_t i = 0; i + 1 < n; ++i) gaps[i] = th[i + 1] - th[i];
  gaps[n - 1] = kTwoPi - th[n - 1] + th[0];

  SpacingRatios out;
  out.ratios.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = gaps[i];
    const double b = gaps[(i + 1) % n];
    const double hi = std::max(a, b);
    out.ratios[i] = hi > 0.0 ? std::min(a, b) / hi : 1.0;
  }
  return out;
}

double ensemble_density(Ensemble kind, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw ArgumentError("ensemble_density: r must lie in [0, 1]");
  switch (kind) {
    case Ensemble::kCOE:
      return coe_density(r);
    case Ensemble::kPOI:
      return 2.0 / ((1.0 + r) * (1.0 + r));
    case Ensemble::kGOE:
      return 27.0 / 4.0 * (r + r * r) / std::pow(1.0 + r + r * r, 2.5);
  }
  return 0.0;
}

double shannon_entropy(std::span<const double> p) {
  if (std::abs(sum_of(p) - 1.0) > 1e-6) throw ArgumentError("shannon_entropy: p does not sum to 1");
  double s = 0.0;
  for (double v : p) {
    if (v > 0.0) s -= v * std::log(v);
  }
  return std::max(s, 0.0);
}

double pt_entropy(int L) {
  if (L < 1) throw ArgumentError("pt_entropy: L must be >= 1");
  return L * std::numbers::ln2 - 1.0 + kEulerGamma;
}

MeanError mean_and_error(std::span<const double> values) {
  MeanError out;
  const auto n = values.size();
  if (n == 0) return out;
  out.mean = sum_of(values) / static_cast<double>(n);
  if (n < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.sem = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  return out;
}

}  // namespace qchain
