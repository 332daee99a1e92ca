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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "qchain/errors.hpp"
#include "qchain/stats.hpp"

namespace qchain {
namespace {

ModelParams chain(int L, double W = 5.0) {
  ModelParams p;
  p.L = L;
  p.W = W;
  return p;
}

IntegratorConfig coarse() {
  IntegratorConfig c;
  c.substeps_per_cycle = 64;
  return c;
}

Dataset dataset_for(int L, std::size_t n, std::uint64_t seed) {
  auto mrng = realization_rng(seed, 0, StreamTag::kModel);
  auto srng = realization_rng(seed, 0, StreamTag::kSamples);
  return sample_dataset(random_boltzmann_model(L, 1.0, 1.0, mrng), n, srng);
}

TEST(BoltzmannModel, PairIndexAndCoupling) {
  BoltzmannModel m{{0, 0, 0, 0}, {1, 2, 3, 4, 5, 6}, 1.0};
  EXPECT_EQ(m.coupling(1, 2), 1);
  EXPECT_EQ(m.coupling(1, 4), 3);
  EXPECT_EQ(m.coupling(2, 3), 4);
  EXPECT_EQ(m.coupling(3, 4), 6);
  EXPECT_THROW((void)m.coupling(2, 2), ArgumentError);
  EXPECT_THROW((void)m.coupling(3, 5), ArgumentError);
}

TEST(BoltzmannModel, Validation) {
  EXPECT_THROW((BoltzmannModel{{0.0, 0.0}, {}, 1.0}).validate(), ArgumentError);
  EXPECT_THROW((BoltzmannModel{{0.0}, {}, 0.0}).validate(), ArgumentError);
  EXPECT_THROW((BoltzmannModel{{}, {}, 1.0}).validate(), ArgumentError);
}

TEST(BoltzmannModel, RandomCoefficientsInRange) {
  std::mt19937_64 rng(1);
  const auto m = random_boltzmann_model(6, 2.0, 1.0, rng);
  ASSERT_EQ(m.a.size(), 6u);
  ASSERT_EQ(m.b.size(), 15u);
  for (double v : m.a) EXPECT_LE(std::abs(v), 1.0);
  for (double v : m.b) EXPECT_LE(std::abs(v), 1.0);
}

TEST(BoltzmannEnergy, Example) {
  const BoltzmannModel m{{0.1, -0.2}, {0.3}, 1.0};
  EXPECT_NEAR(boltzmann_energy(std::vector<int>{1, 1}, m), 0.2, 1e-15);
  EXPECT_NEAR(boltzmann_energy(std::vector<int>{-1, 1}, m), -0.6, 1e-15);
  // Index 1 flips site 1.
  EXPECT_NEAR(boltzmann_energy(BasisIndex{1}, m), -0.6, 1e-15);
  EXPECT_THROW((void)boltzmann_energy(std::vector<int>{1}, m), ArgumentError);
}

TEST(ExactBoltzmann, HandComputedWeights) {
  const BoltzmannModel m{{0.1, -0.2}, {0.3}, 0.7};
  const auto q = exact_boltzmann(m);
  // E over indices 0..3 (site 1 is the low bit).
  const double E[4] = {0.2, -0.6, 0.0, 0.4};
  double Z = 0.0;
  for (double e : E) Z += std::exp(-e / 0.7);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(q[static_cast<std::size_t>(k)], std::exp(-E[k] / 0.7) / Z, 1e-12);
}

TEST(ExactBoltzmann, HighTemperatureIsUniform) {
  std::mt19937_64 rng(2);
  const auto m = random_boltzmann_model(5, 1.0, 1e9, rng);
  for (double v : exact_boltzmann(m)) EXPECT_NEAR(v, 1.0 / 32.0, 1e-9);
}

TEST(ExactBoltzmann, EnumerationLimit) {
  BoltzmannModel m;
  m.a.assign(21, 0.0);
  m.b.assign(21 * 20 / 2, 0.0);
  EXPECT_THROW((void)exact_boltzmann(m), ResourceError);
}

TEST(SampleDataset, EmpiricalHistogramConverges) {
  std::mt19937_64 rng(3);
  const auto m = random_boltzmann_model(5, 1.0, 1.0, rng);
  const auto q = exact_boltzmann(m);
  double prev = 1e300;
  for (std::size_t n : {1000, 4000, 16000, 64000, 256000}) {
    const auto ds = sample_dataset(m, n, rng);
    EXPECT_EQ(ds.samples.size(), n);
    EXPECT_NEAR(std::accumulate(ds.empirical_hist.begin(), ds.empirical_hist.end(), 0.0), 1.0, 1e-12);
    const double kl = kl_discrete(ds.empirical_hist, q);
    EXPECT_LT(kl, prev) << n;
    prev = kl;
  }
}

TEST(SampleDataset, DeterministicAndSpinsMatchIndices) {
  const auto a = dataset_for(6, 500, 9);
  const auto b = dataset_for(6, 500, 9);
  EXPECT_EQ(a.samples, b.samples);
  const auto z = a.spins(3);
  for (int i = 1; i <= 6; ++i) EXPECT_EQ(z[static_cast<std::size_t>(i - 1)], basis_spin(a.samples[3], i, 6));
  EXPECT_THROW((void)a.spins(500), ArgumentError);
}

TEST(SmoothedTarget, DefaultIsHalfCount) {
  Dataset ds;
  ds.L = 1;
  ds.samples = {0, 0, 0, 0};
  ds.empirical_hist = {1.0, 0.0};
  const auto q = smoothed_target(ds);
  const double eps = 1.0 / 8.0;
  EXPECT_NEAR(q[0], (1.0 + eps) / (1.0 + 2 * eps), 1e-15);
  EXPECT_NEAR(q[1], eps / (1.0 + 2 * eps), 1e-15);
}

TEST(TrainingCost, InitialStateClosedForm) {
  Dataset ds;
  ds.L = 3;
  ds.samples.assign(10, 5);
  ds.empirical_hist.assign(8, 0.0);
  ds.empirical_hist[5] = 1.0;
  const double eps = 0.05;
  // The all-up state puts its mass on index 0, where the target has only eps.
  EXPECT_NEAR(training_cost(initial_state(3), ds, eps), -std::log(eps / (1.0 + 8 * eps)), 1e-13);
  EXPECT_THROW((void)training_cost(initial_state(2), ds, eps), ArgumentError);
}

TEST(TrainingCost, ConvexInTheModelDistribution) {
  std::mt19937_64 rng(4);
  const auto ds = dataset_for(4, 200, 4);
  const auto q = smoothed_target(ds);
  std::exponential_distribution<double> e;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> p1(16), p2(16), mix(16);
    for (auto& v : p1) v = e(rng);
    for (auto& v : p2) v = e(rng);
    const double s1 = std::accumulate(p1.begin(), p1.end(), 0.0);
    const double s2 = std::accumulate(p2.begin(), p2.end(), 0.0);
    for (auto& v : p1) v /= s1;
    for (auto& v : p2) v /= s2;
    const double lam = 0.3;
    for (std::size_t k = 0; k < 16; ++k) mix[k] = lam * p1[k] + (1 - lam) * p2[k];
    EXPECT_LE(training_cost(mix, q), lam * training_cost(p1, q) + (1 - lam) * training_cost(p2, q) + 1e-12);
  }
}

TEST(Train, SingleCandidateIsUnconditionedEvolution) {
  const auto p = chain(4);
  const auto ds = dataset_for(4, 300, 5);
  TrainingOptions opt;
  opt.integrator = coarse();
  auto rng = realization_rng(11, 0, StreamTag::kCandidates);
  const auto trace = train(p, Envelope::kSinusoidal, ds, 1, 6, rng, opt);

  auto replay = realization_rng(11, 0, StreamTag::kCandidates);
  std::vector<DisorderRealization> seq;
  for (int m = 0; m < 6; ++m) seq.push_back(sample_disorder(p, replay));
  const auto states = evolve_quenched(initial_state(4), p, seq, Envelope::kSinusoidal, coarse());
  for (std::size_t k = 0; k < 16; ++k) EXPECT_EQ(trace.final_state[k], states.back()[k]);
  for (const auto& c : trace.cycles) EXPECT_EQ(c.chosen, 0u);
}

TEST(Train, ChoosesTheCheapestCandidate) {
  const auto p = chain(5);
  const auto ds = dataset_for(5, 500, 6);
  TrainingOptions opt;
  opt.integrator = coarse();
  opt.threads = 2;
  auto rng = realization_rng(12, 0, StreamTag::kCandidates);
  const auto trace = train(p, Envelope::kSinusoidal, ds, 20, 15, rng, opt);
  ASSERT_EQ(trace.cycles.size(), 15u);
  ASSERT_EQ(trace.chosen_unitaries.size(), 15u);
  for (const auto& c : trace.cycles) {
    ASSERT_EQ(c.costs.size(), 20u);
    for (double v : c.costs) EXPECT_LE(c.chosen_cost, v);
    EXPECT_EQ(c.costs[c.chosen], c.chosen_cost);
    EXPECT_EQ(c.entropies[c.chosen], c.chosen_entropy);
  }
  EXPECT_NEAR(trace.cycles.back().chosen_cost, training_cost(trace.final_state, ds), 1e-12);
  // Greedy selection lowers the cost well below that of the all-up start.
  EXPECT_LT(trace.cycles.back().chosen_cost, training_cost(initial_state(5), ds));
}

TEST(Train, ThreadCountDoesNotChangeResult) {
  const auto p = chain(4);
  const auto ds = dataset_for(4, 300, 7);
  TrainingOptions opt;
  opt.integrator = coarse();
  auto a_rng = realization_rng(13, 0, StreamTag::kCandidates);
  auto b_rng = a_rng;
  const auto a = train(p, Envelope::kSinusoidal, ds, 8, 5, a_rng, opt);
  opt.threads = 3;
  const auto b = train(p, Envelope::kSinusoidal, ds, 8, 5, b_rng, opt);
  for (std::size_t m = 0; m < 5; ++m) EXPECT_EQ(a.cycles[m].costs, b.cycles[m].costs);
}

TEST(Train, TiesGoToTheFirstCandidate) {
  // Zero disorder width makes every candidate the same realization.
  const auto p = chain(3, 0.0);
  const auto ds = dataset_for(3, 100, 8);
  TrainingOptions opt;
  opt.integrator = coarse();
  opt.record_candidates = false;
  auto rng = realization_rng(14, 0, StreamTag::kCandidates);
  const auto trace = train(p, Envelope::kSinusoidal, ds, 10, 3, rng, opt);
  for (const auto& c : trace.cycles) {
    EXPECT_EQ(c.chosen, 0u);
    EXPECT_TRUE(c.costs.empty());
  }
}

TEST(Train, ShotNoiseEstimatesStayClose) {
  const auto p = chain(3);
  const auto ds = dataset_for(3, 400, 9);
  TrainingOptions opt;
  opt.integrator = coarse();
  opt.shots = 200000;
  auto rng = realization_rng(15, 0, StreamTag::kCandidates);
  const auto trace = train(p, Envelope::kSinusoidal, ds, 1, 2, rng, opt);
  EXPECT_NEAR(trace.cycles.back().chosen_cost, training_cost(trace.final_state, ds), 0.01);
}

TEST(Train, RejectsBadArguments) {
  const auto p = chain(3);
  const auto ds = dataset_for(3, 10, 10);
  auto rng = realization_rng(1, 0, StreamTag::kCandidates);
  EXPECT_THROW((void)train(p, Envelope::kSinusoidal, ds, 0, 1, rng), ArgumentError);
  EXPECT_THROW((void)train(p, Envelope::kSinusoidal, ds, 1, -1, rng), ArgumentError);
  EXPECT_THROW((void)train(chain(4), Envelope::kSinusoidal, ds, 1, 1, rng), ArgumentError);
  const auto none = train(p, Envelope::kSinusoidal, ds, 3, 0, rng);
  EXPECT_TRUE(none.cycles.empty());
  EXPECT_EQ(none.final_state[0], Complex(1.0));
}

TEST(MemoryDivergence, ShapeAndZeroLag) {
  MemoryOptions opt;
  opt.m_ref_begin = 4;
  opt.m_ref_end = 6;
  opt.dm_max = 5;
  opt.integrator = coarse();
  auto rng = realization_rng(16, 0, StreamTag::kDisorder);
  int observed = 0;
  const auto curve = memory_divergence(chain(4, 20.0), Envelope::kSinusoidal, opt, rng,
                                       [&](int m, const StateVector& s) {
                                         EXPECT_EQ(m, observed++);
                                         EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
                                       });
  EXPECT_EQ(observed, 12);
  ASSERT_EQ(curve.size(), 6u);
  // Only the smoothing separates the reference from itself at zero lag.
  EXPECT_LT(curve[0], 1e-9);
  for (std::size_t dm = 1; dm < curve.size(); ++dm) EXPECT_GT(curve[dm], curve[0]);
}

TEST(MemoryDivergence, RejectsBadWindows) {
  auto rng = realization_rng(1, 0, StreamTag::kDisorder);
  MemoryOptions opt;
  opt.m_ref_end = opt.m_ref_begin - 1;
  EXPECT_THROW((void)memory_divergence(chain(3), Envelope::kSinusoidal, opt, rng), ArgumentError);
  opt = {};
  opt.dm_max = -1;
  EXPECT_THROW((void)memory_divergence(chain(3), Envelope::kSinusoidal, opt, rng), ArgumentError);
  opt = {};
  opt.smoothing = 0.0;
  EXPECT_THROW((void)memory_divergence(chain(3), Envelope::kSinusoidal, opt, rng), ArgumentError);
}

}  // namespace
}  // namespace qchain
