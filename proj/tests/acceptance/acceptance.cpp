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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.
//
//   acceptance [--out DIR] [criterion ...]
//
// With no criterion numbers all eleven run. Sweeps write their tables (and
// resumable checkpoints) under DIR, default ./acceptance_out.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/oracles.hpp"
#include "qchain/circuit.hpp"
#include "qchain/evolution.hpp"
#include "qchain/genmodel.hpp"
#include "qchain/harness.hpp"
#include "qchain/magnus.hpp"
#include "qchain/rng.hpp"
#include "qchain/stats.hpp"

namespace {

using namespace qchain;

// ---------------------------------------------------------------------------
// Pinned settings and tolerances

constexpr std::uint64_t kSeed = 20260101;

// Level statistics (criteria 1, 2, 6).
constexpr double kCoeMean = 0.527;
constexpr double kPoiMean = 0.386;
constexpr double kRatioTol = 0.02;
constexpr double kChaoticKlMax = 0.1;
constexpr double kSaturationTol = 0.20;

// Porter-Thomas convergence (criteria 3, 4).
constexpr std::size_t kSupremacyRealizations = 200;
constexpr int kSupremacyCycles = 30;
constexpr double kLongTimeFactor = 2.0;

// Magnus sweep (criterion 5).
constexpr std::size_t kMagnusRealizations = 50;

// Training (criteria 7, 11).
constexpr std::size_t kTrainDatasets = 10;
constexpr int kTrainCycles = 100;
constexpr double kTrainRatio = 0.5;
constexpr double kTrainSpread = 0.20;

// Memory (criterion 8).
constexpr std::size_t kMemoryRealizations = 100;
constexpr double kMemoryGrowth = 0.5;
constexpr double kMemoryFlat = 0.20;

// Haar ensemble (criterion 9).
constexpr int kHaarStates = 20000;
constexpr std::size_t kHaarDim = 32;
constexpr double kHaarSigmas = 5.0;
constexpr double kHaarKlMax = 0.005;

// Oracles (criterion 10).
constexpr double kPropagationFidelity = 1.0 - 1e-7;
constexpr double kMagnusEntrywise = 1e-9;
constexpr double kGibbsTol = 1e-12;
constexpr int kPropertyCases = 1000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string out_root = "acceptance_out";

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ExperimentConfig base(Experiment e, const std::string& dir) {
  auto c = default_config(e);
  c.seed = kSeed;
  c.out = out_root + "/" + dir;
  c.threads = 0;
  return c;
}

RunOptions progress_to_stderr() {
  RunOptions o;
  o.progress = [](const std::string& stage, std::size_t done, std::size_t total) {
    if (done == total || done % 10 == 0) {
      std::fprintf(stderr, "  %s %zu/%zu\n", stage.c_str(), done, total);
    }
  };
  return o;
}

template <class Key>
bool strictly_increasing(const std::vector<Key>& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k] > v[k - 1])) return false;
  }
  return true;
}

std::string join(const std::vector<double>& v, const char* f = "%.4g") {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + fmt(f, v[k]);
  return "[" + s + "]";
}

// ---------------------------------------------------------------------------
// Shared sweeps, computed on first use

const ExperimentResult& levels() {
  static std::optional<ExperimentResult> r;
  if (!r) {
    auto c = base(Experiment::kMblProbe, "mbl-probe");
    c.L = {9};
    c.W = {1.5, 5.0, 10.0, 20.0};
    c.omega = {8.0};
    c.D = 100;
    c.m = 10;
    r = run_experiment(c, progress_to_stderr());
  }
  return *r;
}

const ExperimentResult& supremacy() {
  static std::optional<ExperimentResult> r;
  if (!r) {
    auto c = base(Experiment::kSupremacy, "supremacy");
    c.L = {7, 9, 11};
    c.W = {5.0};
    c.omega = {8.0};
    c.D = kSupremacyRealizations;
    c.m = kSupremacyCycles;
    r = run_experiment(c, progress_to_stderr());
  }
  return *r;
}

const ExperimentResult& training(Envelope env) {
  static std::map<Envelope, ExperimentResult> cache;
  auto it = cache.find(env);
  if (it == cache.end()) {
    auto c = base(Experiment::kTrain, std::string("train-") + std::string(to_string(env)));
    c.L = {9};
    c.W = env == Envelope::kSinusoidal ? std::vector<double>{2.0, 15.0, 20.0, 25.0}
                                       : std::vector<double>{2.0, 20.0};
    c.omega = {8.0};
    c.envelope = env;
    c.D = 140;
    c.m = kTrainCycles;
    c.datasets = kTrainDatasets;
    c.samples = 3000;
    c.temperature = 1.0;
    c.scatter_datasets = 0;
    it = cache.emplace(env, run_experiment(c, progress_to_stderr())).first;
  }
  return it->second;
}

double final_cost(Envelope env, double W) {
  return training(env).table("train_final").value("cost", {{"L", 9}, {"W", W}, {"omega", 8}});
}

// ---------------------------------------------------------------------------
// Criteria

double mean_ratio(double W) {
  return levels().table("mbl_summary").value("r_mean", {{"L", 9}, {"W", W}, {"omega", 8}});
}

Outcome coe_regime() {
  const double r = mean_ratio(1.5);
  return {std::abs(r - kCoeMean) <= kRatioTol, "<r>(W=1.5) = " + fmt("%.4f", r) + ", want 0.527 +- 0.02"};
}

Outcome poisson_regime() {
  const double r = mean_ratio(20.0);
  return {std::abs(r - kPoiMean) <= kRatioTol, "<r>(W=20) = " + fmt("%.4f", r) + ", want 0.386 +- 0.02"};
}

Outcome pt_convergence() {
  const auto& t = supremacy().table("supremacy_analog");
  auto kl = [&](int L, int m) { return t.value("kl", {{"L", L}, {"W", 5}, {"omega", 8}, {"m", m}}); };
  bool decays = true;
  std::string detail;
  for (int L : {7, 9, 11}) {
    const std::vector<double> seq{kl(L, 10), kl(L, 3), kl(L, 1)};
    decays = decays && strictly_increasing(seq);
    detail += "L=" + std::to_string(L) + " KL(m=1,3,10) " + join({seq[2], seq[1], seq[0]}) + "; ";
  }
  const std::vector<double> at10{kl(11, 10), kl(9, 10), kl(7, 10)};
  const bool in_l = strictly_increasing(at10);
  detail += "KL(m=10) decreasing in L: " + std::string(in_l ? "yes" : "no");
  return {decays && in_l, detail};
}

Outcome analog_vs_digital() {
  const auto& r = supremacy();
  const auto& a = r.table("supremacy_analog");
  const auto& d = r.table("supremacy_digital");
  auto ak = [&](int m) { return a.value("kl", {{"L", 9}, {"W", 5}, {"omega", 8}, {"m", m}}); };
  auto dk = [&](int m) { return d.value("kl", {{"L", 9}, {"m", m}}); };
  const bool early = ak(3) < dk(3) && ak(5) < dk(5);
  const double la = ak(kSupremacyCycles);
  const double ld = dk(kSupremacyCycles);
  const double ratio = std::max(la, ld) / std::min(la, ld);
  const bool late = ratio <= kLongTimeFactor;
  return {early && late, "m=3 analog " + fmt("%.4g", ak(3)) + " vs digital " + fmt("%.4g", dk(3)) +
                             "; m=5 " + fmt("%.4g", ak(5)) + " vs " + fmt("%.4g", dk(5)) + "; m=30 " +
                             fmt("%.4g", la) + " vs " + fmt("%.4g", ld) + " (ratio " + fmt("%.3g", ratio) +
                             ")"};
}

Outcome magnus_crossover() {
  auto c = base(Experiment::kMagnus, "magnus");
  c.L = {9};
  c.W = {2.0};
  c.omega = {2.0, 4.0, 8.0, 16.0, 32.0};
  c.D = kMagnusRealizations;
  c.m = 10;
  const auto r = run_experiment(c, progress_to_stderr());
  const auto& fid = r.table("magnus_fidelity");
  const auto& kl = r.table("magnus_kl");
  std::vector<double> f2, f0, k;
  for (double w : c.omega) {
    f0.push_back(fid.value("fidelity", {{"omega", w}, {"order", 0}}));
    f2.push_back(fid.value("fidelity", {{"omega", w}, {"order", 2}}));
    k.push_back(kl.value("kl", {{"omega", w}}));
  }
  const bool ok = strictly_increasing(f2) && f2.back() >= f0.back() && strictly_increasing(k);
  return {ok, "F2(omega) " + join(f2) + "; F0 " + join(f0) + "; KL " + join(k)};
}

Outcome mbl_transition() {
  const auto& t = levels().table("mbl_summary");
  std::vector<double> kl;
  for (double W : {1.5, 5.0, 10.0, 20.0}) kl.push_back(t.value("kl", {{"W", W}}));
  const bool low = kl[0] < kChaoticKlMax;
  const bool mono = strictly_increasing(kl);
  const double sat = std::abs(kl[3] - kl[2]) / kl[3];
  return {low && mono && sat <= kSaturationTol,
          "KL(W=1.5,5,10,20) " + join(kl) + "; 10->20 relative change " + fmt("%.3f", sat)};
}

Outcome training_phases() {
  std::vector<double> c;
  for (double W : {2.0, 15.0, 20.0, 25.0}) c.push_back(final_cost(Envelope::kSinusoidal, W));
  const bool half = c[2] <= kTrainRatio * c[0];
  const double hi = *std::max_element(c.begin() + 1, c.end());
  const double lo = *std::min_element(c.begin() + 1, c.end());
  const double spread = (hi - lo) / lo;
  return {half && spread <= kTrainSpread, "final cost (W=2,15,20,25) " + join(c) + "; MBL spread " +
                                              fmt("%.3f", spread)};
}

Outcome memory_curves() {
  auto c = base(Experiment::kMemory, "memory");
  c.L = {9};
  c.W = {2.0, 20.0};
  c.omega = {8.0};
  c.D = kMemoryRealizations;
  const auto r = run_experiment(c, progress_to_stderr());
  const auto& t = r.table("memory_divergence");
  auto at = [&](double W, int dm) { return t.value("kl", {{"W", W}, {"dm", dm}}); };
  const bool grows = at(20, 1) < kMemoryGrowth * at(20, 10);
  const bool flat = std::abs(at(2, 1) - at(2, 10)) <= kMemoryFlat * at(2, 10);
  return {grows && flat, "W=20 dm=1 " + fmt("%.4g", at(20, 1)) + " dm=10 " + fmt("%.4g", at(20, 10)) +
                             "; W=2 dm=1 " + fmt("%.4g", at(2, 1)) + " dm=10 " + fmt("%.4g", at(2, 10))};
}

Outcome haar_ensemble() {
  auto rng = realization_rng(kSeed, 0, StreamTag::kHaar);
  std::vector<std::vector<double>> diag(kHaarDim);
  PtHistogram h;
  for (int s = 0; s < kHaarStates; ++s) {
    const auto p = output_probs(haar_state(kHaarDim, rng));
    for (std::size_t k = 0; k < kHaarDim; ++k) diag[k].push_back(p[k]);
    h.add_probabilities(p);
  }
  double worst = 0.0;
  for (const auto& col : diag) {
    const auto me = mean_and_error(col);
    worst = std::max(worst, std::abs(me.mean - 1.0 / kHaarDim) / me.sem);
  }
  const double kl = kl_to_pt(h).value;
  return {worst <= kHaarSigmas && kl < kHaarKlMax,
          "max |rho_kk - 1/32| = " + fmt("%.2f", worst) + " SE; pooled KL " + fmt("%.2e", kl)};
}

Outcome oracle_suites() {
  std::mt19937_64 rng(kSeed);
  std::ostringstream detail;
  bool ok = true;

  double worst_fid = 1.0;
  for (int L = 1; L <= 3; ++L) {
    for (auto env : {Envelope::kSinusoidal, Envelope::kConstantHalf}) {
      ModelParams p;
      p.L = L;
      const auto d = sample_disorder(p, rng);
      const auto U = oracle::fine_step_unitary(
          p, d, [&](double t) { return envelope_value(env, p.omega, t); }, 10000);
      const auto psi = haar_state(p.dimension(), rng);
      const Eigen::VectorXcd ref =
          U * Eigen::Map<const Eigen::VectorXcd>(psi.amplitudes().data(), static_cast<Eigen::Index>(psi.size()));
      const auto out = propagate_cycle(psi, p, d, env, {});
      worst_fid = std::min(worst_fid, oracle::fidelity(ref, out.amplitudes()));
    }
  }
  ok = ok && worst_fid > kPropagationFidelity;
  detail << "propagation fidelity min " << fmt("%.12f", worst_fid);

  double worst_hf2 = 0.0;
  for (int L = 1; L <= 3; ++L) {
    for (double omega : {3.0, 8.0}) {
      ModelParams p;
      p.L = L;
      p.W = 2.0;
      p.omega = omega;
      const auto d = sample_disorder(p, rng);
      const auto exact = hf2(p, d).matrix;
      worst_hf2 = std::max(worst_hf2, (exact - oracle::hf2_quadrature(p, d, 24)).cwiseAbs().maxCoeff());
    }
  }
  ok = ok && worst_hf2 < kMagnusEntrywise;
  detail << "; second Magnus term max entry error " << fmt("%.2e", worst_hf2);

  const BoltzmannModel bm{{0.1, -0.2}, {0.3}, 1.0};
  const auto q = exact_boltzmann(bm);
  const double E[4] = {0.2, -0.6, 0.0, 0.4};  // site 1 is the low bit
  double Z = 0.0;
  for (double e : E) Z += std::exp(-e);
  double worst_gibbs = 0.0;
  for (std::size_t k = 0; k < 4; ++k) worst_gibbs = std::max(worst_gibbs, std::abs(q[k] - std::exp(-E[k]) / Z));
  ok = ok && worst_gibbs < kGibbsTol;
  detail << "; Gibbs max error " << fmt("%.1e", worst_gibbs);

  // Randomized invariants: state norms after propagation, circuits and Haar
  // draws; unitarity of small Floquet operators; probabilities summing to 1.
  std::uniform_int_distribution<int> Ls(1, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Envelope envs[3] = {Envelope::kSinusoidal, Envelope::kConstantHalf, Envelope::kZero};
  double worst_norm = 0.0;
  double worst_unitary = 0.0;
  for (int rep = 0; rep < kPropertyCases; ++rep) {
    ModelParams p;
    p.L = Ls(rng);
    p.W = 30.0 * u(rng);
    p.F = 10.0 * u(rng);
    p.omega = 0.5 + 40.0 * u(rng);
    const auto d = sample_disorder(p, rng);
    const Envelope env = envs[rep % 3];
    IntegratorConfig integ;
    integ.substeps_per_cycle = 16;
    const auto psi = propagate_cycle(haar_state(std::max<std::size_t>(2, p.dimension()), rng), p, d, env, integ);
    worst_norm = std::max(worst_norm, std::abs(psi.norm_squared() - 1.0));
    const auto probs = output_probs(psi);
    double s = 0.0;
    for (double v : probs) s += v;
    worst_norm = std::max(worst_norm, std::abs(s - 1.0));
    const auto circ = simulate_circuit(build_circuit(p.L, 1 + rep % 12, rng), p.L);
    worst_norm = std::max(worst_norm, std::abs(circ.norm_squared() - 1.0));
    if (p.L <= 4 && rep % 10 == 0) {
      worst_unitary = std::max(worst_unitary, unitarity_residual(floquet_unitary(p, d, env, integ)));
    }
  }
  ok = ok && worst_norm < 1e-10 && worst_unitary < 1e-10;
  detail << "; " << kPropertyCases << " random cases: max norm drift " << fmt("%.1e", worst_norm)
         << ", max unitarity residual " << fmt("%.1e", worst_unitary);
  return {ok, detail.str()};
}

Outcome envelope_ablation() {
  const double s20 = final_cost(Envelope::kSinusoidal, 20.0);
  const double c20 = final_cost(Envelope::kConstantHalf, 20.0);
  const double s2 = final_cost(Envelope::kSinusoidal, 2.0);
  const double c2 = final_cost(Envelope::kConstantHalf, 2.0);
  return {c20 > s20 && c2 < s2, "W=20 constant-half " + fmt("%.4g", c20) + " vs sinusoidal " + fmt("%.4g", s20) +
                                    "; W=2 constant-half " + fmt("%.4g", c2) + " vs sinusoidal " +
                                    fmt("%.4g", s2)};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*check)();
};

const Criterion kCriteria[] = {
    {1, "COE level statistics at W=1.5", coe_regime},
    {2, "Poisson level statistics at W=20", poisson_regime},
    {3, "Porter-Thomas convergence in m and L", pt_convergence},
    {4, "analog beats digital transiently", analog_vs_digital},
    {5, "Magnus crossover in omega", magnus_crossover},
    {6, "MBL order parameter transition", mbl_transition},
    {7, "training phase dependence", training_phases},
    {8, "memory curves", memory_curves},
    {9, "Haar ensemble diagonal and Porter-Thomas", haar_ensemble},
    {10, "oracle suites and randomized invariants", oracle_suites},
    {11, "constant-half envelope ablation", envelope_ablation},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--out" && a + 1 < argc) {
      out_root = argv[++a];
    } else {
      selected.insert(std::atoi(arg.c_str()));
    }
  }
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s [%d] %s: %s (%.0f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
