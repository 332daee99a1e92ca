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

#include "qchain/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>

#include "qchain/genmodel.hpp"
#include "qchain/magnus.hpp"
#include "qchain/parallel.hpp"
#include "qchain/rng.hpp"

#ifndef QCHAIN_VERSION
#define QCHAIN_VERSION "0.0.0"
#endif

namespace qchain {

namespace fs = std::filesystem;
using nlohmann::json;
using Payload = std::vector<double>;

namespace {

constexpr std::size_t kCheckpointEvery = 10;

// ---------------------------------------------------------------------------
// Seeding

std::uint64_t cell_id(int L, double W, double omega) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(L));
  h = mix64(h ^ std::bit_cast<std::uint64_t>(W));
  h = mix64(h ^ std::bit_cast<std::uint64_t>(omega));
  return h & 0x7fffffffULL;
}

std::uint64_t realization_index(std::uint64_t cell, std::size_t d) {
  return (cell << 32) | static_cast<std::uint64_t>(d);
}

std::string cell_key(std::string_view stage, int L, double W, double omega) {
  std::ostringstream os;
  os << stage << "/L=" << L << "/W=" << W << "/omega=" << omega;
  return os.str();
}

// ---------------------------------------------------------------------------
// Checkpointed sweeps

class Sweep {
 public:
  Sweep(const ExperimentConfig& config, const RunOptions& options)
      : options_(options),
        enabled_(options.write_files && config.checkpoint),
        threads_(resolve_threads(config.threads)),
        hash_(config_hash(config)) {
    if (!enabled_) return;
    path_ = fs::path(config.out) / (std::string(to_string(config.experiment)) + ".checkpoint.json");
    std::ifstream in(path_);
    if (!in) return;
    try {
      json j = json::parse(in);
      if (j.at("config_hash").get<std::uint64_t>() == hash_) state_ = std::move(j.at("cells"));
    } catch (const json::exception&) {
      // A truncated or foreign checkpoint is discarded.
    }
  }

  [[nodiscard]] int threads() const { return threads_; }

  /// fn(d) for d in [0, count), skipping realizations already checkpointed.
  std::vector<Payload> run(const std::string& key, std::size_t count,
                           const std::function<Payload(std::size_t)>& fn, int threads = 0) {
    std::vector<Payload> out(count);
    std::vector<char> have(count, 0);
    if (state_.contains(key)) {
      for (const auto& [idx, payload] : state_[key].items()) {
        const auto d = std::stoull(idx);
        if (d < count) {
          out[d] = payload.get<Payload>();
          have[d] = 1;
        }
      }
    }
    std::vector<std::size_t> todo;
    for (std::size_t d = 0; d < count; ++d) {
      if (!have[d]) todo.push_back(d);
    }
    std::size_t done = count - todo.size();
    std::size_t since_save = 0;
    std::mutex mu;
    parallel_for(todo.size(), threads > 0 ? threads : threads_, [&](std::size_t i) {
      const std::size_t d = todo[i];
      out[d] = fn(d);
      const std::lock_guard lock(mu);
      ++done;
      if (enabled_) {
        state_[key][std::to_string(d)] = out[d];
        if (++since_save >= kCheckpointEvery) {
          save();
          since_save = 0;
        }
      }
      if (options_.progress) options_.progress(key, done, count);
    });
    if (enabled_ && since_save > 0) save();
    return out;
  }

  void finish() {
    if (enabled_) {
      std::error_code ec;
      fs::remove(path_, ec);
    }
  }

 private:
  void save() {
    fs::create_directories(path_.parent_path());
    const fs::path tmp = path_.string() + ".tmp";
    {
      std::ofstream os(tmp);
      if (!os) throw ResourceError("cannot write checkpoint " + tmp.string());
      os << json{{"config_hash", hash_}, {"cells", state_}}.dump();
    }
    fs::rename(tmp, path_);
  }

  const RunOptions& options_;
  bool enabled_;
  int threads_;
  std::uint64_t hash_;
  fs::path path_;
  json state_ = json::object();
};

// ---------------------------------------------------------------------------
// Payload helpers

std::size_t hist_width(const Binning& b) { return static_cast<std::size_t>(b.bins) + 1; }

void append(Payload& p, const std::vector<double>& v) { p.insert(p.end(), v.begin(), v.end()); }

Payload sum_payloads(const std::vector<Payload>& payloads, std::size_t begin, std::size_t end) {
  Payload total;
  for (std::size_t d = begin; d < end; ++d) {
    if (total.empty()) total.assign(payloads[d].size(), 0.0);
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += payloads[d][k];
  }
  return total;
}

PtHistogram hist_at(const Binning& b, const Payload& p, std::size_t offset) {
  return PtHistogram::from_vector(b, std::span<const double>(p).subspan(offset, hist_width(b)));
}

struct KlSummary {
  MeanError kl;
  bool low_statistics = false;
};

KlSummary kl_summary(const std::vector<Payload>& payloads, const Binning& b, std::size_t offset) {
  KlSummary s;
  s.kl = jackknife(payloads, [&](const Payload& p) { return kl_to_pt(hist_at(b, p, offset)).value; });
  s.low_statistics = kl_to_pt(hist_at(b, sum_payloads(payloads, 0, payloads.size()), offset)).low_statistics;
  return s;
}

std::vector<double> column_of(const std::vector<Payload>& payloads, std::size_t k) {
  std::vector<double> v(payloads.size());
  for (std::size_t d = 0; d < payloads.size(); ++d) v[d] = payloads[d][k];
  return v;
}

// ---------------------------------------------------------------------------
// Shared experiment context

class Context {
 public:
  Context(const ExperimentConfig& config, const RunOptions& options, ExperimentResult& result)
      : cfg(config), sweep(config, options), result_(result) {}

  [[nodiscard]] ModelParams params(int L, double W, double omega) const {
    ModelParams p;
    p.L = L;
    p.J = cfg.J;
    p.F = cfg.F;
    p.W = W;
    p.omega = omega;
    p.validate();
    return p;
  }

  IntegratorConfig integrator(const ModelParams& p, Envelope envelope) {
    IntegratorConfig integ = cfg.integrator;
    if (!cfg.calibrate_substeps) return integ;
    for (const auto& c : result_.calibrations) {
      if (c.L == p.L && c.W == p.W && c.omega == p.omega) {
        integ.substeps_per_cycle = c.substeps;
        return integ;
      }
    }
    const auto c = calibrate_substeps(p, envelope, cfg.integrator, cfg.seed,
                                      cell_id(p.L, p.W, p.omega), cfg.max_substeps);
    result_.calibrations.push_back(c);
    integ.substeps_per_cycle = c.substeps;
    return integ;
  }

  Table& table(std::string name, std::vector<std::string> columns) {
    result_.tables.push_back(Table{std::move(name), std::move(columns), {}});
    return result_.tables.back();
  }

  const ExperimentConfig& cfg;
  Sweep sweep;

 private:
  ExperimentResult& result_;
};

// Probabilities after each of m cycles of a fixed-disorder Floquet drive,
// accumulated into one histogram per cycle.
Payload static_disorder_histograms(const ModelParams& p, const DisorderRealization& disorder,
                                   Envelope envelope, const IntegratorConfig& integ, int m,
                                   const Binning& binning) {
  const CyclePropagator prop(p, disorder, envelope, integ);
  std::vector<Complex> amps = initial_state(p.L).release();
  Payload payload;
  payload.reserve(static_cast<std::size_t>(m) * hist_width(binning));
  for (int c = 1; c <= m; ++c) {
    prop.apply_in_place(amps);
    const StateVector state(amps);
    PtHistogram h(binning);
    h.add_probabilities(output_probs(state));
    append(payload, h.to_vector());
  }
  return payload;
}

// ---------------------------------------------------------------------------
// supremacy

void run_supremacy(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& bin = cfg.binning;
  const std::size_t hw = hist_width(bin);
  auto& analog = ctx.table("supremacy_analog",
                           {"L", "W", "omega", "m", "kl", "kl_err", "low_statistics"});
  auto& digital = ctx.table("supremacy_digital", {"L", "layers", "m", "kl", "kl_err", "low_statistics"});
  auto& histogram = ctx.table("supremacy_histogram", {"L", "W", "omega", "m", "x_lo", "x_hi",
                                                      "analog_mass", "digital_mass", "pt_mass"});
  auto& longtime = ctx.table("supremacy_longtime", {"L", "W", "omega", "m", "analog_kl", "analog_err",
                                                    "digital_kl", "digital_err"});
  const auto pt_masses = pt_bin_masses(bin);
  const double pt_window = -std::expm1(-bin.x_max);

  for (int L : cfg.L) {
    std::vector<Payload> circ;
    std::vector<KlSummary> circ_kl;
    if (cfg.digital) {
      const int layers = cfg.m * cfg.layers_per_cycle;
      const std::uint64_t cell = cell_id(L, 0.0, 0.0);
      circ = ctx.sweep.run(cell_key("digital", L, 0.0, 0.0), cfg.D, [&](std::size_t d) {
        auto rng = realization_rng(cfg.seed, realization_index(cell, d), StreamTag::kCircuit);
        const auto circuit = build_circuit(L, layers, rng, cfg.circuit);
        const auto states = simulate_circuit_layers(circuit, L, cfg.circuit);
        Payload payload;
        for (int c = 1; c <= cfg.m; ++c) {
          PtHistogram h(bin);
          h.add_probabilities(output_probs(states[static_cast<std::size_t>(c * cfg.layers_per_cycle - 1)]));
          append(payload, h.to_vector());
        }
        return payload;
      });
      for (int c = 1; c <= cfg.m; ++c) {
        circ_kl.push_back(kl_summary(circ, bin, static_cast<std::size_t>(c - 1) * hw));
        const auto& s = circ_kl.back();
        digital.rows.push_back({double(L), double(c * cfg.layers_per_cycle), double(c), s.kl.mean,
                                s.kl.sem, double(s.low_statistics)});
      }
    }

    for (double W : cfg.W) {
      for (double omega : cfg.omega) {
        const auto p = ctx.params(L, W, omega);
        const auto integ = ctx.integrator(p, cfg.envelope);
        const std::uint64_t cell = cell_id(L, W, omega);
        const auto runs = ctx.sweep.run(cell_key("analog", L, W, omega), cfg.D, [&](std::size_t d) {
          auto rng = realization_rng(cfg.seed, realization_index(cell, d), StreamTag::kDisorder);
          const auto disorder = sample_disorder(p, rng);
          return static_disorder_histograms(p, disorder, cfg.envelope, integ, cfg.m, bin);
        });
        KlSummary last;
        for (int c = 1; c <= cfg.m; ++c) {
          last = kl_summary(runs, bin, static_cast<std::size_t>(c - 1) * hw);
          analog.rows.push_back({double(L), W, omega, double(c), last.kl.mean, last.kl.sem,
                                 double(last.low_statistics)});
        }

        const std::size_t off = static_cast<std::size_t>(cfg.m - 1) * hw;
        const auto a_dist = hist_at(bin, sum_payloads(runs, 0, runs.size()), off).distribution();
        std::vector<double> d_mass(a_dist.masses.size(), 0.0);
        if (cfg.digital) d_mass = hist_at(bin, sum_payloads(circ, 0, circ.size()), off).distribution().masses;
        for (std::size_t k = 0; k < a_dist.masses.size(); ++k) {
          histogram.rows.push_back({double(L), W, omega, double(cfg.m), a_dist.edges[k],
                                    a_dist.edges[k + 1], a_dist.masses[k], d_mass[k],
                                    pt_masses[k] * pt_window});
        }
        const double dkl = cfg.digital ? circ_kl.back().kl.mean : 0.0;
        const double derr = cfg.digital ? circ_kl.back().kl.sem : 0.0;
        longtime.rows.push_back({double(L), W, omega, double(cfg.m), last.kl.mean, last.kl.sem, dkl, derr});
      }
    }
  }
}

// ---------------------------------------------------------------------------
// magnus

void run_magnus(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& bin = cfg.binning;
  auto& fid = ctx.table("magnus_fidelity", {"L", "W", "omega", "order", "fidelity", "fidelity_err"});
  auto& kl = ctx.table("magnus_kl", {"L", "W", "omega", "m", "kl", "kl_err", "low_statistics"});
  for (int L : cfg.L) {
    for (double W : cfg.W) {
      for (double omega : cfg.omega) {
        const auto p = ctx.params(L, W, omega);
        const auto integ = ctx.integrator(p, cfg.envelope);
        const std::uint64_t cell = cell_id(L, W, omega);
        const auto runs = ctx.sweep.run(cell_key("magnus", L, W, omega), cfg.D, [&](std::size_t d) {
          auto rng = realization_rng(cfg.seed, realization_index(cell, d), StreamTag::kDisorder);
          const auto disorder = sample_disorder(p, rng);
          const CyclePropagator prop(p, disorder, cfg.envelope, integ);
          const StateVector psi0 = initial_state(L);
          const StateVector exact = prop.apply(psi0);
          Payload payload{fidelity(exact, truncated_evolve(psi0, p, disorder, 0, cfg.dense_limit)),
                          fidelity(exact, truncated_evolve(psi0, p, disorder, 2, cfg.dense_limit))};
          std::vector<Complex> amps(exact.amplitudes().begin(), exact.amplitudes().end());
          for (int c = 2; c <= cfg.m; ++c) prop.apply_in_place(amps);
          PtHistogram h(bin);
          h.add_probabilities(output_probs(StateVector(std::move(amps))));
          append(payload, h.to_vector());
          return payload;
        });
        for (int order : {0, 2}) {
          const auto me = mean_and_error(column_of(runs, order == 0 ? 0 : 1));
          fid.rows.push_back({double(L), W, omega, double(order), me.mean, me.sem});
        }
        const auto s = kl_summary(runs, bin, 2);
        kl.rows.push_back({double(L), W, omega, double(cfg.m), s.kl.mean, s.kl.sem, double(s.low_statistics)});
      }
    }
  }
}

// ---------------------------------------------------------------------------
// mbl-probe and phase-diagram

// Payload: {mean r, ratio histogram (ratio_bins), PT histogram (bins + 1)}.
std::vector<Payload> level_statistics_cell(Context& ctx, int L, double W, double omega) {
  const auto& cfg = ctx.cfg;
  const auto p = ctx.params(L, W, omega);
  const auto integ = ctx.integrator(p, cfg.envelope);
  const std::uint64_t cell = cell_id(L, W, omega);
  return ctx.sweep.run(cell_key("levels", L, W, omega), cfg.D, [&](std::size_t d) {
    auto rng = realization_rng(cfg.seed, realization_index(cell, d), StreamTag::kDisorder);
    const auto disorder = sample_disorder(p, rng);
    const auto U = floquet_unitary(p, disorder, cfg.envelope, integ, cfg.dense_limit);
    const auto ratios = spacing_ratios(eigenphases(U));
    Payload payload{ratios.mean()};
    std::vector<double> rh(static_cast<std::size_t>(cfg.ratio_bins), 0.0);
    for (double r : ratios.ratios) {
      auto k = static_cast<std::size_t>(r * cfg.ratio_bins);
      rh[std::min(k, rh.size() - 1)] += 1.0;
    }
    append(payload, rh);
    Eigen::VectorXcd psi = U.col(0);
    for (int c = 2; c <= cfg.m; ++c) psi = U * psi;
    std::vector<Complex> amps(psi.data(), psi.data() + psi.size());
    PtHistogram h(cfg.binning);
    h.add_probabilities(output_probs(StateVector(std::move(amps))));
    append(payload, h.to_vector());
    return payload;
  });
}

void run_levels(Context& ctx, bool phase_diagram) {
  const auto& cfg = ctx.cfg;
  const auto& bin = cfg.binning;
  const std::size_t hist_off = 1 + static_cast<std::size_t>(cfg.ratio_bins);
  const std::vector<std::string> summary_cols{"L", "W", "omega", "r_mean", "r_err", "kl", "kl_err",
                                              "low_statistics"};
  auto& summary = ctx.table(phase_diagram ? "phase_diagram" : "mbl_summary", summary_cols);
  Table* ratios = nullptr;
  Table* output = nullptr;
  if (!phase_diagram) {
    ratios = &ctx.table("mbl_ratios", {"L", "W", "omega", "r_lo", "r_hi", "density", "coe", "poi", "goe"});
    output = &ctx.table("mbl_output", {"L", "W", "omega", "m", "x_lo", "x_hi", "mass", "pt_mass"});
  }
  const auto pt_masses = pt_bin_masses(bin);
  const double pt_window = -std::expm1(-bin.x_max);
  for (int L : cfg.L) {
    for (double W : cfg.W) {
      for (double omega : cfg.omega) {
        const auto runs = level_statistics_cell(ctx, L, W, omega);
        const auto r = mean_and_error(column_of(runs, 0));
        const auto s = kl_summary(runs, bin, hist_off);
        summary.rows.push_back({double(L), W, omega, r.mean, r.sem, s.kl.mean, s.kl.sem,
                                double(s.low_statistics)});
        if (phase_diagram) continue;
        const auto total = sum_payloads(runs, 0, runs.size());
        double n_ratios = 0.0;
        for (int k = 0; k < cfg.ratio_bins; ++k) n_ratios += total[1 + static_cast<std::size_t>(k)];
        const double w = 1.0 / cfg.ratio_bins;
        for (int k = 0; k < cfg.ratio_bins; ++k) {
          const double lo = w * k;
          const double hi = w * (k + 1);
          const double mid = 0.5 * (lo + hi);
          ratios->rows.push_back({double(L), W, omega, lo, hi,
                                  total[1 + static_cast<std::size_t>(k)] / (n_ratios * w),
                                  ensemble_density(Ensemble::kCOE, mid),
                                  ensemble_density(Ensemble::kPOI, mid),
                                  ensemble_density(Ensemble::kGOE, mid)});
        }
        const auto dist = hist_at(bin, total, hist_off).distribution();
        for (std::size_t k = 0; k < dist.masses.size(); ++k) {
          output->rows.push_back({double(L), W, omega, double(cfg.m), dist.edges[k], dist.edges[k + 1],
                                  dist.masses[k], pt_masses[k] * pt_window});
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// train

void run_train(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto m = static_cast<std::size_t>(cfg.m);
  auto& curve = ctx.table("train_curve", {"L", "W", "omega", "m", "cost", "cost_err"});
  auto& final_t = ctx.table("train_final", {"L", "W", "omega", "cost", "cost_err", "entropy",
                                            "target_entropy", "pt_entropy", "datasets"});
  auto& scatter = ctx.table("train_scatter",
                            {"L", "W", "omega", "dataset", "m", "candidate", "cost", "entropy", "chosen"});
  const bool outer_parallel = cfg.datasets >= static_cast<std::size_t>(ctx.sweep.threads());

  for (int L : cfg.L) {
    std::vector<Dataset> data(cfg.datasets);
    for (std::size_t k = 0; k < cfg.datasets; ++k) {
      auto model_rng = realization_rng(cfg.seed, realization_index(static_cast<std::uint64_t>(L), k),
                                       StreamTag::kModel);
      auto sample_rng = realization_rng(cfg.seed, realization_index(static_cast<std::uint64_t>(L), k),
                                        StreamTag::kSamples);
      const auto model = random_boltzmann_model(L, cfg.J, cfg.temperature, model_rng);
      data[k] = sample_dataset(model, cfg.samples, sample_rng);
    }
    for (double W : cfg.W) {
      for (double omega : cfg.omega) {
        const auto p = ctx.params(L, W, omega);
        TrainingOptions opts;
        opts.integrator = ctx.integrator(p, cfg.envelope);
        opts.threads = outer_parallel ? 1 : ctx.sweep.threads();
        opts.shots = cfg.shots;
        const std::uint64_t cell = cell_id(L, W, omega);
        // Payload: {final cost, target entropy, final entropy, chosen cost per
        // cycle (m)} then, for scatter datasets, costs (m*D), entropies (m*D)
        // and chosen index (m).
        const auto runs = ctx.sweep.run(
            cell_key("train", L, W, omega), cfg.datasets,
            [&](std::size_t k) {
              auto rng = realization_rng(cfg.seed, realization_index(cell, k), StreamTag::kCandidates);
              auto o = opts;
              o.record_candidates = k < cfg.scatter_datasets;
              const auto trace = train(p, cfg.envelope, data[k], cfg.D, cfg.m, rng, o);
              Payload payload{trace.cycles.empty() ? training_cost(trace.final_state, data[k])
                                                   : trace.cycles.back().chosen_cost,
                              shannon_entropy(data[k].empirical_hist),
                              shannon_entropy(output_probs(trace.final_state))};
              for (const auto& c : trace.cycles) payload.push_back(c.chosen_cost);
              if (o.record_candidates) {
                for (const auto& c : trace.cycles) append(payload, c.costs);
                for (const auto& c : trace.cycles) append(payload, c.entropies);
                for (const auto& c : trace.cycles) payload.push_back(double(c.chosen));
              }
              return payload;
            },
            outer_parallel ? 0 : 1);

        for (std::size_t c = 0; c < m; ++c) {
          const auto me = mean_and_error(column_of(runs, 3 + c));
          curve.rows.push_back({double(L), W, omega, double(c + 1), me.mean, me.sem});
        }
        const auto fc = mean_and_error(column_of(runs, 0));
        const auto sq = mean_and_error(column_of(runs, 1));
        const auto sp = mean_and_error(column_of(runs, 2));
        final_t.rows.push_back({double(L), W, omega, fc.mean, fc.sem, sp.mean, sq.mean, pt_entropy(L),
                                double(cfg.datasets)});
        for (std::size_t k = 0; k < std::min(cfg.scatter_datasets, cfg.datasets); ++k) {
          const auto& pl = runs[k];
          const std::size_t costs_off = 3 + m;
          const std::size_t ent_off = costs_off + m * cfg.D;
          const std::size_t chosen_off = ent_off + m * cfg.D;
          for (std::size_t c = 0; c < m; ++c) {
            const auto chosen = static_cast<std::size_t>(pl[chosen_off + c]);
            for (std::size_t d = 0; d < cfg.D; ++d) {
              scatter.rows.push_back({double(L), W, omega, double(k), double(c + 1), double(d),
                                      pl[costs_off + c * cfg.D + d], pl[ent_off + c * cfg.D + d],
                                      double(d == chosen)});
            }
          }
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// memory

void run_memory(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& bin = cfg.binning;
  const std::size_t hw = hist_width(bin);
  const auto curve_len = static_cast<std::size_t>(cfg.dm_max) + 1;
  auto& pt = ctx.table("memory_pt", {"L", "W", "omega", "m", "kl", "kl_err", "low_statistics"});
  auto& div = ctx.table("memory_divergence", {"L", "W", "omega", "dm", "kl", "kl_err"});
  for (int L : cfg.L) {
    for (double W : cfg.W) {
      for (double omega : cfg.omega) {
        const auto p = ctx.params(L, W, omega);
        MemoryOptions mo;
        mo.m_ref_begin = cfg.m_ref_begin;
        mo.m_ref_end = cfg.m_ref_end;
        mo.dm_max = cfg.dm_max;
        mo.integrator = ctx.integrator(p, cfg.envelope);
        const std::uint64_t cell = cell_id(L, W, omega);
        // Payload: {divergence curve (dm_max + 1), PT histogram per cycle (m)}.
        const auto runs = ctx.sweep.run(cell_key("memory", L, W, omega), cfg.D, [&](std::size_t d) {
          auto rng = realization_rng(cfg.seed, realization_index(cell, d), StreamTag::kDisorder);
          std::vector<Payload> hists(static_cast<std::size_t>(cfg.m));
          auto c = memory_divergence(p, cfg.envelope, mo, rng, [&](int cycle, const StateVector& s) {
            if (cycle < 1 || cycle > cfg.m) return;
            PtHistogram h(bin);
            h.add_probabilities(output_probs(s));
            hists[static_cast<std::size_t>(cycle - 1)] = h.to_vector();
          });
          for (auto& h : hists) append(c, h);
          return c;
        });
        for (int c = 1; c <= cfg.m; ++c) {
          const auto s = kl_summary(runs, bin, curve_len + static_cast<std::size_t>(c - 1) * hw);
          pt.rows.push_back({double(L), W, omega, double(c), s.kl.mean, s.kl.sem, double(s.low_statistics)});
        }
        for (std::size_t dm = 0; dm < curve_len; ++dm) {
          const auto me = mean_and_error(column_of(runs, dm));
          div.rows.push_back({double(L), W, omega, double(dm), me.mean, me.sem});
        }
      }
    }
  }
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public API

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::kSupremacy:
      return "supremacy";
    case Experiment::kMagnus:
      return "magnus";
    case Experiment::kMblProbe:
      return "mbl-probe";
    case Experiment::kPhaseDiagram:
      return "phase-diagram";
    case Experiment::kTrain:
      return "train";
    case Experiment::kMemory:
      return "memory";
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  for (auto e : {Experiment::kSupremacy, Experiment::kMagnus, Experiment::kMblProbe,
                 Experiment::kPhaseDiagram, Experiment::kTrain, Experiment::kMemory}) {
    if (to_string(e) == name) return e;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  switch (e) {
    case Experiment::kSupremacy:
      c.L = {7, 9, 11};
      c.W = {5.0};
      c.D = 500;
      c.m = 30;
      break;
    case Experiment::kMagnus:
      c.W = {2.0};
      c.omega = {2.0, 4.0, 8.0, 16.0, 32.0};
      c.D = 500;
      c.m = 10;
      break;
    case Experiment::kMblProbe:
      c.W = {1.5, 5.0, 10.0, 20.0};
      c.D = 100;
      c.m = 10;
      break;
    case Experiment::kPhaseDiagram:
      c.W = {0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 7.5, 10.0, 15.0, 20.0};
      c.omega = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
      c.D = 50;
      c.m = 10;
      break;
    case Experiment::kTrain:
      c.W = {2.0, 20.0};
      c.D = 140;
      c.m = 500;
      break;
    case Experiment::kMemory:
      c.W = {2.0, 20.0};
      c.D = 100;
      c.m = 100;
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (L.empty() || W.empty() || omega.empty()) fail("L, W and omega lists must be non-empty");
  for (int l : L) {
    if (l < 2 || l > kMaxSites) fail("L must lie in [2, " + std::to_string(kMaxSites) + "]");
  }
  for (double w : W) {
    if (!(w >= 0.0) || !std::isfinite(w)) fail("W must be finite and >= 0");
  }
  for (double o : omega) {
    if (!(o > 0.0) || !std::isfinite(o)) fail("omega must be finite and > 0");
  }
  if (!std::isfinite(F) || !std::isfinite(J)) fail("F and J must be finite");
  if (m < 1) fail("m must be >= 1");
  if (D < 1) fail("D must be >= 1");
  if (D > 0xffffffffULL) fail("D must fit in 32 bits");
  if (layers_per_cycle < 1) fail("layers-per-cycle must be >= 1");
  if (ratio_bins < 1) fail("ratio-bins must be >= 1");
  if (max_substeps < integrator.substeps_per_cycle) fail("max-substeps is below the starting substep count");
  integrator.validate();
  binning.validate();
  if (experiment == Experiment::kTrain) {
    if (datasets < 1) fail("datasets must be >= 1");
    if (samples < 1) fail("samples must be >= 1");
    if (!(temperature > 0.0)) fail("temperature must be > 0");
    for (int l : L) {
      if (l > kBoltzmannEnumerationLimit) fail("train: L exceeds the Boltzmann enumeration limit");
    }
  }
  if (experiment == Experiment::kMemory) {
    if (m_ref_begin < 0 || m_ref_end < m_ref_begin) fail("memory: invalid reference window");
    if (dm_max < 0) fail("memory: dm-max must be >= 0");
    if (m > m_ref_end + dm_max) fail("memory: m must not exceed m-ref-end + dm-max");
  }
  if (experiment == Experiment::kMagnus || experiment == Experiment::kMblProbe ||
      experiment == Experiment::kPhaseDiagram) {
    for (int l : L) {
      if (l > dense_limit) fail("L exceeds the dense-operator limit " + std::to_string(dense_limit));
    }
  }
}

std::string config_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["L"] = c.L;
  j["W"] = c.W;
  j["omega"] = c.omega;
  j["F"] = c.F;
  j["J"] = c.J;
  j["envelope"] = to_string(c.envelope);
  j["m"] = c.m;
  j["D"] = c.D;
  j["seed"] = c.seed;
  j["digital"] = c.digital;
  j["layers_per_cycle"] = c.layers_per_cycle;
  j["no_repeat"] = c.circuit.no_repeat;
  j["final_hadamard"] = c.circuit.final_hadamard;
  j["substeps"] = c.integrator.substeps_per_cycle;
  j["convergence_tol"] = c.integrator.convergence_tol;
  j["calibrate_substeps"] = c.calibrate_substeps;
  j["max_substeps"] = c.max_substeps;
  j["bins"] = c.binning.bins;
  j["x_max"] = c.binning.x_max;
  j["ratio_bins"] = c.ratio_bins;
  j["datasets"] = c.datasets;
  j["samples"] = c.samples;
  j["temperature"] = c.temperature;
  j["shots"] = c.shots;
  j["scatter_datasets"] = c.scatter_datasets;
  j["m_ref_begin"] = c.m_ref_begin;
  j["m_ref_end"] = c.m_ref_end;
  j["dm_max"] = c.dm_max;
  j["dense_limit"] = c.dense_limit;
  return j.dump();
}

std::uint64_t config_hash(const ExperimentConfig& config) { return fnv1a(config_json(config)); }

std::size_t Table::column(std::string_view col) const {
  const auto it = std::find(columns.begin(), columns.end(), col);
  if (it == columns.end()) {
    throw ArgumentError("table " + name + " has no column '" + std::string(col) + "'");
  }
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<std::vector<double>> Table::select(
    const std::vector<std::pair<std::string, double>>& where) const {
  std::vector<std::size_t> idx;
  for (const auto& w : where) idx.push_back(column(w.first));
  std::vector<std::vector<double>> out;
  for (const auto& row : rows) {
    bool ok = true;
    for (std::size_t i = 0; i < idx.size() && ok; ++i) ok = row[idx[i]] == where[i].second;
    if (ok) out.push_back(row);
  }
  return out;
}

double Table::value(std::string_view col, const std::vector<std::pair<std::string, double>>& where) const {
  const auto rows_found = select(where);
  if (rows_found.size() != 1) {
    throw ArgumentError("table " + name + ": expected one matching row, found " +
                        std::to_string(rows_found.size()));
  }
  return rows_found.front()[column(col)];
}

const Table& ExperimentResult::table(std::string_view name) const {
  for (const auto& t : tables) {
    if (t.name == name) return t;
  }
  throw ArgumentError("no table named '" + std::string(name) + "'");
}

Calibration calibrate_substeps(const ModelParams& params, Envelope envelope,
                               const IntegratorConfig& integrator, std::uint64_t seed,
                               std::uint64_t cell, int max_substeps) {
  integrator.validate();
  auto rng = realization_rng(seed, cell, StreamTag::kCalibration);
  const auto disorder = sample_disorder(params, rng);
  const auto probe = haar_state(params.dimension(), rng);

  IntegratorConfig cur = integrator;
  StateVector coarse = CyclePropagator(params, disorder, envelope, cur).apply(probe);
  for (;;) {
    IntegratorConfig fine = cur;
    fine.substeps_per_cycle = 2 * cur.substeps_per_cycle;
    StateVector refined = CyclePropagator(params, disorder, envelope, fine).apply(probe);
    const double deficit = 1.0 - fidelity(coarse, refined);
    if (deficit < integrator.convergence_tol) {
      return Calibration{params.L, params.W, params.omega, cur.substeps_per_cycle, deficit};
    }
    if (fine.substeps_per_cycle > max_substeps) {
      throw NumericError("substep calibration did not converge below " +
                         std::to_string(max_substeps) + " substeps (deficit " +
                         std::to_string(deficit) + ")");
    }
    cur = fine;
    coarse = std::move(refined);
  }
}

MeanError jackknife(const std::vector<Payload>& payloads,
                    const std::function<double(const Payload&)>& estimator, int blocks) {
  MeanError out;
  const std::size_t n = payloads.size();
  if (n == 0) throw ArgumentError("jackknife: no payloads");
  const Payload total = sum_payloads(payloads, 0, n);
  out.mean = estimator(total);
  const std::size_t b = std::min<std::size_t>(static_cast<std::size_t>(std::max(blocks, 1)), n);
  if (b < 2) return out;
  std::vector<double> theta(b);
  for (std::size_t j = 0; j < b; ++j) {
    const Payload block = sum_payloads(payloads, j * n / b, (j + 1) * n / b);
    Payload rest = total;
    for (std::size_t k = 0; k < rest.size(); ++k) rest[k] -= block[k];
    theta[j] = estimator(rest);
  }
  double mean = 0.0;
  for (double t : theta) mean += t;
  mean /= static_cast<double>(b);
  double ss = 0.0;
  for (double t : theta) ss += (t - mean) * (t - mean);
  out.sem = std::sqrt(ss * static_cast<double>(b - 1) / static_cast<double>(b));
  return out;
}

void write_csv(const Table& table, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw ResourceError("cannot write " + path.string());
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    std::fprintf(f, "%s%s", c ? "," : "", table.columns[c].c_str());
  }
  std::fputc('\n', f);
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) std::fprintf(f, "%s%.12g", c ? "," : "", row[c]);
    std::fputc('\n', f);
  }
  if (std::fclose(f) != 0) throw ResourceError("error closing " + path.string());
}

void write_manifest(const ExperimentResult& result, const fs::path& path) {
  json j;
  j["version"] = version();
  j["experiment"] = to_string(result.config.experiment);
  j["seed"] = result.config.seed;
  j["config"] = json::parse(config_json(result.config));
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(result.config)));
  j["config_hash"] = hash;
  json cal = json::array();
  for (const auto& c : result.calibrations) {
    cal.push_back({{"L", c.L}, {"W", c.W}, {"omega", c.omega}, {"substeps", c.substeps},
                   {"deficit", c.deficit}});
  }
  j["calibrations"] = cal;
  json tables = json::array();
  for (const auto& t : result.tables) tables.push_back({{"name", t.name}, {"file", t.name + ".csv"},
                                                        {"columns", t.columns}, {"rows", t.rows.size()}});
  j["tables"] = tables;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw ResourceError("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.tables.reserve(8);  // Context hands out references into this vector
  Context ctx(config, options, result);
  switch (config.experiment) {
    case Experiment::kSupremacy:
      run_supremacy(ctx);
      break;
    case Experiment::kMagnus:
      run_magnus(ctx);
      break;
    case Experiment::kMblProbe:
      run_levels(ctx, false);
      break;
    case Experiment::kPhaseDiagram:
      run_levels(ctx, true);
      break;
    case Experiment::kTrain:
      run_train(ctx);
      break;
    case Experiment::kMemory:
      run_memory(ctx);
      break;
  }
  if (options.write_files) {
    const fs::path out(config.out);
    for (const auto& t : result.tables) write_csv(t, out / (t.name + ".csv"));
    write_manifest(result, out / "manifest.json");
  }
  ctx.sweep.finish();
  return result;
}

std::string_view version() { return QCHAIN_VERSION; }

}  // namespace qchain
