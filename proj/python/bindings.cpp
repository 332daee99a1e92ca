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

// Python bindings. States, operators and probability arrays cross the
// boundary as NumPy arrays; random draws are addressed by (seed, index) so
// Python callers get the same streams as the C++ harness.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qchain/circuit.hpp"
#include "qchain/errors.hpp"
#include "qchain/evolution.hpp"
#include "qchain/genmodel.hpp"
#include "qchain/harness.hpp"
#include "qchain/magnus.hpp"
#include "qchain/rng.hpp"
#include "qchain/spin_core.hpp"
#include "qchain/stats.hpp"

namespace py = pybind11;
using namespace qchain;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;
using DArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

StateVector to_state(const CArray& a) {
  if (a.ndim() != 1) throw ArgumentError("state must be a 1-d complex array");
  return StateVector(std::vector<Complex>(a.data(), a.data() + a.size()));
}

CArray from_state(const StateVector& s) {
  CArray out(static_cast<py::ssize_t>(s.size()));
  std::copy(s.amplitudes().begin(), s.amplitudes().end(), out.mutable_data());
  return out;
}

template <class T>
py::array_t<T> from_vector(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

DisorderRealization to_disorder(const DArray& h) {
  if (h.ndim() != 1) throw ArgumentError("fields must be a 1-d array");
  return DisorderRealization{std::vector<double>(h.data(), h.data() + h.size())};
}

IntegratorConfig integrator(int substeps) {
  IntegratorConfig c;
  c.substeps_per_cycle = substeps;
  return c;
}

py::dict tables_to_dict(const ExperimentResult& r) {
  py::dict out;
  for (const auto& t : r.tables) {
    py::dict cols;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      py::array_t<double> col(static_cast<py::ssize_t>(t.rows.size()));
      auto* p = col.mutable_data();
      for (std::size_t k = 0; k < t.rows.size(); ++k) p[k] = t.rows[k][c];
      cols[py::str(t.columns[c])] = col;
    }
    out[py::str(t.name)] = cols;
  }
  return out;
}

// Applies {"L": [9], "D": 100, ...} over the experiment defaults. Keys use the
// config field names.
ExperimentConfig config_from(const std::string& experiment, const py::dict& overrides) {
  auto c = default_config(parse_experiment(experiment));
  for (const auto& [key_obj, value] : overrides) {
    const auto key = key_obj.cast<std::string>();
    if (key == "L") c.L = value.cast<std::vector<int>>();
    else if (key == "W") c.W = value.cast<std::vector<double>>();
    else if (key == "omega") c.omega = value.cast<std::vector<double>>();
    else if (key == "F") c.F = value.cast<double>();
    else if (key == "J") c.J = value.cast<double>();
    else if (key == "envelope") c.envelope = parse_envelope(value.cast<std::string>());
    else if (key == "m") c.m = value.cast<int>();
    else if (key == "D") c.D = value.cast<std::size_t>();
    else if (key == "seed") c.seed = value.cast<std::uint64_t>();
    else if (key == "out") c.out = value.cast<std::string>();
    else if (key == "digital") c.digital = value.cast<bool>();
    else if (key == "layers_per_cycle") c.layers_per_cycle = value.cast<int>();
    else if (key == "no_repeat") c.circuit.no_repeat = value.cast<bool>();
    else if (key == "final_hadamard") c.circuit.final_hadamard = value.cast<bool>();
    else if (key == "substeps") c.integrator.substeps_per_cycle = value.cast<int>();
    else if (key == "tol") c.integrator.convergence_tol = value.cast<double>();
    else if (key == "calibrate_substeps") c.calibrate_substeps = value.cast<bool>();
    else if (key == "max_substeps") c.max_substeps = value.cast<int>();
    else if (key == "bins") c.binning.bins = value.cast<int>();
    else if (key == "x_max") c.binning.x_max = value.cast<double>();
    else if (key == "ratio_bins") c.ratio_bins = value.cast<int>();
    else if (key == "datasets") c.datasets = value.cast<std::size_t>();
    else if (key == "samples") c.samples = value.cast<std::size_t>();
    else if (key == "temperature") c.temperature = value.cast<double>();
    else if (key == "shots") c.shots = value.cast<std::uint64_t>();
    else if (key == "scatter_datasets") c.scatter_datasets = value.cast<std::size_t>();
    else if (key == "m_ref_begin") c.m_ref_begin = value.cast<int>();
    else if (key == "m_ref_end") c.m_ref_end = value.cast<int>();
    else if (key == "dm_max") c.dm_max = value.cast<int>();
    else if (key == "threads") c.threads = value.cast<int>();
    else if (key == "checkpoint") c.checkpoint = value.cast<bool>();
    else if (key == "dense_limit") c.dense_limit = value.cast<int>();
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return c;
}

}  // namespace

PYBIND11_MODULE(_qchain, m) {
  m.doc() = "Driven disordered Ising chain: propagation, spectra, statistics, training";

  auto base = py::register_exception<Error>(m, "QchainError", PyExc_RuntimeError);
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<StateError>(m, "StateError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](int L, double J, double F, double W, double omega) {
             ModelParams p;
             p.L = L;
             p.J = J;
             p.F = F;
             p.W = W;
             p.omega = omega;
             p.validate();
             return p;
           }),
           py::arg("L") = 9, py::arg("J") = 1.0, py::arg("F") = 2.5, py::arg("W") = 5.0,
           py::arg("omega") = 8.0)
      .def_readwrite("L", &ModelParams::L)
      .def_readwrite("J", &ModelParams::J)
      .def_readwrite("F", &ModelParams::F)
      .def_readwrite("W", &ModelParams::W)
      .def_readwrite("omega", &ModelParams::omega)
      .def_property_readonly("period", &ModelParams::period)
      .def_property_readonly("dimension", &ModelParams::dimension)
      .def("validate", &ModelParams::validate)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(L=" + std::to_string(p.L) + ", J=" + std::to_string(p.J) +
               ", F=" + std::to_string(p.F) + ", W=" + std::to_string(p.W) +
               ", omega=" + std::to_string(p.omega) + ")";
      });

  py::enum_<Envelope>(m, "Envelope")
      .value("SINUSOIDAL", Envelope::kSinusoidal)
      .value("CONSTANT_HALF", Envelope::kConstantHalf)
      .value("ZERO", Envelope::kZero);

  m.def(
      "sample_disorder",
      [](const ModelParams& p, std::uint64_t seed, std::uint64_t index) {
        auto rng = realization_rng(seed, index, StreamTag::kDisorder);
        return from_vector(sample_disorder(p, rng).h);
      },
      py::arg("params"), py::arg("seed"), py::arg("index") = 0,
      "Fields h_1..h_L uniform on [0, W] from the disorder stream (seed, index).");

  m.def("initial_state", [](int L) { return from_state(initial_state(L)); }, py::arg("L"));
  m.def("output_probs", [](const CArray& s) { return from_vector(output_probs(to_state(s))); },
        py::arg("state"));
  m.def("diagonal_energies",
        [](const ModelParams& p, const DArray& h) { return from_vector(diagonal_energies(p, to_disorder(h))); },
        py::arg("params"), py::arg("fields"));

  m.def(
      "propagate_cycle",
      [](const CArray& state, const ModelParams& p, const DArray& h, Envelope env, int substeps) {
        const auto s = to_state(state);
        const auto d = to_disorder(h);
        StateVector out;
        {
          py::gil_scoped_release release;
          out = propagate_cycle(s, p, d, env, integrator(substeps));
        }
        return from_state(out);
      },
      py::arg("state"), py::arg("params"), py::arg("fields"), py::arg("envelope") = Envelope::kSinusoidal,
      py::arg("substeps") = IntegratorConfig{}.substeps_per_cycle);

  m.def(
      "floquet_unitary",
      [](const ModelParams& p, const DArray& h, Envelope env, int substeps, int dense_limit) {
        const auto d = to_disorder(h);
        py::gil_scoped_release release;
        return floquet_unitary(p, d, env, integrator(substeps), dense_limit);
      },
      py::arg("params"), py::arg("fields"), py::arg("envelope") = Envelope::kSinusoidal,
      py::arg("substeps") = IntegratorConfig{}.substeps_per_cycle, py::arg("dense_limit") = kDefaultDenseLimit);

  m.def(
      "eigenphases", [](const Eigen::MatrixXcd& U) { return from_vector(eigenphases(U).phases); },
      py::arg("unitary"), "Eigenphases in [0, 2 pi), ascending.");
  m.def(
      "spacing_ratios",
      [](const DArray& phases) {
        FloquetSpectrum s;
        s.phases.assign(phases.data(), phases.data() + phases.size());
        return from_vector(spacing_ratios(s).ratios);
      },
      py::arg("phases"));

  m.def("hf0", [](const ModelParams& p, const DArray& h) { return hf0(p, to_disorder(h)).matrix; },
        py::arg("params"), py::arg("fields"));
  m.def("hf1", [](const ModelParams& p, const DArray& h, double t0) { return hf1(p, to_disorder(h), t0).matrix; },
        py::arg("params"), py::arg("fields"), py::arg("t0") = 0.0);
  m.def("hf2", [](const ModelParams& p, const DArray& h) { return hf2(p, to_disorder(h)).matrix; },
        py::arg("params"), py::arg("fields"));
  m.def(
      "truncated_evolve",
      [](const CArray& state, const ModelParams& p, const DArray& h, int order) {
        return from_state(truncated_evolve(to_state(state), p, to_disorder(h), order));
      },
      py::arg("state"), py::arg("params"), py::arg("fields"), py::arg("order"));
  m.def(
      "fidelity", [](const CArray& a, const CArray& b) { return fidelity(to_state(a), to_state(b)); },
      py::arg("a"), py::arg("b"));

  m.def(
      "random_circuit_state",
      [](int L, int layers, std::uint64_t seed, std::uint64_t index, bool no_repeat, bool final_hadamard) {
        CircuitOptions opt{no_repeat, final_hadamard};
        auto rng = realization_rng(seed, index, StreamTag::kCircuit);
        return from_state(simulate_circuit(build_circuit(L, layers, rng, opt), L, opt));
      },
      py::arg("L"), py::arg("layers"), py::arg("seed"), py::arg("index") = 0, py::arg("no_repeat") = false,
      py::arg("final_hadamard") = false,
      "State after a brickwork random circuit drawn from the circuit stream (seed, index).");

  m.def("pt_density", &pt_density, py::arg("x"));
  m.def("pt_entropy", &pt_entropy, py::arg("L"));
  m.def("shannon_entropy", [](const DArray& p) { return shannon_entropy({p.data(), static_cast<std::size_t>(p.size())}); },
        py::arg("p"));
  m.def(
      "kl_discrete",
      [](const DArray& P, const DArray& Q) {
        return kl_discrete({P.data(), static_cast<std::size_t>(P.size())},
                           {Q.data(), static_cast<std::size_t>(Q.size())});
      },
      py::arg("P"), py::arg("Q"));
  m.def(
      "kl_to_pt",
      [](const DArray& probs, int bins, double x_max) {
        if (probs.ndim() != 2) throw ArgumentError("probs must have shape (realizations, N)");
        ProbSampleSet s;
        const auto D = static_cast<std::size_t>(probs.shape(0));
        const auto N = static_cast<std::size_t>(probs.shape(1));
        for (std::size_t d = 0; d < D; ++d) s.add_realization({probs.data() + d * N, N});
        const auto est = kl_to_pt(s, Binning{bins, x_max});
        return py::make_tuple(est.value, est.low_statistics);
      },
      py::arg("probs"), py::arg("bins") = 48, py::arg("x_max") = 12.0,
      "Binned KL of the pooled x = N p samples to Porter-Thomas; returns (value, low_statistics).");
  m.def(
      "ensemble_density",
      [](const std::string& kind, double r) {
        if (kind == "COE") return ensemble_density(Ensemble::kCOE, r);
        if (kind == "POI") return ensemble_density(Ensemble::kPOI, r);
        if (kind == "GOE") return ensemble_density(Ensemble::kGOE, r);
        throw ArgumentError("ensemble must be COE, POI or GOE");
      },
      py::arg("kind"), py::arg("r"));
  m.def(
      "haar_state",
      [](std::size_t N, std::uint64_t seed, std::uint64_t index) {
        auto rng = realization_rng(seed, index, StreamTag::kHaar);
        return from_state(haar_state(N, rng));
      },
      py::arg("N"), py::arg("seed"), py::arg("index") = 0);

  m.def(
      "exact_boltzmann",
      [](const std::vector<double>& a, const std::vector<double>& b, double temperature) {
        return from_vector(exact_boltzmann(BoltzmannModel{a, b, temperature}));
      },
      py::arg("a"), py::arg("b"), py::arg("temperature") = 1.0,
      "Gibbs weights over all 2^L configurations; b holds b_ij for i<j row by row.");

  m.def(
      "run_experiment",
      [](const std::string& experiment, const py::dict& config, bool write_files) {
        const auto c = config_from(experiment, config);
        RunOptions opt;
        opt.write_files = write_files;
        ExperimentResult r;
        {
          py::gil_scoped_release release;
          r = run_experiment(c, opt);
        }
        return tables_to_dict(r);
      },
      py::arg("experiment"), py::arg("config") = py::dict(), py::arg("write_files") = false,
      "Runs an experiment with config overrides; returns {table: {column: array}}.");
  m.def(
      "default_config",
      [](const std::string& experiment) {
        return py::module_::import("json").attr("loads")(config_json(default_config(parse_experiment(experiment))));
      },
      py::arg("experiment"));

  m.attr("__version__") = std::string(version());
}
