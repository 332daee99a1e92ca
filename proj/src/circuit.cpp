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

#include "qchain/circuit.hpp"

#include <cmath>
#include <numbers>

namespace qchain {

namespace {

void apply_single(std::vector<Complex>& amps, int site, const std::array<Complex, 4>& u) {
  const std::size_t bit = std::size_t{1} << (site - 1);
  const std::size_t n = amps.size();
  for (std::size_t base = 0; base < n; base += 2 * bit) {
    for (std::size_t k = base; k < base + bit; ++k) {
      const Complex a0 = amps[k];
      const Complex a1 = amps[k + bit];
      amps[k] = u[0] * a0 + u[1] * a1;
      amps[k + bit] = u[2] * a0 + u[3] * a1;
    }
  }
}

void apply_cz(std::vector<Complex>& amps, int i, int j) {
  const std::size_t mask = (std::size_t{1} << (i - 1)) | (std::size_t{1} << (j - 1));
  for (std::size_t k = 0; k < amps.size(); ++k) {
    if ((k & mask) == mask) amps[k] = -amps[k];
  }
}

void apply_layer(std::vector<Complex>& amps, const CircuitLayer& layer) {
  for (std::size_t q = 0; q < layer.single_qubit_gates.size(); ++q) {
    apply_single(amps, static_cast<int>(q) + 1, gate_matrix(layer.single_qubit_gates[q]));
  }
  for (const auto& [i, j] : layer.cz_bonds) apply_cz(amps, i, j);
}

void check_circuit(const std::vector<CircuitLayer>& circuit, int L) {
  if (L < 1 || L > kMaxSites) throw ArgumentError("simulate_circuit: invalid L");
  for (const auto& layer : circuit) {
    if (layer.single_qubit_gates.size() != static_cast<std::size_t>(L)) {
      throw ArgumentError("simulate_circuit: layer has wrong number of gates");
    }
    for (const auto& [i, j] : layer.cz_bonds) {
      if (i < 1 || j != i + 1 || j > L) throw ArgumentError("simulate_circuit: invalid CZ bond");
    }
  }
}

std::vector<Complex> with_final_hadamards(std::vector<Complex> amps, int L) {
  const auto h = gate_matrix(Gate::kH);
  for (int q = 1; q <= L; ++q) apply_single(amps, q, h);
  return amps;
}

}  // namespace

std::string_view to_string(Gate g) {
  switch (g) {
    case Gate::kH:
      return "H";
    case Gate::kSqrtX:
      return "SQRT_X";
    case Gate::kSqrtY:
      return "SQRT_Y";
    case Gate::kT:
      return "T";
  }
  return "?";
}

std::array<Complex, 4> gate_matrix(Gate g) {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex p{0.5, 0.5};   // (1 + i) / 2
  const Complex q{0.5, -0.5};  // (1 - i) / 2
  switch (g) {
    case Gate::kH:
      return {r, r, r, -r};
    case Gate::kSqrtX:
      return {p, q, q, p};
    case Gate::kSqrtY:
      return {p, -p, p, p};
    case Gate::kT:
      return {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4.0)};
  }
  return {1.0, 0.0, 0.0, 1.0};
}

std::vector<std::pair<int, int>> brickwork_bonds(int L, int layer) {
  std::vector<std::pair<int, int>> bonds;
  const int first = (layer % 2 == 1) ? 1 : 2;
  for (int i = first; i + 1 <= L; i += 2) bonds.emplace_back(i, i + 1);
  return bonds;
}

std::vector<StateVector> simulate_circuit_layers(const std::vector<CircuitLayer>& circuit, int L,
                                                 const CircuitOptions& options) {
  check_circuit(circuit, L);
  std::vector<Complex> amps = initial_state(L).release();
  std::vector<StateVector> out;
  out.reserve(circuit.size());
  for (const auto& layer : circuit) {
    apply_layer(amps, layer);
    out.emplace_back(options.final_hadamard ? with_final_hadamards(amps, L) : amps);
  }
  return out;
}

StateVector simulate_circuit(const std::vector<CircuitLayer>& circuit, int L,
                             const CircuitOptions& options) {
  check_circuit(circuit, L);
  std::vector<Complex> amps = initial_state(L).release();
  for (const auto& layer : circuit) apply_layer(amps, layer);
  if (options.final_hadamard) amps = with_final_hadamards(std::move(amps), L);
  return StateVector(std::move(amps));
}

}  // namespace qchain
