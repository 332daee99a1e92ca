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
 * One-dimensional random quantum circuits: a Hadamard layer followed by
 * layers of random single-qubit gates from {sqrt(X), sqrt(Y), T}, each layer
 * closed by nearest-neighbour CZ gates in an alternating brickwork.
 */

#pragma once

#include <array>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "qchain/spin_core.hpp"

namespace qchain {

enum class Gate { kH, kSqrtX, kSqrtY, kT };

[[nodiscard]] std::string_view to_string(Gate g);

/// 2x2 gate matrix, row-major: {u00, u01, u10, u11}.
[[nodiscard]] std::array<Complex, 4> gate_matrix(Gate g);

struct CircuitLayer {
  std::vector<Gate> single_qubit_gates;       ///< one per site, site 1 first
  std::vector<std::pair<int, int>> cz_bonds;  ///< disjoint (i, i+1), 1-based
};

struct CircuitOptions {
  /// Forbid a site from repeating its previous layer's gate.
  bool no_repeat = false;
  /// Append a Hadamard on every site after the last layer.
  bool final_hadamard = false;
};

/// Bonds (1,2),(3,4),... on odd layers and (2,3),(4,5),... on even layers.
[[nodiscard]] std::vector<std::pair<int, int>> brickwork_bonds(int L, int layer);

/// Layer 1 is all-Hadamard; layers 2..m draw each site's gate uniformly from
/// {sqrt(X), sqrt(Y), T}. Throws ArgumentError if L < 1 or m < 1.
template <class Urbg>
std::vector<CircuitLayer> build_circuit(int L, int m, Urbg& rng, const CircuitOptions& options = {}) {
  if (L < 1 || L > kMaxSites) throw ArgumentError("build_circuit: invalid L");
  if (m < 1) throw ArgumentError("build_circuit: m must be >= 1");
  constexpr std::array<Gate, 3> kRandomGates{Gate::kSqrtX, Gate::kSqrtY, Gate::kT};
  std::vector<CircuitLayer> layers(static_cast<std::size_t>(m));
  for (int layer = 1; layer <= m; ++layer) {
    auto& cur = layers[static_cast<std::size_t>(layer - 1)];
    cur.single_qubit_gates.resize(static_cast<std::size_t>(L), Gate::kH);
    cur.cz_bonds = brickwork_bonds(L, layer);
    if (layer == 1) continue;
    const auto& prev = layers[static_cast<std::size_t>(layer - 2)].single_qubit_gates;
    for (std::size_t q = 0; q < cur.single_qubit_gates.size(); ++q) {
      if (options.no_repeat && prev[q] != Gate::kH) {
        std::uniform_int_distribution<int> pick(0, 1);
        const int k = pick(rng);
        int seen = 0;
        for (Gate g : kRandomGates) {
          if (g == prev[q]) continue;
          if (seen++ == k) cur.single_qubit_gates[q] = g;
        }
      } else {
        std::uniform_int_distribution<int> pick(0, 2);
        cur.single_qubit_gates[q] = kRandomGates[static_cast<std::size_t>(pick(rng))];
      }
    }
  }
  return layers;
}

/// Runs the circuit from |0...0>, single-qubit sub-layer then CZ sub-layer.
[[nodiscard]] StateVector simulate_circuit(const std::vector<CircuitLayer>& circuit, int L,
                                           const CircuitOptions& options = {});

/// State after every layer (the final-Hadamard option applies to each
/// snapshot, as if the circuit stopped there).
[[nodiscard]] std::vector<StateVector> simulate_circuit_layers(
    const std::vector<CircuitLayer>& circuit, int L, const CircuitOptions& options = {});

}  // namespace qchain
