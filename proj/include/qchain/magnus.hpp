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
 * Closed-form high-frequency (Magnus) terms of the Floquet Hamiltonian for the
 * sinusoidal drive, truncated stroboscopic evolution, and state fidelity.
 *
 * Orders:
 *   H^(0) = H0 + H_d / 2                                     (time average)
 *   H^(1) = (F sin(w t0) / w) [sum h_j Y_j + J sum (Y_j Z_j+1 + Z_j Y_j+1)]
 *   H^(2) = (2F/w^2) [sum h_j^2 X_j + 2J sum (h_j X_j Z_j+1 + h_j+1 Z_j X_j+1)
 *                     + J^2 sum (X_j + X_j+1) + 2J^2 sum Z_j X_j+1 Z_j+2]
 *         - (5F^2/4w^2) [sum h_j Z_j + 2J sum (Z_j Z_j+1 - Y_j Y_j+1)]   (t0 = 0)
 *
 * All sums use open-boundary ranges.
 */

#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qchain/evolution.hpp"
#include "qchain/spin_core.hpp"

namespace qchain {

struct DenseOperator {
  Eigen::MatrixXcd matrix;
  bool hermitian = false;

  /// max_ij |M - M^dagger|.
  [[nodiscard]] double hermiticity_error() const;
};

/// One factor of a Pauli string: 'X', 'Y' or 'Z' acting on a 1-based site.
struct PauliFactor {
  int site;
  char axis;
};

/// M += coefficient * (tensor product of the factors), identity elsewhere.
void add_pauli_string(Eigen::MatrixXcd& M, int L, const std::vector<PauliFactor>& factors,
                      Complex coefficient);

[[nodiscard]] DenseOperator hf0(const ModelParams& params, const DisorderRealization& disorder,
                                int dense_limit = kDefaultDenseLimit);
[[nodiscard]] DenseOperator hf1(const ModelParams& params, const DisorderRealization& disorder,
                                double t0, int dense_limit = kDefaultDenseLimit);
[[nodiscard]] DenseOperator hf2(const ModelParams& params, const DisorderRealization& disorder,
                                int dense_limit = kDefaultDenseLimit);

/// exp(-i (H^(0) + ... + H^(order)) T) |state0>, with t0 = 0 so H^(1) vanishes.
/// order must be 0 or 2; anything else throws ArgumentError.
[[nodiscard]] StateVector truncated_evolve(const StateVector& state0, const ModelParams& params,
                                           const DisorderRealization& disorder, int order,
                                           int dense_limit = kDefaultDenseLimit);

/// |<a|b>|^2. Throws ArgumentError if the dimensions differ.
[[nodiscard]] double fidelity(const StateVector& a, const StateVector& b);

}  // namespace qchain
