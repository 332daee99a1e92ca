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
 * One-period propagation of the driven chain, the dense Floquet unitary and
 * its eigenphases, and quenched (per-cycle redrawn) disorder evolution.
 *
 * A cycle is split into K substeps of length dt = T/K. Each substep applies
 *
 *     exp(-i H0 dt/2) * exp(-i f(t_mid) dt H_d) * exp(-i H0 dt/2)
 *
 * where H0 is diagonal (a phase per basis state) and exp(-i theta sum X_i)
 * factorizes into single-site rotations. Adjacent half-step phases are fused.
 */

#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "qchain/spin_core.hpp"

namespace qchain {

/// Dense operations refuse chains longer than this unless told otherwise.
inline constexpr int kDefaultDenseLimit = 12;

struct IntegratorConfig {
  int substeps_per_cycle = 256;
  /// Largest accepted fidelity deficit between K and 2K substeps.
  double convergence_tol = 1e-9;

  /// Throws ConfigError unless K >= 8, K even, tol > 0.
  void validate() const;
};

struct FloquetSpectrum {
  std::vector<double> phases;  ///< ascending, each in [0, 2 pi)
  double moduli_error = 0.0;   ///< max | |lambda_n| - 1 |
};

/// Precomputed one-cycle propagator for a fixed (params, disorder, envelope, K).
/// Reuse it when applying the same cycle to many states.
class CyclePropagator {
 public:
  CyclePropagator(const ModelParams& params, const DisorderRealization& disorder,
                  Envelope envelope, const IntegratorConfig& integrator);

  /// Advances amps (length 2^L) by one drive period in place.
  void apply_in_place(std::span<Complex> amps) const;
  /// Throws StateError if state is not normalized to 1e-10.
  [[nodiscard]] StateVector apply(const StateVector& state) const;

  [[nodiscard]] int num_sites() const { return sites_; }
  [[nodiscard]] int substeps() const { return static_cast<int>(cos_.size()); }

 private:
  int sites_;
  std::vector<Complex> half_phase_;
  std::vector<Complex> full_phase_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// U |state> for one drive period.
[[nodiscard]] StateVector propagate_cycle(const StateVector& state, const ModelParams& params,
                                          const DisorderRealization& disorder, Envelope envelope,
                                          const IntegratorConfig& integrator);

/// Dense N x N one-cycle unitary; column j is propagate_cycle of basis state j.
/// Throws ResourceError when L > dense_limit.
[[nodiscard]] Eigen::MatrixXcd floquet_unitary(const ModelParams& params,
                                               const DisorderRealization& disorder,
                                               Envelope envelope,
                                               const IntegratorConfig& integrator,
                                               int dense_limit = kDefaultDenseLimit);

/// max_ij |(U^dagger U - I)_ij|.
[[nodiscard]] double unitarity_residual(const Eigen::MatrixXcd& U);

/// Eigenphases arg(lambda) mapped to [0, 2 pi) and sorted. Throws NumericError
/// if U is not unitary within 1e-8.
[[nodiscard]] FloquetSpectrum eigenphases(const Eigen::MatrixXcd& U);

/// States after each cycle, |psi_m> = U_m ... U_1 |psi_0>, for m = 1..size(realizations).
[[nodiscard]] std::vector<StateVector> evolve_quenched(
    const StateVector& state0, const ModelParams& params,
    std::span<const DisorderRealization> realizations, Envelope envelope,
    const IntegratorConfig& integrator);

}  // namespace qchain
