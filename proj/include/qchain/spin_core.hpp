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
 * Chain model, basis conventions and matrix-free operators for the driven
 * disordered Ising chain
 *
 *     H(t) = sum_i h_i Z_i + J sum_i Z_i Z_{i+1} + f(t) F sum_i X_i
 *
 * with open boundaries. Basis states are indexed by an integer whose bit
 * (site - 1) encodes the spin at that site: bit 0 is z = +1, bit 1 is z = -1.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qchain/errors.hpp"

namespace qchain {

using Complex = std::complex<double>;
using BasisIndex = std::uint64_t;

/// Largest chain the library will allocate a state for (2^30 amplitudes).
inline constexpr int kMaxSites = 30;

/// Static chain parameters. Energies are in units of J.
struct ModelParams {
  int L = 9;
  double J = 1.0;
  double F = 2.5;
  double W = 5.0;
  double omega = 8.0;

  /// Drive period T = 2 pi / omega; derived, never stored.
  [[nodiscard]] double period() const { return 2.0 * std::numbers::pi / omega; }
  [[nodiscard]] std::size_t dimension() const { return std::size_t{1} << L; }

  /// Throws ArgumentError unless 1 <= L <= kMaxSites, J > 0, F >= 0, W >= 0, omega > 0.
  void validate() const;
};

/// One draw of the on-site fields h_i, each in [0, W].
struct DisorderRealization {
  std::vector<double> h;

  /// Throws ArgumentError if the length is not L or any field leaves [0, W].
  void validate(const ModelParams& params) const;
};

/// Draws h_i uniformly on [0, W].
template <class Urbg>
DisorderRealization sample_disorder(const ModelParams& params, Urbg& rng) {
  std::uniform_real_distribution<double> field(0.0, params.W);
  DisorderRealization d;
  d.h.resize(static_cast<std::size_t>(params.L));
  for (auto& hi : d.h) hi = params.W > 0.0 ? field(rng) : 0.0;
  return d;
}

/// Time dependence f(t) multiplying the transverse drive.
enum class Envelope {
  kSinusoidal,    ///< f(t) = [1 - cos(omega t)] / 2
  kConstantHalf,  ///< f(t) = 1/2
  kZero,          ///< f(t) = 0 (undriven)
};

[[nodiscard]] double envelope_value(Envelope kind, double omega, double t);
[[nodiscard]] std::string_view to_string(Envelope kind);
/// Accepts "sinusoidal", "constant-half", "zero".
[[nodiscard]] Envelope parse_envelope(std::string_view name);

/// Complex amplitudes over the 2^L computational basis states. Values are
/// immutable once constructed; operations return new vectors.
class StateVector {
 public:
  StateVector() = default;
  /// Throws ArgumentError unless the length is a power of two >= 2.
  explicit StateVector(std::vector<Complex> amplitudes);

  [[nodiscard]] std::span<const Complex> amplitudes() const { return amps_; }
  [[nodiscard]] const Complex& operator[](std::size_t i) const { return amps_[i]; }
  [[nodiscard]] std::size_t size() const { return amps_.size(); }
  [[nodiscard]] int num_sites() const { return sites_; }
  [[nodiscard]] double norm_squared() const;
  [[nodiscard]] bool is_normalized(double tol = 1e-10) const;

  /// Moves the amplitude buffer out, leaving this state empty.
  [[nodiscard]] std::vector<Complex> release() && { return std::move(amps_); }

 private:
  std::vector<Complex> amps_;
  int sites_ = 0;
};

/// z_site for a basis index; site 1 is the least significant bit.
[[nodiscard]] int basis_spin(BasisIndex index, int site, int L);

/// <z|H0|z> = sum_i h_i z_i + J sum_{i<L} z_i z_{i+1}.
[[nodiscard]] double diagonal_energy(BasisIndex index, const ModelParams& params,
                                     const DisorderRealization& disorder);

/// diagonal_energy for every basis state, in index order.
[[nodiscard]] std::vector<double> diagonal_energies(const ModelParams& params,
                                                    const DisorderRealization& disorder);

/// coefficient * sum_i X_i |state>, matrix-free. The result is not normalized.
[[nodiscard]] StateVector apply_transverse(const StateVector& state, double coefficient);

/// All spins up: amplitude 1 on index 0.
[[nodiscard]] StateVector initial_state(int L);

/// p_i = |c_i|^2. Throws StateError if the state is not normalized to 1e-10.
[[nodiscard]] std::vector<double> output_probs(const StateVector& state);

/// Throws StateError if |<psi|psi> - 1| > tol.
void require_normalized(const StateVector& state, double tol, std::string_view what);

}  // namespace qchain
