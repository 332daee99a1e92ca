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

#include "qchain/spin_core.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace qchain {

void ModelParams::validate() const {
  if (L < 1 || L > kMaxSites) {
    throw ArgumentError("ModelParams: L must be in [1, " + std::to_string(kMaxSites) + "], got " +
                        std::to_string(L));
  }
  if (!(J > 0.0)) throw ArgumentError("ModelParams: J must be positive");
  if (!(F >= 0.0)) throw ArgumentError("ModelParams: F must be non-negative");
  if (!(W >= 0.0)) throw ArgumentError("ModelParams: W must be non-negative");
  if (!(omega > 0.0)) throw ArgumentError("ModelParams: omega must be positive");
}

void DisorderRealization::validate(const ModelParams& params) const {
  if (h.size() != static_cast<std::size_t>(params.L)) {
    throw ArgumentError("DisorderRealization: expected " + std::to_string(params.L) +
                        " fields, got " + std::to_string(h.size()));
  }
  for (double hi : h) {
    if (!(hi >= 0.0 && hi <= params.W)) {
      std::ostringstream msg;
      msg << "DisorderRealization: field " << hi << " outside [0, " << params.W << "]";
      throw ArgumentError(msg.str());
    }
  }
}

double envelope_value(Envelope kind, double omega, double t) {
  switch (kind) {
    case Envelope::kSinusoidal:
      return 0.5 * (1.0 - std::cos(omega * t));
    case Envelope::kConstantHalf:
      return 0.5;
    case Envelope::kZero:
      return 0.0;
  }
  return 0.0;
}

std::string_view to_string(Envelope kind) {
  switch (kind) {
    case Envelope::kSinusoidal:
      return "sinusoidal";
    case Envelope::kConstantHalf:
      return "constant-half";
    case Envelope::kZero:
      return "zero";
  }
  return "?";
}

Envelope parse_envelope(std::string_view name) {
  if (name == "sinusoidal") return Envelope::kSinusoidal;
  if (name == "constant-half") return Envelope::kConstantHalf;
  if (name == "zero") return Envelope::kZero;
  throw ArgumentError("unknown envelope '" + std::string(name) +
                      "' (expected sinusoidal, constant-half or zero)");
}

StateVector::StateVector(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
  const auto n = amps_.size();
  if (n < 2 || !std::has_single_bit(n)) {
    throw ArgumentError("StateVector: length must be a power of two >= 2, got " +
                        std::to_string(n));
  }
  sites_ = std::countr_zero(n);
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& c : amps_) s += std::norm(c);
  return s;
}

bool StateVector::is_normalized(double tol) const {
  return std::abs(norm_squared() - 1.0) <= tol;
}

void require_normalized(const StateVector& state, double tol, std::string_view what) {
  const double n2 = state.norm_squared();
  if (!(std::abs(n2 - 1.0) <= tol)) {
    std::ostringstream msg;
    msg << what << ": state not normalized (|psi|^2 = " << n2 << ")";
    throw StateError(msg.str());
  }
}

int basis_spin(BasisIndex index, int site, int L) {
  if (L < 1 || L > kMaxSites) throw ArgumentError("basis_spin: invalid L");
  if (site < 1 || site > L) {
    throw ArgumentError("basis_spin: site " + std::to_string(site) + " outside 1.." +
                        std::to_string(L));
  }
  if (index >= (BasisIndex{1} << L)) throw ArgumentError("basis_spin: index out of range");
  return ((index >> (site - 1)) & 1U) != 0U ? -1 : +1;
}

double diagonal_energy(BasisIndex index, const ModelParams& params,
                       const DisorderRealization& disorder) {
  params.validate();
  disorder.validate(params);
  if (index >= params.dimension()) throw ArgumentError("diagonal_energy: index out of range");
  const int L = params.L;
  double e = 0.0;
  for (int i = 0; i < L; ++i) {
    const double zi = ((index >> i) & 1U) != 0U ? -1.0 : 1.0;
    e += disorder.h[static_cast<std::size_t>(i)] * zi;
  }
  // z_i z_{i+1} = -1 exactly where neighbouring bits differ.
  const BasisIndex domain_walls = (index ^ (index >> 1)) & ((BasisIndex{1} << (L - 1)) - 1);
  const int bonds = L - 1;
  const int walls = std::popcount(domain_walls);
  e += params.J * static_cast<double>(bonds - 2 * walls);
  return e;
}

std::vector<double> diagonal_energies(const ModelParams& params,
                                      const DisorderRealization& disorder) {
  params.validate();
  disorder.validate(params);
  const std::size_t n = params.dimension();
  std::vector<double> e(n, 0.0);
  // Built site by site so each entry costs O(1) amortized.
  for (int i = 0; i < params.L; ++i) {
    const double hi = disorder.h[static_cast<std::size_t>(i)];
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t k = 0; k < n; ++k) e[k] += (k & bit) ? -hi : hi;
  }
  for (int i = 0; i + 1 < params.L; ++i) {
    const std::size_t a = std::size_t{1} << i;
    const std::size_t b = a << 1;
    for (std::size_t k = 0; k < n; ++k) {
      const bool same = ((k & a) != 0) == ((k & b) != 0);
      e[k] += same ? params.J : -params.J;
    }
  }
  return e;
}

StateVector apply_transverse(const StateVector& state, double coefficient) {
  if (!std::isfinite(coefficient)) throw ArgumentError("apply_transverse: non-finite coefficient");
  const auto in = state.amplitudes();
  const std::size_t n = in.size();
  std::vector<Complex> out(n, Complex{0.0, 0.0});
  if (coefficient != 0.0) {
    for (int q = 0; q < state.num_sites(); ++q) {
      const std::size_t bit = std::size_t{1} << q;
      for (std::size_t k = 0; k < n; ++k) out[k] += in[k ^ bit];
    }
    for (auto& c : out) c *= coefficient;
  }
  return StateVector(std::move(out));
}

StateVector initial_state(int L) {
  if (L < 1 || L > kMaxSites) throw ArgumentError("initial_state: invalid L");
  std::vector<Complex> amps(std::size_t{1} << L, Complex{0.0, 0.0});
  amps[0] = 1.0;
  return StateVector(std::move(amps));
}

std::vector<double> output_probs(const StateVector& state) {
  require_normalized(state, 1e-10, "output_probs");
  std::vector<double> p(state.size());
  const auto a = state.amplitudes();
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(a[i]);
  return p;
}

}  // namespace qchain
