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

#include "qchain/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lapack.hpp"

namespace qchain {

namespace {

// amps[k] *= phase[k], written out in reals so the loop vectorizes without
// the NaN-recovery path of std::complex multiplication.
void multiply_phases(std::span<Complex> amps, const std::vector<Complex>& phase) {
  auto* a = reinterpret_cast<double*>(amps.data());
  const auto* p = reinterpret_cast<const double*>(phase.data());
  const std::size_t n = amps.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = a[2 * k];
    const double ai = a[2 * k + 1];
    const double pr = p[2 * k];
    const double pi = p[2 * k + 1];
    a[2 * k] = ar * pr - ai * pi;
    a[2 * k + 1] = ar * pi + ai * pr;
  }
}

// exp(-i theta X) on every site: (a, b) -> (c a - i s b, c b - i s a).
void rotate_all_sites(std::span<Complex> amps, int sites, double c, double s) {
  auto* a = reinterpret_cast<double*>(amps.data());
  const std::size_t n = amps.size();
  for (int q = 0; q < sites; ++q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t base = 0; base < n; base += 2 * bit) {
      for (std::size_t k = base; k < base + bit; ++k) {
        double* x = a + 2 * k;
        double* y = a + 2 * (k + bit);
        const double xr = x[0], xi = x[1], yr = y[0], yi = y[1];
        x[0] = c * xr + s * yi;
        x[1] = c * xi - s * yr;
        y[0] = c * yr + s * xi;
        y[1] = c * yi - s * xr;
      }
    }
  }
}

}  // namespace

void IntegratorConfig::validate() const {
  if (substeps_per_cycle < 8 || substeps_per_cycle % 2 != 0) {
    throw ConfigError("IntegratorConfig: substeps_per_cycle must be even and >= 8, got " +
                      std::to_string(substeps_per_cycle));
  }
  if (!(convergence_tol > 0.0)) throw ConfigError("IntegratorConfig: convergence_tol must be > 0");
}

CyclePropagator::CyclePropagator(const ModelParams& params, const DisorderRealization& disorder,
                                 Envelope envelope, const IntegratorConfig& integrator)
    : sites_(params.L) {
  params.validate();
  disorder.validate(params);
  integrator.validate();

  const int K = integrator.substeps_per_cycle;
  const double dt = params.period() / K;
  const auto energies = diagonal_energies(params, disorder);
  half_phase_.resize(energies.size());
  full_phase_.resize(energies.size());
  for (std::size_t k = 0; k < energies.size(); ++k) {
    half_phase_[k] = std::polar(1.0, -0.5 * energies[k] * dt);
    full_phase_[k] = std::polar(1.0, -energies[k] * dt);
  }
  cos_.resize(static_cast<std::size_t>(K));
  sin_.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const double t_mid = (k + 0.5) * dt;
    const double theta = envelope_value(envelope, params.omega, t_mid) * params.F * dt;
    cos_[static_cast<std::size_t>(k)] = std::cos(theta);
    sin_[static_cast<std::size_t>(k)] = std::sin(theta);
  }
}

void CyclePropagator::apply_in_place(std::span<Complex> amps) const {
  if (amps.size() != half_phase_.size()) {
    throw ArgumentError("CyclePropagator: state dimension does not match chain length");
  }
  const std::size_t K = cos_.size();
  multiply_phases(amps, half_phase_);
  for (std::size_t k = 0; k < K; ++k) {
    if (sin_[k] != 0.0) rotate_all_sites(amps, sites_, cos_[k], sin_[k]);
    multiply_phases(amps, k + 1 == K ? half_phase_ : full_phase_);
  }
}

StateVector CyclePropagator::apply(const StateVector& state) const {
  require_normalized(state, 1e-10, "propagate_cycle");
  std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
  apply_in_place(amps);
  return StateVector(std::move(amps));
}

StateVector propagate_cycle(const StateVector& state, const ModelParams& params,
                            const DisorderRealization& disorder, Envelope envelope,
                            const IntegratorConfig& integrator) {
  const CyclePropagator step(params, disorder, envelope, integrator);
  if (state.num_sites() != params.L) {
    throw ArgumentError("propagate_cycle: state has " + std::to_string(state.num_sites()) +
                        " sites, params have " + std::to_string(params.L));
  }
  return step.apply(state);
}

Eigen::MatrixXcd floquet_unitary(const ModelParams& params, const DisorderRealization& disorder,
                                 Envelope envelope, const IntegratorConfig& integrator,
                                 int dense_limit) {
  params.validate();
  if (params.L > dense_limit) {
    throw ResourceError("floquet_unitary: L = " + std::to_string(params.L) +
                        " exceeds dense limit " + std::to_string(dense_limit));
  }
  const CyclePropagator step(params, disorder, envelope, integrator);
  const auto n = static_cast<Eigen::Index>(params.dimension());
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    step.apply_in_place(std::span<Complex>(U.col(j).data(), static_cast<std::size_t>(n)));
  }
  return U;
}

double unitarity_residual(const Eigen::MatrixXcd& U) {
  if (U.rows() != U.cols()) throw ArgumentError("unitarity_residual: matrix not square");
  const Eigen::MatrixXcd G = U.adjoint() * U;
  return (G - Eigen::MatrixXcd::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff();
}

FloquetSpectrum eigenphases(const Eigen::MatrixXcd& U) {
  if (U.rows() != U.cols() || U.rows() == 0) {
    throw ArgumentError("eigenphases: expected a non-empty square matrix");
  }
  const double residual = unitarity_residual(U);
  if (!(residual < 1e-8)) {
    std::ostringstream msg;
    msg << "eigenphases: matrix is not unitary (residual " << residual << ")";
    throw NumericError(msg.str());
  }
  const Eigen::VectorXcd lambda = detail::general_eigenvalues(U);

  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  FloquetSpectrum spectrum;
  spectrum.phases.reserve(static_cast<std::size_t>(lambda.size()));
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    spectrum.moduli_error = std::max(spectrum.moduli_error, std::abs(std::abs(lambda[i]) - 1.0));
    double theta = std::arg(lambda[i]);
    if (theta < 0.0) theta += kTwoPi;
    if (theta >= kTwoPi) theta -= kTwoPi;
    spectrum.phases.push_back(theta);
  }
  if (!(spectrum.moduli_error < 1e-8)) {
    throw NumericError("eigenphases: eigenvalue moduli deviate from 1 by " +
                       std::to_string(spectrum.moduli_error));
  }
  std::sort(spectrum.phases.begin(), spectrum.phases.end());
  return spectrum;
}

std::vector<StateVector> evolve_quenched(const StateVector& state0, const ModelParams& params,
                                         std::span<const DisorderRealization> realizations,
                                         Envelope envelope, const IntegratorConfig& integrator) {
  require_normalized(state0, 1e-10, "evolve_quenched");
  if (state0.num_sites() != params.L) throw ArgumentError("evolve_quenched: dimension mismatch");
  std::vector<StateVector> out;
  out.reserve(realizations.size());
  std::vector<Complex> amps(state0.amplitudes().begin(), state0.amplitudes().end());
  for (const auto& disorder : realizations) {
    const CyclePropagator step(params, disorder, envelope, integrator);
    step.apply_in_place(amps);
    out.emplace_back(amps);
  }
  return out;
}

}  // namespace qchain
