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

#include "qchain/magnus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lapack.hpp"

namespace qchain {

namespace {

void check_dense(const ModelParams& params, const DisorderRealization& disorder, int dense_limit,
                 const char* what) {
  params.validate();
  disorder.validate(params);
  if (params.L > dense_limit) {
    throw ResourceError(std::string(what) + ": L = " + std::to_string(params.L) +
                        " exceeds dense limit " + std::to_string(dense_limit));
  }
}

Eigen::MatrixXcd zero_matrix(const ModelParams& params) {
  const auto n = static_cast<Eigen::Index>(params.dimension());
  return Eigen::MatrixXcd::Zero(n, n);
}

DenseOperator hermitian_operator(Eigen::MatrixXcd m) {
  DenseOperator op{std::move(m), true};
  return op;
}

}  // namespace

double DenseOperator::hermiticity_error() const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

void add_pauli_string(Eigen::MatrixXcd& M, int L, const std::vector<PauliFactor>& factors,
                      Complex coefficient) {
  const std::size_t n = std::size_t{1} << L;
  if (M.rows() != static_cast<Eigen::Index>(n) || M.cols() != M.rows()) {
    throw ArgumentError("add_pauli_string: matrix size does not match L");
  }
  std::size_t flip = 0;
  for (const auto& f : factors) {
    if (f.site < 1 || f.site > L) throw ArgumentError("add_pauli_string: site out of range");
    if (f.axis != 'X' && f.axis != 'Y' && f.axis != 'Z') {
      throw ArgumentError("add_pauli_string: axis must be X, Y or Z");
    }
    if (f.axis != 'Z') flip ^= std::size_t{1} << (f.site - 1);
  }
  // P|z> = amp(z) |z ^ flip>, with Y|0> = i|1>, Y|1> = -i|0>, Z|1> = -|1>.
  for (std::size_t z = 0; z < n; ++z) {
    Complex amp = coefficient;
    for (const auto& f : factors) {
      const bool down = ((z >> (f.site - 1)) & 1U) != 0U;
      if (f.axis == 'Z' && down) amp = -amp;
      if (f.axis == 'Y') amp *= down ? Complex{0.0, -1.0} : Complex{0.0, 1.0};
    }
    M(static_cast<Eigen::Index>(z ^ flip), static_cast<Eigen::Index>(z)) += amp;
  }
}

DenseOperator hf0(const ModelParams& params, const DisorderRealization& disorder,
                  int dense_limit) {
  check_dense(params, disorder, dense_limit, "hf0");
  Eigen::MatrixXcd m = zero_matrix(params);
  const auto e = diagonal_energies(params, disorder);
  for (std::size_t k = 0; k < e.size(); ++k) {
    m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = e[k];
  }
  for (int j = 1; j <= params.L; ++j) add_pauli_string(m, params.L, {{j, 'X'}}, 0.5 * params.F);
  return hermitian_operator(std::move(m));
}

DenseOperator hf1(const ModelParams& params, const DisorderRealization& disorder, double t0,
                  int dense_limit) {
  check_dense(params, disorder, dense_limit, "hf1");
  Eigen::MatrixXcd m = zero_matrix(params);
  const double phase = params.omega * t0;
  double s = std::sin(phase);
  // sin vanishes at integer multiples of pi; drop the rounding residue there.
  if (std::abs(s) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(phase))) {
    s = 0.0;
  }
  const double pref = params.F * s / params.omega;
  if (pref == 0.0) return hermitian_operator(std::move(m));
  const int L = params.L;
  for (int j = 1; j <= L; ++j) {
    add_pauli_string(m, L, {{j, 'Y'}}, pref * disorder.h[static_cast<std::size_t>(j - 1)]);
  }
  for (int j = 1; j < L; ++j) {
    add_pauli_string(m, L, {{j, 'Y'}, {j + 1, 'Z'}}, pref * params.J);
    add_pauli_string(m, L, {{j, 'Z'}, {j + 1, 'Y'}}, pref * params.J);
  }
  return hermitian_operator(std::move(m));
}

DenseOperator hf2(const ModelParams& params, const DisorderRealization& disorder,
                  int dense_limit) {
  check_dense(params, disorder, dense_limit, "hf2");
  Eigen::MatrixXcd m = zero_matrix(params);
  const int L = params.L;
  const double F = params.F;
  const double J = params.J;
  const double w2 = params.omega * params.omega;
  const auto h = [&](int j) { return disorder.h[static_cast<std::size_t>(j - 1)]; };
  if (F == 0.0) return hermitian_operator(std::move(m));

  const double a = 2.0 * F / w2;
  for (int j = 1; j <= L; ++j) add_pauli_string(m, L, {{j, 'X'}}, a * h(j) * h(j));
  for (int j = 1; j < L; ++j) {
    add_pauli_string(m, L, {{j, 'X'}, {j + 1, 'Z'}}, a * 2.0 * J * h(j));
    add_pauli_string(m, L, {{j, 'Z'}, {j + 1, 'X'}}, a * 2.0 * J * h(j + 1));
    add_pauli_string(m, L, {{j, 'X'}}, a * J * J);
    add_pauli_string(m, L, {{j + 1, 'X'}}, a * J * J);
  }
  for (int j = 1; j + 2 <= L; ++j) {
    add_pauli_string(m, L, {{j, 'Z'}, {j + 1, 'X'}, {j + 2, 'Z'}}, a * 2.0 * J * J);
  }

  const double b = -5.0 * F * F / (4.0 * w2);
  for (int j = 1; j <= L; ++j) add_pauli_string(m, L, {{j, 'Z'}}, b * h(j));
  for (int j = 1; j < L; ++j) {
    add_pauli_string(m, L, {{j, 'Z'}, {j + 1, 'Z'}}, b * 2.0 * J);
    add_pauli_string(m, L, {{j, 'Y'}, {j + 1, 'Y'}}, -b * 2.0 * J);
  }
  return hermitian_operator(std::move(m));
}

StateVector truncated_evolve(const StateVector& state0, const ModelParams& params,
                             const DisorderRealization& disorder, int order, int dense_limit) {
  if (order != 0 && order != 2) {
    throw ArgumentError("truncated_evolve: order must be 0 or 2, got " + std::to_string(order));
  }
  if (state0.num_sites() != params.L) throw ArgumentError("truncated_evolve: dimension mismatch");
  require_normalized(state0, 1e-10, "truncated_evolve");

  Eigen::MatrixXcd h = hf0(params, disorder, dense_limit).matrix;
  if (order == 2) h += hf2(params, disorder, dense_limit).matrix;

  const auto eig = detail::hermitian_eigen(std::move(h));
  const auto in = state0.amplitudes();
  const Eigen::Map<const Eigen::VectorXcd> psi(in.data(), static_cast<Eigen::Index>(in.size()));
  Eigen::VectorXcd coeffs = eig.vectors.adjoint() * psi;
  const double T = params.period();
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs[k] *= std::polar(1.0, -eig.values[k] * T);
  const Eigen::VectorXcd out = eig.vectors * coeffs;
  return StateVector(std::vector<Complex>(out.data(), out.data() + out.size()));
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) {
    throw ArgumentError("fidelity: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
  }
  Complex overlap{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(a[i]) * b[i];
  return std::clamp(std::norm(overlap), 0.0, 1.0);
}

}  // namespace qchain
