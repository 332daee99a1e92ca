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

// Thin LAPACKE wrappers for the two dense eigenproblems the library solves.

#pragma once

#include <Eigen/Dense>

namespace qchain::detail {

/// Eigenvalues of a general complex matrix (zgeev, no vectors). Takes A by value
/// because LAPACK overwrites it.
Eigen::VectorXcd general_eigenvalues(Eigen::MatrixXcd A);

struct HermitianEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

/// Full eigendecomposition of a Hermitian matrix (zheevd, lower triangle).
HermitianEigen hermitian_eigen(Eigen::MatrixXcd A);

}  // namespace qchain::detail
