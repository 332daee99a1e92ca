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

#include "lapack.hpp"

#include <lapacke.h>

#include <string>

#include "qchain/errors.hpp"

namespace qchain::detail {

namespace {
lapack_complex_double* as_lapack(std::complex<double>* p) {
  return reinterpret_cast<lapack_complex_double*>(p);
}
}  // namespace

Eigen::VectorXcd general_eigenvalues(Eigen::MatrixXcd A) {
  const auto n = static_cast<lapack_int>(A.rows());
  Eigen::VectorXcd w(n);
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, as_lapack(A.data()), n,
                                        as_lapack(w.data()), nullptr, 1, nullptr, 1);
  if (info != 0) throw NumericError("zgeev failed with info = " + std::to_string(info));
  return w;
}

HermitianEigen hermitian_eigen(Eigen::MatrixXcd A) {
  const auto n = static_cast<lapack_int>(A.rows());
  Eigen::VectorXd w(n);
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, as_lapack(A.data()), n, w.data());
  if (info != 0) throw NumericError("zheevd failed with info = " + std::to_string(info));
  return {std::move(w), std::move(A)};
}

}  // namespace qchain::detail
