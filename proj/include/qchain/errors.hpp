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

#pragma once

#include <stdexcept>
#include <string>

namespace qchain {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument value (out-of-range site, bad order, mismatched sizes).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A state vector violated its normalization contract.
class StateError : public Error {
 public:
  using Error::Error;
};

/// Invalid integrator / experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds a configured resource limit (dense size, enumeration size).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Numerical contract failed (unitarity, convergence).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// KL divergence is infinite: P has support where Q vanishes.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace qchain
