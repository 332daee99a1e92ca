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
 * Counter-based random streams. Every (seed, realization, purpose) triple maps
 * to its own Philox4x32-10 stream, so a realization's draws do not depend on
 * which worker runs it or in what order.
 */

#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace qchain {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11), wrapped as a
/// UniformRandomBitGenerator. Counter words 0-1 enumerate output blocks;
/// words 2-3 hold a fixed 64-bit stream id.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(Key key, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  void discard(std::uint64_t n);

  /// The raw bijection: ten Philox rounds of counter under key.
  [[nodiscard]] static Block encrypt(Block counter, Key key);

  friend bool operator==(const Philox4x32&, const Philox4x32&) = default;

 private:
  void refill();

  Key key_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  unsigned next_ = 4;  // index into buffer_; 4 means empty
};

/// Purpose tags separating the streams a single realization consumes.
enum class StreamTag : std::uint32_t {
  kDisorder = 1,
  kCircuit = 2,
  kModel = 3,
  kSamples = 4,
  kCandidates = 5,
  kHaar = 6,
  kShots = 7,
  kCalibration = 8,
};

[[nodiscard]] std::string_view to_string(StreamTag tag);

/// Reproducible stream for (seed, realization_index, tag). The key is a mix of
/// seed and tag; the realization index is the stream id inside the counter.
[[nodiscard]] Philox4x32 realization_rng(std::uint64_t seed, std::uint64_t realization_index,
                                         StreamTag tag);

/// SplitMix64 finalizer; used for key derivation.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x);

}  // namespace qchain
