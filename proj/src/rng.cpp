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

#include "qchain/rng.hpp"

namespace qchain {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Philox4x32(Key key, std::uint64_t stream_id) : key_(key), stream_id_(stream_id) {}

Philox4x32::Block Philox4x32::encrypt(Block ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

void Philox4x32::refill() {
  const Block ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                  static_cast<std::uint32_t>(stream_id_),
                  static_cast<std::uint32_t>(stream_id_ >> 32)};
  buffer_ = encrypt(ctr, key_);
  ++block_;
  next_ = 0;
}

Philox4x32::result_type Philox4x32::operator()() {
  if (next_ == 4) refill();
  return buffer_[next_++];
}

void Philox4x32::discard(std::uint64_t n) {
  const std::uint64_t buffered = 4 - next_;
  if (n <= buffered) {
    next_ += static_cast<unsigned>(n);
    return;
  }
  n -= buffered;
  block_ += n / 4;
  next_ = 4;
  const auto rest = static_cast<unsigned>(n % 4);
  if (rest != 0) {
    refill();
    next_ = rest;
  }
}

std::string_view to_string(StreamTag tag) {
  switch (tag) {
    case StreamTag::kDisorder:
      return "disorder";
    case StreamTag::kCircuit:
      return "circuit";
    case StreamTag::kModel:
      return "model";
    case StreamTag::kSamples:
      return "samples";
    case StreamTag::kCandidates:
      return "candidates";
    case StreamTag::kHaar:
      return "haar";
    case StreamTag::kShots:
      return "shots";
    case StreamTag::kCalibration:
      return "calibration";
  }
  return "?";
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Philox4x32 realization_rng(std::uint64_t seed, std::uint64_t realization_index, StreamTag tag) {
  const std::uint64_t k = mix64(mix64(seed) ^ static_cast<std::uint64_t>(tag));
  return Philox4x32({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)},
                    realization_index);
}

}  // namespace qchain
