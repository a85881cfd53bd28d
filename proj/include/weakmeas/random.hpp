// Copyright 2026 The weakmeas Authors
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

#include <cstdint>
#include <limits>
#include <span>

namespace weakmeas {

/// Counter-based random stream (Philox2x64-10).
///
/// The 128-bit counter is (block, stream_index) and the key is the seed, so
/// the draw sequence depends only on (seed, stream_index) and the number of
/// draws taken. Distinct stream indices under one seed never share a block.
/// Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream_index) noexcept
      : seed_(seed), stream_index_(stream_index) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Standard normal deviate.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  /// Index drawn with probability proportional to `weights[i]`.
  std::size_t categorical(std::span<const double> weights) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::uint64_t block_ = 0;
  std::uint64_t buffer_[2] = {0, 0};
  int buffered_ = 0;
};

/// One Philox2x64-10 block: encrypts the counter (c0, c1) under `key`.
void philox2x64(std::uint64_t c0, std::uint64_t c1, std::uint64_t key, std::uint64_t out[2]) noexcept;

/// Substream for one realization: key = master_seed, counter high word =
/// realization_index.
inline RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t realization_index) noexcept {
  return RandomStream(master_seed, realization_index);
}

}  // namespace weakmeas
