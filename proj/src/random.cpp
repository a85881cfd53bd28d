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
#include "weakmeas/random.hpp"

#include <boost/random/normal_distribution.hpp>

namespace weakmeas {

namespace {

constexpr std::uint64_t kPhiloxMultiplier = 0xD2B74407B1CE6E93ULL;
constexpr std::uint64_t kPhiloxWeyl = 0x9E3779B97F4A7C15ULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) noexcept {
  const unsigned __int128 product = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(product >> 64);
  lo = static_cast<std::uint64_t>(product);
}

}  // namespace

void philox2x64(std::uint64_t c0, std::uint64_t c1, std::uint64_t key, std::uint64_t out[2]) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) key += kPhiloxWeyl;
    std::uint64_t hi, lo;
    mulhilo(kPhiloxMultiplier, c0, hi, lo);
    c0 = hi ^ key ^ c1;
    c1 = lo;
  }
  out[0] = c0;
  out[1] = c1;
}

RandomStream::result_type RandomStream::operator()() noexcept {
  if (buffered_ == 0) {
    philox2x64(block_++, stream_index_, seed_, buffer_);
    buffered_ = 2;
  }
  return buffer_[2 - buffered_--];
}

double RandomStream::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  // Boost's ziggurat is a fixed algorithm, unlike std::normal_distribution,
  // so sequences agree across standard libraries.
  boost::random::normal_distribution<double> dist;
  return dist(*this);
}

std::size_t RandomStream::categorical(std::span<const double> weights) noexcept {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    acc += weights[i];
    if (u < acc) return i;
  }
  return last_positive;
}

}  // namespace weakmeas
