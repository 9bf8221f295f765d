//
// Copyright 2026 The dpfix Authors.
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
//

// Counter-based random streams. Every random quantity in a run is drawn
// from a substream addressed by (seed, domain, a, b), e.g. the privacy noise
// of block b at iteration k lives at (seed, kNoise, k, b). Changing the block
// schedule, the evaluation order or the thread count therefore never changes
// which numbers a given block receives.

#ifndef DPFIX_RNG_H_
#define DPFIX_RNG_H_

#include <cstdint>
#include <limits>
#include <span>

namespace dpfix {

enum class StreamDomain : std::uint64_t {
  kNoise = 1,
  kSchedule = 2,
  kUserSampling = 3,
  kWalk = 4,
  kData = 5,
  kItemOrder = 6,
  kProbe = 7,
  kSplit = 8,
};

// SplitMix64 over a hashed starting state. Satisfies
// UniformRandomBitGenerator so it plugs into <random> distributions.
class Substream {
 public:
  using result_type = std::uint64_t;

  Substream(std::uint64_t seed, StreamDomain domain, std::uint64_t a = 0,
            std::uint64_t b = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Number of 64-bit words consumed so far.
  std::uint64_t position() const { return position_; }

 private:
  std::uint64_t state_;
  std::uint64_t position_ = 0;
};

std::uint64_t MixBits(std::uint64_t x);

// Fills `out` with i.i.d. N(0, sigma^2) draws from `stream`.
void FillGaussian(Substream& stream, double sigma, std::span<double> out);

// Convenience: the noise vector for (seed, k, block), N(0, sigma^2 I).
void NoiseBlock(std::uint64_t seed, std::uint64_t k, std::uint64_t block,
                double sigma, std::span<double> out);

}  // namespace dpfix

#endif  // DPFIX_RNG_H_
