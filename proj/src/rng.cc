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

#include "dpfix/rng.h"

#include <random>

namespace dpfix {

std::uint64_t MixBits(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Substream::Substream(std::uint64_t seed, StreamDomain domain, std::uint64_t a,
                     std::uint64_t b) {
  std::uint64_t h = MixBits(seed);
  h = MixBits(h ^ static_cast<std::uint64_t>(domain));
  h = MixBits(h ^ a);
  h = MixBits(h ^ (b + 0x632be59bd9b4e019ULL));
  state_ = h;
}

Substream::result_type Substream::operator()() {
  ++position_;
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void FillGaussian(Substream& stream, double sigma, std::span<double> out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : out) v = sigma * normal(stream);
}

void NoiseBlock(std::uint64_t seed, std::uint64_t k, std::uint64_t block,
                double sigma, std::span<double> out) {
  Substream stream(seed, StreamDomain::kNoise, k, block);
  FillGaussian(stream, sigma, out);
}

}  // namespace dpfix
