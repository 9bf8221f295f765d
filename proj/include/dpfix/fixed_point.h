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

// The private fixed-point iteration
//
//   u_{k+1,b} = u_{k,b} + rho_{k,b} lambda_k (R_b(u_k) + e_{k,b}
//                                             + eta_{k+1,b} - u_{k,b}),
//   eta_{k+1,b} ~ N(0, sigma^2 I_p),
//
// with block activations rho_k drawn from a BlockSchedule, plus the
// operators that turn it into DP-SGD and DP coordinate descent.

#ifndef DPFIX_FIXED_POINT_H_
#define DPFIX_FIXED_POINT_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "dpfix/block_vector.h"
#include "dpfix/operators.h"

namespace dpfix {

class BlockSchedule {
 public:
  enum class Kind {
    kAllBlocks,
    // One block per iteration, sweeping a fresh random permutation of the
    // blocks every B iterations.
    kCyclicPermutation,
    kBernoulliPerBlock,
    kSingleUniform,
    kSubsetUniform,
  };

  static BlockSchedule AllBlocks() { return BlockSchedule(Kind::kAllBlocks); }
  static BlockSchedule CyclicPermutation() {
    return BlockSchedule(Kind::kCyclicPermutation);
  }
  static BlockSchedule BernoulliPerBlock(double q);
  static BlockSchedule SingleUniform() {
    return BlockSchedule(Kind::kSingleUniform);
  }
  static BlockSchedule SubsetUniform(std::size_t m);

  Kind kind() const { return kind_; }
  double q() const { return q_; }
  std::size_t m() const { return m_; }

  // Activation mask rho_k in {0,1}^B. Deterministic in (seed, k).
  std::vector<std::uint8_t> Mask(std::uint64_t seed, std::size_t k,
                                 std::size_t num_blocks) const;

  // Marginal probability that a given block is active at a given iteration.
  double ActivationProbability(std::size_t num_blocks) const;

 private:
  explicit BlockSchedule(Kind kind) : kind_(kind) {}

  Kind kind_;
  double q_ = 1.0;
  std::size_t m_ = 0;
};

// Writes the error term e_{k,b} for an active block.
using ErrorInjector = std::function<void(const BlockVector& u, std::size_t k,
                                         std::size_t block,
                                         std::span<double> e)>;

struct IterationConfig {
  // A single entry is a constant step; otherwise one entry per iteration.
  std::vector<double> lambda{1.0};
  double sigma = 0.0;
  std::size_t iterations = 1;
  BlockSchedule schedule = BlockSchedule::AllBlocks();
  ErrorInjector error_injector;  // empty means e_k = 0
  std::uint64_t seed = 0;

  double LambdaAt(std::size_t k) const;
  void Validate() const;
};

struct IterationRecord {
  std::size_t k = 0;
  std::vector<std::uint8_t> active;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double dist_sq = std::numeric_limits<double>::quiet_NaN();
  // Gaussian draws made during this iteration and cumulatively. Together
  // with (seed, k, block) they locate every noise value of the run.
  std::uint64_t noise_draws = 0;
  std::uint64_t noise_draws_total = 0;
};

struct RunTrace {
  std::vector<IterationRecord> records;
  std::vector<BlockVector> iterates;  // only with TraceOptions::store_iterates
};

struct TraceOptions {
  std::optional<BlockVector> reference;
  std::function<double(const BlockVector&)> objective;
  bool store_iterates = false;
};

// One application of the update at iteration k. Inactive blocks are copied
// bit-for-bit.
BlockVector FixedPointStep(const BlockVector& u, const OperatorHandle& op,
                           const IterationConfig& config, std::size_t k,
                           IterationRecord* record = nullptr);

struct FixedPointResult {
  BlockVector u;
  RunTrace trace;
};

FixedPointResult RunFixedPoint(const BlockVector& u0, const OperatorHandle& op,
                               const IterationConfig& config,
                               const TraceOptions& options = {});

enum class ItemOrder { kCyclic, kUniform };

// Index of the item used at iteration k.
std::size_t SampledItem(ItemOrder order, std::size_t num_items,
                        std::uint64_t seed, std::size_t k);

struct EngineInstance {
  OperatorHandle op;
  IterationConfig config;
};

// DP-SGD as a single-block fixed-point iteration: R_k(u) = u - (2/beta)
// grad f(u; d_{i_k}), lambda = step * beta / 2 and engine noise
// sigma = 2 * grad_noise_std / beta, so that
// u_{k+1} = u_k - step (grad f(u_k; d_{i_k}) + eta'),
// eta' ~ N(0, grad_noise_std^2 I).
EngineInstance MakeDpsgdInstance(std::vector<GradientMap> item_gradients,
                                 double beta, double step,
                                 double grad_noise_std, std::size_t iterations,
                                 ItemOrder order, std::uint64_t seed);

// DP coordinate descent: block b applies R_b(u) = u_b - (2/beta) grad_b f(u).
// `block_gradients[b]` maps the full (flattened) iterate to the b-th block
// of the gradient.
EngineInstance MakeDpcdInstance(std::vector<GradientMap> block_gradients,
                                double beta, double step, double grad_noise_std,
                                std::size_t iterations, BlockSchedule schedule,
                                std::uint64_t seed);

}  // namespace dpfix

#endif  // DPFIX_FIXED_POINT_H_
