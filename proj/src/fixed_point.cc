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

#include "dpfix/fixed_point.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "dpfix/errors.h"
#include "dpfix/rng.h"

namespace dpfix {

BlockSchedule BlockSchedule::BernoulliPerBlock(double q) {
  if (!(q > 0.0 && q <= 1.0)) {
    ThrowParameter("Bernoulli activation probability must lie in (0,1]");
  }
  BlockSchedule s(Kind::kBernoulliPerBlock);
  s.q_ = q;
  return s;
}

BlockSchedule BlockSchedule::SubsetUniform(std::size_t m) {
  if (m == 0) ThrowParameter("subset size must be >= 1");
  BlockSchedule s(Kind::kSubsetUniform);
  s.m_ = m;
  return s;
}

std::vector<std::uint8_t> BlockSchedule::Mask(std::uint64_t seed,
                                              std::size_t k,
                                              std::size_t num_blocks) const {
  std::vector<std::uint8_t> mask(num_blocks, 0);
  Substream stream(seed, StreamDomain::kSchedule, k);
  switch (kind_) {
    case Kind::kAllBlocks:
      std::fill(mask.begin(), mask.end(), 1);
      break;
    case Kind::kCyclicPermutation: {
      const std::size_t epoch = k / num_blocks;
      Substream perm_stream(seed, StreamDomain::kSchedule, epoch,
                            /*b=*/0xC1C1C);
      std::vector<std::size_t> perm(num_blocks);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), perm_stream);
      mask[perm[k % num_blocks]] = 1;
      break;
    }
    case Kind::kBernoulliPerBlock: {
      std::bernoulli_distribution coin(q_);
      for (auto& m : mask) m = coin(stream) ? 1 : 0;
      break;
    }
    case Kind::kSingleUniform: {
      std::uniform_int_distribution<std::size_t> pick(0, num_blocks - 1);
      mask[pick(stream)] = 1;
      break;
    }
    case Kind::kSubsetUniform: {
      if (m_ > num_blocks) {
        ThrowParameter("subset size " + std::to_string(m_) +
                       " exceeds block count " + std::to_string(num_blocks));
      }
      std::vector<std::size_t> all(num_blocks);
      std::iota(all.begin(), all.end(), 0);
      std::vector<std::size_t> chosen;
      chosen.reserve(m_);
      std::sample(all.begin(), all.end(), std::back_inserter(chosen), m_,
                  stream);
      for (std::size_t b : chosen) mask[b] = 1;
      break;
    }
  }
  return mask;
}

double BlockSchedule::ActivationProbability(std::size_t num_blocks) const {
  const double B = static_cast<double>(num_blocks);
  switch (kind_) {
    case Kind::kAllBlocks:
      return 1.0;
    case Kind::kBernoulliPerBlock:
      return q_;
    case Kind::kCyclicPermutation:
    case Kind::kSingleUniform:
      return 1.0 / B;
    case Kind::kSubsetUniform:
      return static_cast<double>(m_) / B;
  }
  return 1.0;
}

double IterationConfig::LambdaAt(std::size_t k) const {
  if (lambda.size() == 1) return lambda.front();
  return lambda.at(k);
}

void IterationConfig::Validate() const {
  if (iterations == 0) ThrowParameter("iteration count K must be >= 1");
  if (!(sigma >= 0.0)) ThrowParameter("noise std sigma must be >= 0");
  if (lambda.size() != 1 && lambda.size() != iterations) {
    ThrowStructural("lambda schedule must have 1 or K entries");
  }
  for (double l : lambda) {
    if (!(l > 0.0 && l <= 1.0)) {
      ThrowParameter("step lambda must lie in (0,1], got " + std::to_string(l));
    }
  }
}

BlockVector FixedPointStep(const BlockVector& u, const OperatorHandle& op,
                           const IterationConfig& config, std::size_t k,
                           IterationRecord* record) {
  const std::size_t B = u.num_blocks();
  const std::size_t p = u.block_dim();
  const std::vector<std::uint8_t> active = config.schedule.Mask(config.seed, k, B);
  const double lambda = config.LambdaAt(k);

  BlockVector image(B, p);
  const bool any_active =
      std::any_of(active.begin(), active.end(), [](auto a) { return a != 0; });
  if (any_active) op.Evaluate(u, k, active, image);
  if (!image.SameShape(u)) {
    ThrowStructural("operator changed the block layout of the iterate");
  }

  BlockVector next = u;
  Vec noise(p, 0.0);
  Vec error(p, 0.0);
  std::uint64_t draws = 0;
  for (std::size_t b = 0; b < B; ++b) {
    if (!active[b]) continue;
    std::fill(noise.begin(), noise.end(), 0.0);
    if (config.sigma > 0.0) {
      NoiseBlock(config.seed, k, b, config.sigma, noise);
      draws += p;
    }
    std::fill(error.begin(), error.end(), 0.0);
    if (config.error_injector) config.error_injector(u, k, b, error);
    const auto ub = u.block(b);
    const auto rb = image.block(b);
    auto out = next.block(b);
    for (std::size_t j = 0; j < p; ++j) {
      out[j] = ub[j] + lambda * (rb[j] + error[j] + noise[j] - ub[j]);
    }
  }
  if (record != nullptr) {
    record->k = k;
    record->active = active;
    record->noise_draws = draws;
  }
  return next;
}

FixedPointResult RunFixedPoint(const BlockVector& u0, const OperatorHandle& op,
                               const IterationConfig& config,
                               const TraceOptions& options) {
  config.Validate();
  if (options.reference && !options.reference->SameShape(u0)) {
    ThrowStructural("reference point has a different block layout");
  }
  FixedPointResult result{u0, {}};
  result.trace.records.reserve(config.iterations);
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < config.iterations; ++k) {
    IterationRecord record;
    result.u = FixedPointStep(result.u, op, config, k, &record);
    total += record.noise_draws;
    record.noise_draws_total = total;
    if (options.reference) {
      record.dist_sq = SquaredDistance(result.u, *options.reference);
    }
    if (options.objective) record.objective = options.objective(result.u);
    if (options.store_iterates) result.trace.iterates.push_back(result.u);
    result.trace.records.push_back(std::move(record));
  }
  return result;
}

std::size_t SampledItem(ItemOrder order, std::size_t num_items,
                        std::uint64_t seed, std::size_t k) {
  if (num_items == 0) ThrowParameter("item count must be >= 1");
  if (order == ItemOrder::kCyclic) return k % num_items;
  Substream stream(seed, StreamDomain::kItemOrder, k);
  std::uniform_int_distribution<std::size_t> pick(0, num_items - 1);
  return pick(stream);
}

EngineInstance MakeDpsgdInstance(std::vector<GradientMap> item_gradients,
                                 double beta, double step,
                                 double grad_noise_std, std::size_t iterations,
                                 ItemOrder order, std::uint64_t seed) {
  if (!(beta > 0.0)) ThrowParameter("smoothness beta must be > 0");
  if (!(step > 0.0 && step < 2.0 / beta)) {
    ThrowParameter("DP-SGD step must lie in (0, 2/beta)");
  }
  if (!(grad_noise_std >= 0.0)) ThrowParameter("noise std must be >= 0");
  if (item_gradients.empty()) ThrowParameter("DP-SGD needs at least one item");
  const double scale = 2.0 / beta;
  auto eval = [grads = std::move(item_gradients), scale, order, seed](
                  const BlockVector& u, std::size_t k,
                  std::span<const std::uint8_t>, BlockVector& out) {
    if (u.num_blocks() != 1) {
      ThrowStructural("DP-SGD instance expects a single block");
    }
    const std::size_t i = SampledItem(order, grads.size(), seed, k);
    const Vec g = grads[i](u.flat());
    if (g.size() != u.size()) ThrowStructural("item gradient has wrong length");
    out = u;
    Axpy(-scale, g, out.flat());
  };
  IterationConfig config;
  config.lambda = {step * beta / 2.0};
  config.sigma = scale * grad_noise_std;
  config.iterations = iterations;
  config.schedule = BlockSchedule::AllBlocks();
  config.seed = seed;
  return {OperatorHandle(std::move(eval), Expansiveness::NonExpansive(),
                         /*data_dependent=*/true),
          std::move(config)};
}

EngineInstance MakeDpcdInstance(std::vector<GradientMap> block_gradients,
                                double beta, double step, double grad_noise_std,
                                std::size_t iterations, BlockSchedule schedule,
                                std::uint64_t seed) {
  if (!(beta > 0.0)) ThrowParameter("smoothness beta must be > 0");
  if (!(step > 0.0 && step < 2.0 / beta)) {
    ThrowParameter("DP-CD step must lie in (0, 2/beta)");
  }
  if (!(grad_noise_std >= 0.0)) ThrowParameter("noise std must be >= 0");
  if (block_gradients.size() < 2) {
    ThrowParameter("DP-CD needs B > 1 blocks");
  }
  const double scale = 2.0 / beta;
  auto eval = [grads = std::move(block_gradients), scale](
                  const BlockVector& u, std::size_t,
                  std::span<const std::uint8_t> active, BlockVector& out) {
    if (u.num_blocks() != grads.size()) {
      ThrowStructural("DP-CD: iterate has " + std::to_string(u.num_blocks()) +
                      " blocks but " + std::to_string(grads.size()) +
                      " block gradients were given");
    }
    for (std::size_t b = 0; b < grads.size(); ++b) {
      if (!active.empty() && !active[b]) continue;
      const Vec g = grads[b](u.flat());
      if (g.size() != u.block_dim()) {
        ThrowStructural("block gradient has wrong length");
      }
      const auto ub = u.block(b);
      auto ob = out.block(b);
      for (std::size_t j = 0; j < g.size(); ++j) ob[j] = ub[j] - scale * g[j];
    }
  };
  IterationConfig config;
  config.lambda = {step * beta / 2.0};
  config.sigma = scale * grad_noise_std;
  config.iterations = iterations;
  config.schedule = std::move(schedule);
  config.seed = seed;
  return {OperatorHandle(std::move(eval), Expansiveness::NonExpansive(),
                         /*data_dependent=*/true),
          std::move(config)};
}

}  // namespace dpfix
