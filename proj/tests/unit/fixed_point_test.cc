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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dpfix/errors.h"
#include "dpfix/rng.h"
#include "support/oracles.h"

namespace dpfix {
namespace {

using testing::DirectCdLoop;
using testing::DirectDpsgdLoop;

OperatorHandle ConstantMap(double c) {
  return OperatorHandle::FromFlatMap(
      [c](std::span<const double> u) { return Vec(u.size(), c); },
      Expansiveness::Contractive(0.0));
}

OperatorHandle ScaleMap(double tau) {
  return OperatorHandle::FromFlatMap(
      [tau](std::span<const double> u) { return Scale(tau, Vec(u.begin(), u.end())); },
      Expansiveness::Contractive(tau));
}

IterationConfig Config(double lambda, double sigma, std::size_t k,
                       BlockSchedule schedule = BlockSchedule::AllBlocks(),
                       std::uint64_t seed = 3) {
  IterationConfig c;
  c.lambda = {lambda};
  c.sigma = sigma;
  c.iterations = k;
  c.schedule = std::move(schedule);
  c.seed = seed;
  return c;
}

TEST(FixedPointStepTest, RelaxedStepExamples) {
  const BlockVector u(1, 1, 2.0);
  EXPECT_DOUBLE_EQ(
      FixedPointStep(u, ConstantMap(0.0), Config(0.5, 0.0, 1), 0).flat()[0],
      1.0);
  EXPECT_DOUBLE_EQ(
      FixedPointStep(u, ConstantMap(7.0), Config(1.0, 0.0, 1), 0).flat()[0],
      7.0);
}

TEST(FixedPointStepTest, NoiseComesFromTheBlockSubstream) {
  const BlockVector u(3, 2, 0.0);
  const OperatorHandle id = OperatorHandle::FromFlatMap(
      [](std::span<const double> v) { return Vec(v.begin(), v.end()); },
      Expansiveness::NonExpansive());
  const BlockVector next = FixedPointStep(u, id, Config(1.0, 2.0, 1, BlockSchedule::AllBlocks(), 11), 4);
  for (std::size_t b = 0; b < 3; ++b) {
    Vec expected(2);
    NoiseBlock(11, 4, b, 2.0, expected);
    EXPECT_EQ(Vec(next.block(b).begin(), next.block(b).end()), expected);
  }
}

TEST(FixedPointStepTest, ErrorInjectorAddsToActiveBlocks) {
  IterationConfig c = Config(1.0, 0.0, 1);
  c.error_injector = [](const BlockVector&, std::size_t, std::size_t b,
                        std::span<double> e) {
    for (double& x : e) x = static_cast<double>(b) + 0.5;
  };
  const BlockVector next =
      FixedPointStep(BlockVector(2, 1, 9.0), ConstantMap(1.0), c, 0);
  EXPECT_DOUBLE_EQ(next.block(0)[0], 1.5);
  EXPECT_DOUBLE_EQ(next.block(1)[0], 2.5);
}

TEST(FixedPointStepTest, InactiveBlocksAreFrozenBitForBit) {
  BlockVector u(5, 3, 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    u.flat()[i] = 0.1 * static_cast<double>(i) + 1e-17;
  }
  const IterationConfig c =
      Config(0.7, 1.0, 1, BlockSchedule::SingleUniform(), 5);
  for (std::size_t k = 0; k < 20; ++k) {
    IterationRecord rec;
    const BlockVector next = FixedPointStep(u, ScaleMap(0.5), c, k, &rec);
    std::size_t active = 0;
    for (std::size_t b = 0; b < 5; ++b) {
      if (rec.active[b]) {
        ++active;
        continue;
      }
      for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_EQ(next.block(b)[j], u.block(b)[j]);
      }
    }
    EXPECT_EQ(active, 1u);
    EXPECT_EQ(rec.noise_draws, 3u);
  }
}

TEST(RunFixedPointTest, NoiseDrawAccounting) {
  const auto noisy = RunFixedPoint(BlockVector(3, 2, 1.0), ScaleMap(0.5),
                                   Config(0.5, 1.0, 5));
  ASSERT_EQ(noisy.trace.records.size(), 5u);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_EQ(noisy.trace.records[k].k, k);
    EXPECT_EQ(noisy.trace.records[k].noise_draws, 6u);
    EXPECT_EQ(noisy.trace.records[k].noise_draws_total, 6u * (k + 1));
  }
  const auto quiet = RunFixedPoint(BlockVector(3, 2, 1.0), ScaleMap(0.5),
                                   Config(0.5, 0.0, 5));
  EXPECT_EQ(quiet.trace.records.back().noise_draws_total, 0u);
}

TEST(RunFixedPointTest, DeterministicInSeed) {
  const BlockVector u0(4, 2, 1.0);
  const auto c = Config(0.5, 0.3, 50, BlockSchedule::BernoulliPerBlock(0.5), 8);
  const auto a = RunFixedPoint(u0, ScaleMap(0.9), c);
  const auto b = RunFixedPoint(u0, ScaleMap(0.9), c);
  EXPECT_EQ(a.u, b.u);
  auto other = c;
  other.seed = 9;
  EXPECT_FALSE(RunFixedPoint(u0, ScaleMap(0.9), other).u == a.u);
}

TEST(RunFixedPointTest, TraceRecordsDistanceObjectiveAndIterates) {
  TraceOptions opts;
  opts.reference = BlockVector(1, 1, 0.0);
  opts.objective = [](const BlockVector& u) { return 3.0 * u.flat()[0]; };
  opts.store_iterates = true;
  const auto run =
      RunFixedPoint(BlockVector(1, 1, 1.0), ScaleMap(0.5), Config(1.0, 0.0, 3), opts);
  ASSERT_EQ(run.trace.iterates.size(), 3u);
  EXPECT_DOUBLE_EQ(run.trace.iterates[2].flat()[0], 0.125);
  EXPECT_DOUBLE_EQ(run.trace.records[0].dist_sq, 0.25);
  EXPECT_DOUBLE_EQ(run.trace.records[1].objective, 0.75);
}

TEST(RunFixedPointTest, PerIterationLambdaSchedule) {
  IterationConfig c = Config(1.0, 0.0, 3);
  c.lambda = {0.5, 1.0, 0.25};
  const auto run = RunFixedPoint(BlockVector(1, 1, 8.0), ConstantMap(0.0), c);
  EXPECT_DOUBLE_EQ(run.u.flat()[0], 8.0 * 0.5 * 0.0 * 0.75);
  c.lambda = {0.5, 1.0};
  EXPECT_THROW(RunFixedPoint(BlockVector(1, 1, 8.0), ConstantMap(0.0), c),
               Error);
}

TEST(RunFixedPointTest, RejectsInvalidConfiguration) {
  auto category = [](const IterationConfig& c) {
    try {
      c.Validate();
    } catch (const Error& e) {
      return e.category();
    }
    return ErrorCategory::kIo;
  };
  EXPECT_EQ(category(Config(0.0, 0.0, 1)), ErrorCategory::kParameter);
  EXPECT_EQ(category(Config(1.5, 0.0, 1)), ErrorCategory::kParameter);
  EXPECT_EQ(category(Config(0.5, -1.0, 1)), ErrorCategory::kParameter);
  EXPECT_EQ(category(Config(0.5, 0.0, 0)), ErrorCategory::kParameter);
  IterationConfig bad = Config(0.5, 0.0, 3);
  bad.lambda = {0.5, 0.5};
  EXPECT_EQ(category(bad), ErrorCategory::kStructural);
  EXPECT_THROW(BlockSchedule::BernoulliPerBlock(0.0), Error);
  EXPECT_THROW(BlockSchedule::SubsetUniform(0), Error);
  EXPECT_THROW(BlockSchedule::SubsetUniform(4).Mask(0, 0, 3), Error);
}

TEST(RunFixedPointTest, NoiselessContractionDecaysGeometrically) {
  const double tau = 0.8;
  const double lambda = 0.6;
  const auto run = RunFixedPoint(BlockVector(2, 2, 1.0), ScaleMap(tau),
                                 Config(lambda, 0.0, 40));
  const double rate = 1.0 - lambda * (1.0 - tau);
  EXPECT_NEAR(run.u.Norm(), std::pow(rate, 40) * 2.0, 1e-14);
}

TEST(BlockScheduleTest, ActivationProbabilities) {
  EXPECT_DOUBLE_EQ(BlockSchedule::AllBlocks().ActivationProbability(4), 1.0);
  EXPECT_DOUBLE_EQ(BlockSchedule::CyclicPermutation().ActivationProbability(4), 0.25);
  EXPECT_DOUBLE_EQ(BlockSchedule::SingleUniform().ActivationProbability(4), 0.25);
  EXPECT_DOUBLE_EQ(BlockSchedule::SubsetUniform(3).ActivationProbability(4), 0.75);
  EXPECT_DOUBLE_EQ(BlockSchedule::BernoulliPerBlock(0.3).ActivationProbability(4), 0.3);
}

TEST(BlockScheduleTest, EmpiricalFrequenciesMatchMarginals) {
  const std::size_t B = 5;
  const std::size_t K = 20000;
  for (const BlockSchedule& s :
       {BlockSchedule::BernoulliPerBlock(0.3), BlockSchedule::SingleUniform(),
        BlockSchedule::SubsetUniform(2)}) {
    std::vector<double> hits(B, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      const auto mask = s.Mask(17, k, B);
      std::size_t count = 0;
      for (std::size_t b = 0; b < B; ++b) {
        hits[b] += mask[b];
        count += mask[b];
      }
      if (s.kind() == BlockSchedule::Kind::kSubsetUniform) EXPECT_EQ(count, 2u);
    }
    const double q = s.ActivationProbability(B);
    const double sd = std::sqrt(q * (1 - q) / K);
    for (double h : hits) EXPECT_NEAR(h / K, q, 5 * sd);
  }
}

TEST(BlockScheduleTest, CyclicPermutationVisitsEachBlockOncePerEpoch) {
  const std::size_t B = 6;
  bool saw_non_identity = false;
  for (std::size_t epoch = 0; epoch < 20; ++epoch) {
    std::vector<int> seen(B, 0);
    for (std::size_t j = 0; j < B; ++j) {
      const auto mask =
          BlockSchedule::CyclicPermutation().Mask(2, epoch * B + j, B);
      for (std::size_t b = 0; b < B; ++b) {
        seen[b] += mask[b];
        if (mask[b] && b != j) saw_non_identity = true;
      }
    }
    for (int s : seen) EXPECT_EQ(s, 1);
  }
  EXPECT_TRUE(saw_non_identity);
}

TEST(DpsgdInstanceTest, MatchesDirectLoop) {
  // f(u; d_i) = 1/2 ||u - d_i||^2, beta = 1.
  const std::vector<Vec> data{{1.0, 0.0}, {-2.0, 1.0}, {0.5, 3.0}};
  std::vector<GradientMap> grads;
  for (const Vec& d : data) {
    grads.push_back([d](std::span<const double> u) {
      return Subtract(Vec(u.begin(), u.end()), d);
    });
  }
  for (ItemOrder order : {ItemOrder::kCyclic, ItemOrder::kUniform}) {
    const EngineInstance inst =
        MakeDpsgdInstance(grads, 1.0, 0.3, 0.7, 25, order, 21);
    TraceOptions opts;
    opts.store_iterates = true;
    const Vec u0{0.2, -0.4};
    const auto run = RunFixedPoint(BlockVector(1, 2, u0), inst.op, inst.config, opts);
    const auto direct = DirectDpsgdLoop(grads, u0, 0.3, 0.7, 25, order, 21);
    ASSERT_EQ(direct.size(), 25u);
    for (std::size_t k = 0; k < 25; ++k) {
      for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_NEAR(run.trace.iterates[k].flat()[j], direct[k][j], 1e-12);
      }
    }
  }
  EXPECT_THROW(MakeDpsgdInstance(grads, 1.0, 2.0, 0.0, 5, ItemOrder::kCyclic, 0),
               Error);
}

TEST(DpsgdInstanceTest, CyclicOrderVisitsItemsInTurn) {
  for (std::size_t k = 0; k < 10; ++k) {
    EXPECT_EQ(SampledItem(ItemOrder::kCyclic, 4, 0, k), k % 4);
    EXPECT_LT(SampledItem(ItemOrder::kUniform, 4, 0, k), 4u);
  }
}

TEST(DpcdInstanceTest, MatchesDirectLoop) {
  // f(u) = 1/2 u^T H u with H coupling the blocks; beta = 2.
  const std::size_t B = 3;
  const std::size_t p = 2;
  const DenseMatrix h = testing::RandomSpd(B * p, 0.5, 2.0, 31);
  std::vector<GradientMap> grads;
  for (std::size_t b = 0; b < B; ++b) {
    grads.push_back([h, b, p](std::span<const double> u) {
      const Vec g = h.Multiply(u);
      return Vec(g.begin() + b * p, g.begin() + (b + 1) * p);
    });
  }
  for (const BlockSchedule& s :
       {BlockSchedule::SingleUniform(), BlockSchedule::BernoulliPerBlock(0.5),
        BlockSchedule::CyclicPermutation()}) {
    const EngineInstance inst = MakeDpcdInstance(grads, 2.0, 0.4, 0.2, 30, s, 4);
    TraceOptions opts;
    opts.store_iterates = true;
    const Vec u0{1.0, -1.0, 0.5, 0.0, 2.0, -0.3};
    const auto run =
        RunFixedPoint(BlockVector(B, p, u0), inst.op, inst.config, opts);
    const auto direct = DirectCdLoop(grads, u0, p, 0.4, 0.2, 30, s, 4);
    for (std::size_t k = 0; k < 30; ++k) {
      for (std::size_t j = 0; j < B * p; ++j) {
        EXPECT_NEAR(run.trace.iterates[k].flat()[j], direct[k][j], 1e-12);
      }
    }
  }
}

TEST(DpcdInstanceTest, BlockCountMismatchIsStructural) {
  std::vector<GradientMap> grads(2, [](std::span<const double>) { return Vec{0.0}; });
  const EngineInstance inst = MakeDpcdInstance(
      grads, 1.0, 0.5, 0.0, 1, BlockSchedule::AllBlocks(), 0);
  try {
    RunFixedPoint(BlockVector(3, 1, 0.0), inst.op, inst.config);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kStructural);
  }
  EXPECT_THROW(MakeDpcdInstance({grads[0]}, 1.0, 0.5, 0.0, 1,
                                BlockSchedule::AllBlocks(), 0),
               Error);
}

}  // namespace
}  // namespace dpfix
