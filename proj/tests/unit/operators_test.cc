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

#include "dpfix/operators.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dpfix/errors.h"
#include "dpfix/rng.h"
#include "support/oracles.h"
#include "support/probe.h"

namespace dpfix {
namespace {

using testing::DenseRankOneProx;
using testing::ProbeLipschitz;
using testing::RandomBallPoint;
using testing::RandomSpd;

ErrorCategory CategoryOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.category();
  }
  ADD_FAILURE() << "no dpfix::Error thrown";
  return ErrorCategory::kIo;
}

Vec RandomVec(std::size_t p, std::uint64_t seed, std::uint64_t index) {
  Substream s(seed, StreamDomain::kProbe, index, 99);
  std::normal_distribution<double> normal;
  Vec v(p);
  for (double& x : v) x = normal(s);
  return v;
}

// True when ||P(v) - P(w)||^2 <= <P(v) - P(w), v - w> + tol on all probes.
bool FirmlyNonExpansive(const ProxSpec& prox, std::size_t p,
                        std::uint64_t seed) {
  for (std::size_t i = 0; i < 256; ++i) {
    const Vec v = RandomBallPoint(p, 2.0, seed, 2 * i);
    const Vec w = RandomBallPoint(p, 2.0, seed, 2 * i + 1);
    const Vec d = Subtract(prox.Apply(v), prox.Apply(w));
    if (Dot(d, d) > Dot(d, Subtract(v, w)) + 1e-9) return false;
  }
  return true;
}

TEST(ProxL1Test, SoftThresholdExamples) {
  EXPECT_NEAR(ProxL1(Vec{1.2}, 0.5)[0], 0.7, 1e-15);
  EXPECT_EQ(ProxL1(Vec{-0.3, 0.3}, 0.3), (Vec{0.0, 0.0}));
  EXPECT_EQ(ProxL1(Vec{2.0, -2.0}, 0.0), (Vec{2.0, -2.0}));
}

TEST(ProxL1Test, NegativeThresholdIsParameterError) {
  EXPECT_EQ(CategoryOf([] { ProxL1(Vec{1.0}, -0.1); }),
            ErrorCategory::kParameter);
}

TEST(ProxRankOneTest, ZeroRowIsIdentity) {
  EXPECT_EQ(ProxQuadraticRankOne(Vec{0.0}, 5.0, 1.0, 1.0, Vec{3.0}),
            Vec{3.0});
}

TEST(ProxRankOneTest, ScalarCaseMatchesDenseSolveAndStationarity) {
  const Vec x = ProxQuadraticRankOne(Vec{1.0}, 1.0, 2.0, 1.0, Vec{0.0});
  const Vec oracle = DenseRankOneProx({1.0}, 1.0, 2.0, 1.0, {0.0});
  EXPECT_NEAR(x[0], oracle[0], 1e-15);
  // d/dx [(1/2n)(ax-b)^2 + (1/2 gamma)(x-v)^2] = 0 at the minimizer.
  EXPECT_NEAR((x[0] - 1.0) / 1.0 + (x[0] - 0.0) / 2.0, 0.0, 1e-15);
}

TEST(ProxRankOneTest, RandomProblemsMatchDenseSolve) {
  for (std::size_t p : {8u, 64u}) {
    for (std::uint64_t t = 0; t < 10; ++t) {
      const Vec a = RandomVec(p, t, 0);
      const Vec v = RandomVec(p, t, 1);
      const double b = RandomVec(1, t, 2)[0];
      const double gamma = 0.1 + static_cast<double>(t);
      const double n = 1.0 + 37.0 * static_cast<double>(t);
      const Vec x = ProxQuadraticRankOne(a, b, gamma, n, v);
      const Vec ref = DenseRankOneProx(a, b, gamma, n, v);
      EXPECT_LT(std::sqrt(SquaredDistance(x, ref)), 1e-10 * Norm(ref));
    }
  }
}

TEST(ProxRankOneTest, NonPositiveGammaIsParameterError) {
  EXPECT_EQ(CategoryOf([] {
              ProxQuadraticRankOne(Vec{1.0}, 1.0, 0.0, 1.0, Vec{0.0});
            }),
            ErrorCategory::kParameter);
}

TEST(ProxSpecTest, EveryKindIsFirmlyNonExpansive) {
  const std::size_t p = 4;
  EXPECT_TRUE(FirmlyNonExpansive(ProxSpec::Zero(), p, 1));
  EXPECT_TRUE(FirmlyNonExpansive(ProxSpec::L1(0.3, 2.0), p, 2));
  EXPECT_TRUE(FirmlyNonExpansive(
      ProxSpec::QuadraticRankOne(RandomVec(p, 3, 0), 0.7, 5.0, 0.5), p, 3));
  EXPECT_TRUE(FirmlyNonExpansive(
      ProxSpec::Quadratic(RandomSpd(p, 0.0, 4.0, 4), RandomVec(p, 4, 1), 0.8),
      p, 4));
}

TEST(ProxSpecTest, QuadraticProxSolvesItsOptimalityCondition) {
  const std::size_t p = 3;
  const DenseMatrix h = RandomSpd(p, 0.1, 2.0, 9);
  const Vec g = RandomVec(p, 9, 1);
  const Vec v = RandomVec(p, 9, 2);
  const double gamma = 0.7;
  const Vec x = ProxSpec::Quadratic(h, g, gamma).Apply(v);
  // H x + g + (x - v)/gamma = 0.
  const Vec hx = h.Multiply(x);
  for (std::size_t j = 0; j < p; ++j) {
    EXPECT_NEAR(hx[j] + g[j] + (x[j] - v[j]) / gamma, 0.0, 1e-12);
  }
}

TEST(ReflectTest, Examples) {
  const OperatorHandle id = Reflect(ProxSpec::Zero());
  const BlockVector u = BlockVector::FromBlocks({{1.5, -2.0}});
  EXPECT_EQ(id(u), u);
  const OperatorHandle r = Reflect(ProxSpec::L1(0.5, 1.0));
  EXPECT_NEAR(r(BlockVector::FromBlocks({{1.2}})).flat()[0], 0.2, 1e-15);
  EXPECT_EQ(r.expansiveness().kind, ExpansivenessKind::kNonExpansive);
}

TEST(ReflectTest, ProbeAuditNonExpansive) {
  const ProxSpec q =
      ProxSpec::Quadratic(RandomSpd(3, 0.0, 5.0, 21), RandomVec(3, 21, 1), 1.3);
  EXPECT_LE(ProbeLipschitz(Reflect(q), 1, 3, 21), 1.0 + 1e-9);
  EXPECT_LE(ProbeLipschitz(Reflect(ProxSpec::L1(0.4, 1.0)), 1, 3, 22),
            1.0 + 1e-9);
}

TEST(LionsMercierTest, ZeroProxesGiveIdentity) {
  const OperatorHandle t =
      LionsMercier(ProxSpec::Zero(), ProxSpec::Zero(), 0.5);
  const BlockVector u = BlockVector::FromBlocks({{0.25, -4.0}});
  EXPECT_EQ(t(u), u);
  EXPECT_EQ(t.expansiveness().kind, ExpansivenessKind::kAveraged);
}

TEST(LionsMercierTest, RejectsLambdaOutsideOpenUnitInterval) {
  for (double lam : {0.0, 1.0, -0.2, 1.5}) {
    EXPECT_EQ(CategoryOf([&] {
                LionsMercier(ProxSpec::Zero(), ProxSpec::Zero(), lam);
              }),
              ErrorCategory::kParameter);
  }
}

TEST(LionsMercierTest, EqualsAveragedReflectionComposition) {
  const ProxSpec p1 = ProxSpec::L1(0.2, 1.0);
  const ProxSpec p2 =
      ProxSpec::Quadratic(RandomSpd(3, 0.5, 2.0, 5), RandomVec(3, 5, 1), 1.0);
  const double lam = 0.3;
  const OperatorHandle t = LionsMercier(p1, p2, lam);
  const OperatorHandle r1 = Reflect(p1);
  const OperatorHandle r2 = Reflect(p2);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const BlockVector u(1, 3, RandomVec(3, 77, i));
    const Vec lhs = t(u).values();
    const Vec rr = r1(r2(u)).values();
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(lhs[j], lam * rr[j] + (1.0 - lam) * u.flat()[j], 1e-12);
    }
  }
}

TEST(LionsMercierTest, QuadraticOneDimensionalConvergesToMinimizer) {
  // p1 = (x-3)^2/2, p2 = 0; minimizer 3.
  DenseMatrix h(1, 1, Vec{1.0});
  const OperatorHandle t = LionsMercier(
      ProxSpec::Quadratic(h, Vec{-3.0}, 1.0), ProxSpec::Zero(), 0.5);
  BlockVector u(1, 1, 0.0);
  for (int k = 0; k < 200; ++k) u = t(u);
  EXPECT_NEAR(u.flat()[0], 3.0, 1e-12);  // x = prox_{p2}(u) = u
}

TEST(LionsMercierTest, LargeL1WeightDrivesMinimizerToZero) {
  DenseMatrix h(1, 1, Vec{1.0});
  const ProxSpec p1 = ProxSpec::Quadratic(h, Vec{-1.0}, 1.0);  // (x-1)^2/2
  const ProxSpec p2 = ProxSpec::L1(5.0, 1.0);
  const OperatorHandle t = LionsMercier(p1, p2, 0.5);
  BlockVector u(1, 1, 4.0);
  for (int k = 0; k < 500; ++k) u = t(u);
  const double x = p2.Apply(u.flat())[0];
  EXPECT_EQ(x, 0.0);
  // 0 in (x - 1) + 5 [-1, 1] at x = 0.
  EXPECT_LE(std::abs(0.0 - 1.0), 5.0);
}

TEST(GradientStepTest, Examples) {
  const GradientMap grad = [](std::span<const double> u) {
    return Vec(u.begin(), u.end());
  };
  const OperatorHandle r = GradientStepOperator(grad, 1.0);
  EXPECT_DOUBLE_EQ(r(BlockVector(1, 1, 1.0)).flat()[0], -1.0);
  const OperatorHandle c = StronglyConvexGradientStepOperator(grad, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(c(BlockVector(1, 1, 1.0)).flat()[0], 0.0);
  EXPECT_EQ(c.expansiveness().kind, ExpansivenessKind::kContractive);
  EXPECT_DOUBLE_EQ(c.expansiveness().factor, 0.0);
  EXPECT_EQ(CategoryOf([&] { GradientStepOperator(grad, 0.0); }),
            ErrorCategory::kParameter);
}

TEST(GradientStepTest, ProbeAuditRespectsDeclaredClass) {
  const DenseMatrix h = RandomSpd(4, 0.5, 3.0, 13);
  const GradientMap grad = [h](std::span<const double> u) {
    return h.Multiply(u);
  };
  const OperatorHandle ne = GradientStepOperator(grad, 3.0);
  EXPECT_LE(ProbeLipschitz(ne, 1, 4, 13), 1.0 + 1e-9);
  const OperatorHandle ct = StronglyConvexGradientStepOperator(grad, 3.0, 0.5);
  EXPECT_NEAR(ct.expansiveness().factor, 2.5 / 3.5, 1e-15);
  EXPECT_LE(ProbeLipschitz(ct, 1, 4, 14), ct.expansiveness().factor + 1e-9);
}

TEST(ClipTest, Examples) {
  EXPECT_EQ(Clip(Vec{3.0, 4.0}, 10.0), (Vec{3.0, 4.0}));
  EXPECT_EQ(Clip(Vec{3.0, 4.0}, 5.0), (Vec{3.0, 4.0}));
  const Vec c = Clip(Vec{6.0, 8.0}, 5.0);
  EXPECT_NEAR(c[0], 3.0, 1e-15);
  EXPECT_NEAR(c[1], 4.0, 1e-15);
  EXPECT_EQ(CategoryOf([] { Clip(Vec{1.0}, 0.0); }),
            ErrorCategory::kParameter);
}

TEST(ClipTest, IdempotentBitForBit) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Vec v = Scale(10.0, RandomVec(5, 3, i));
    const Vec once = Clip(v, 1.7);
    EXPECT_EQ(Clip(once, 1.7), once);
    EXPECT_LE(Norm(once), 1.7 * (1.0 + 1e-15));
  }
}

}  // namespace
}  // namespace dpfix
