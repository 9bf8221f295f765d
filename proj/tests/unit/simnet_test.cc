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

#include "dpfix/simnet.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "dpfix/errors.h"
#include "dpfix/rng.h"

namespace dpfix {
namespace {

// Upper 1% point of the chi-square distribution with 9 degrees of freedom.
constexpr double kChiSquare9At1Percent = 21.666;

TEST(SampleUsersTest, FullAndInvalidSizes) {
  Substream rng(1, StreamDomain::kUserSampling, 0);
  const auto all = SampleUsers(7, 7, rng);
  std::vector<std::size_t> expected(7);
  std::iota(expected.begin(), expected.end(), 0);
  EXPECT_EQ(all, expected);
  EXPECT_THROW(SampleUsers(5, 6, rng), Error);
  EXPECT_THROW(SampleUsers(5, 0, rng), Error);
}

TEST(SampleUsersTest, InclusionFrequencyAndNoDuplicates) {
  const std::size_t n = 10;
  const std::size_t trials = 100000;
  for (std::size_t m : {1u, 3u}) {
    std::vector<double> hits(n, 0.0);
    for (std::size_t t = 0; t < trials; ++t) {
      Substream rng(2, StreamDomain::kUserSampling, t);
      const auto s = SampleUsers(n, m, rng);
      ASSERT_EQ(s.size(), m);
      EXPECT_TRUE(std::adjacent_find(s.begin(), s.end()) == s.end());
      EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
      for (std::size_t i : s) hits[i] += 1.0;
    }
    const double q = static_cast<double>(m) / n;
    for (double h : hits) EXPECT_NEAR(h / trials, q, 0.01);
    if (m == 1) {
      double chi2 = 0.0;
      const double expect = trials * q;
      for (double h : hits) chi2 += (h - expect) * (h - expect) / expect;
      EXPECT_LT(chi2, kChiSquare9At1Percent);
    }
  }
}

TEST(CompleteGraphTest, SingleUserAlwaysReturnsItself) {
  CompleteGraph g(1);
  Substream rng(3, StreamDomain::kWalk, 0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(g.Next(0, rng), 0u);
}

TEST(CompleteGraphTest, UniformHopsPassChiSquare) {
  const std::size_t n = 10;
  CompleteGraph g(n);
  Substream rng(4, StreamDomain::kWalk, 0);
  std::vector<double> hits(n, 0.0);
  const std::size_t draws = 100000;
  std::size_t cur = 0;
  for (std::size_t t = 0; t < draws; ++t) {
    cur = g.Next(cur, rng);
    hits[cur] += 1.0;
  }
  double chi2 = 0.0;
  const double expect = static_cast<double>(draws) / n;
  for (double h : hits) chi2 += (h - expect) * (h - expect) / expect;
  EXPECT_LT(chi2, kChiSquare9At1Percent);
}

TEST(CompleteGraphTest, TransitionMatrixIsMemoryless) {
  const std::size_t n = 5;
  CompleteGraph g(n);
  Substream rng(5, StreamDomain::kWalk, 0);
  std::vector<std::vector<double>> counts(n, std::vector<double>(n, 0.0));
  std::size_t cur = 0;
  for (std::size_t t = 0; t < 1000000; ++t) {
    const std::size_t next = g.Next(cur, rng);
    counts[cur][next] += 1.0;
    cur = next;
  }
  for (const auto& row : counts) {
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    for (double c : row) EXPECT_NEAR(c / total, 0.2, 0.02 * 0.2);
  }
}

TEST(CompleteGraphTest, ReturnTimeIsGeometric) {
  const std::size_t n = 20;
  CompleteGraph g(n);
  Substream rng(6, StreamDomain::kWalk, 0);
  const std::size_t episodes = 100000;
  double total = 0.0;
  for (std::size_t e = 0; e < episodes; ++e) {
    std::size_t steps = 0;
    std::size_t cur = 0;
    do {
      cur = g.Next(cur, rng);
      ++steps;
    } while (cur != 0);
    total += static_cast<double>(steps);
  }
  EXPECT_NEAR(total / episodes, static_cast<double>(n), 0.05 * n);
}

TEST(ObservationLogTest, RecordsPerUser) {
  ObservationLog log(3);
  EXPECT_EQ(log.TotalEvents(), 0u);
  log.Record(1, 4, Vec{0.5});
  EXPECT_EQ(log.View(1).size(), 1u);
  EXPECT_EQ(log.View(1)[0].step, 4u);
  EXPECT_EQ(log.View(1)[0].z, Vec{0.5});
  EXPECT_TRUE(log.View(0).empty());
  EXPECT_TRUE(log.View(2).empty());
  EXPECT_THROW(log.Record(3, 0, Vec{}), Error);
}

TEST(ParticipationCountsTest, RoundRobinGivesOneEach) {
  const std::size_t n = 6;
  ObservationLog log(n);
  for (std::size_t k = 0; k < n; ++k) log.Record(k, k + 1, Vec{0.0});
  const auto counts = ParticipationCounts(log);
  EXPECT_EQ(counts, std::vector<std::size_t>(n, 1));
}

TEST(ParticipationCountsTest, UniformWalkAveragesKOverN) {
  const std::size_t n = 50;
  const std::size_t k_total = 100 * n;
  CompleteGraph g(n);
  Substream rng(7, StreamDomain::kWalk, 0);
  ObservationLog log(n);
  std::size_t cur = 0;
  for (std::size_t k = 0; k < k_total; ++k) {
    cur = g.Next(cur, rng);
    log.Record(cur, k + 1, Vec{});
  }
  const auto counts = ParticipationCounts(log);
  EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::size_t{0}),
            k_total);
  const double mean = static_cast<double>(k_total) / n;
  EXPECT_NEAR(mean, 100.0, 10.0);
  for (std::size_t c : counts) EXPECT_NEAR(static_cast<double>(c), 100.0, 50.0);
}

}  // namespace
}  // namespace dpfix
