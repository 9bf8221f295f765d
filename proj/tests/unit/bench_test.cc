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

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <gtest/gtest.h>

#include "dpfix/config.h"
#include "dpfix/csv.h"
#include "dpfix/errors.h"
#include "dpfix/experiment.h"
#include "dpfix/lasso.h"
#include "dpfix/rng.h"

namespace dpfix {
namespace {

// Least-squares solution from the normal equations.
Vec NormalEquations(const LassoDataset& d) {
  return Solve(d.a.Gram(), d.a.MultiplyTransposed(d.b));
}

TEST(GenLassoTest, Invariants) {
  const LassoDataset d = GenLasso(200, 16, 5, 0.1, 3);
  EXPECT_EQ(d.n(), 200u);
  EXPECT_EQ(d.p(), 16u);
  for (std::size_t r = 0; r < d.n(); ++r) EXPECT_NEAR(Norm(d.a.row(r)), 1.0, 1e-12);
  EXPECT_EQ(d.support.size(), 5u);
  std::size_t nonzero = 0;
  for (double v : d.x_true) {
    if (v != 0.0) ++nonzero;
    EXPECT_LE(std::abs(v), 1.0);
  }
  EXPECT_EQ(nonzero, 5u);
  EXPECT_EQ(GenLasso(200, 16, 5, 0.1, 3).b, d.b);
  EXPECT_NE(GenLasso(200, 16, 5, 0.1, 4).b, d.b);
  EXPECT_THROW(GenLasso(10, 4, 5, 0.1, 0), Error);
}

TEST(GenLassoTest, NoiselessTargetsAreExact) {
  const LassoDataset d = GenLasso(50, 8, 3, 0.0, 5);
  const Vec ax = d.a.Multiply(d.x_true);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(d.b[i], ax[i]);
}

TEST(LassoObjectiveTest, Examples) {
  const LassoDataset d = GenLasso(60, 8, 3, 0.1, 6);
  const Vec zero(8, 0.0);
  EXPECT_NEAR(LassoObjective(d, zero, 0.3), 0.5 / 60 * Dot(d.b, d.b), 1e-15);
  const Vec ls = NormalEquations(d);
  const Vec res = Subtract(d.a.Multiply(ls), d.b);
  EXPECT_NEAR(LassoObjective(d, ls, 0.0), 0.5 / 60 * Dot(res, res), 1e-14);
  EXPECT_LE(LassoObjective(d, d.x_true, 0.01), LassoObjective(d, zero, 0.01));
  EXPECT_THROW(LassoObjective(d, Vec(7, 0.0), 0.1), Error);
}

TEST(SplitTest, DisjointDeterministicAndComplete) {
  const LassoDataset d = GenLasso(100, 4, 2, 0.1, 7);
  const TrainTestSplit s = SplitDataset(d, 0.9, 11);
  EXPECT_EQ(s.train.n(), 90u);
  EXPECT_EQ(s.test.n(), 10u);
  std::set<double> seen;
  for (double v : s.train.b) EXPECT_TRUE(seen.insert(v).second);
  for (double v : s.test.b) EXPECT_TRUE(seen.insert(v).second);
  EXPECT_EQ(seen, std::set<double>(d.b.begin(), d.b.end()));
  EXPECT_EQ(SplitDataset(d, 0.9, 11).test.b, s.test.b);
  EXPECT_NE(SplitDataset(d, 0.9, 12).test.b, s.test.b);
}

TEST(ReferenceSolverTest, SatisfiesOptimalityConditions) {
  const LassoDataset d = GenLasso(300, 16, 4, 0.1, 8);
  for (double kappa : {1e-3, 1e-2}) {
    const ReferenceSolution ref = SolveLassoReference(d, kappa);
    EXPECT_LT(ref.gradient_map_norm, 1e-10);
    EXPECT_LT(LassoOptimalityViolation(d, ref.x, kappa), 1e-8);
    // Independent subgradient check.
    const Vec g = Scale(1.0 / 300, d.a.MultiplyTransposed(
                                       Subtract(d.a.Multiply(ref.x), d.b)));
    for (std::size_t j = 0; j < 16; ++j) {
      if (ref.x[j] != 0.0) {
        EXPECT_NEAR(g[j] + kappa * (ref.x[j] > 0 ? 1 : -1), 0.0, 1e-8);
      } else {
        EXPECT_LE(std::abs(g[j]), kappa + 1e-8);
      }
    }
  }
}

TEST(DpsgdBaselineTest, FullBatchNoiselessConvergesToLeastSquares) {
  const LassoDataset d = GenLasso(40, 4, 2, 0.1, 9);
  DpsgdConfig cfg;
  cfg.step = 1.0;
  cfg.iterations = 20000;
  cfg.batch = 40;
  const Vec x = DpsgdBaseline(d, cfg);
  const Vec ls = NormalEquations(d);
  EXPECT_LT(std::sqrt(SquaredDistance(x, ls)), 1e-4);
}

TEST(DpsgdBaselineTest, HugeClipMatchesPlainProximalSgd) {
  const LassoDataset d = GenLasso(30, 5, 2, 0.1, 10);
  DpsgdConfig cfg;
  cfg.step = 0.2;
  cfg.iterations = 100;
  cfg.kappa = 0.01;
  cfg.seed = 3;
  cfg.clip = 1e12;
  const Vec x = DpsgdBaseline(d, cfg);
  Vec ref(5, 0.0);
  for (std::size_t k = 0; k < 100; ++k) {
    Substream s(3, StreamDomain::kUserSampling, k);
    const std::size_t i = SampleUsers(30, 1, s)[0];
    const auto row = d.a.row(i);
    const double r = Dot(row, ref) - d.b[i];
    for (std::size_t j = 0; j < 5; ++j) ref[j] -= 0.2 * r * row[j];
    for (double& v : ref) {
      const double t = 0.2 * 0.01;
      v = v > t ? v - t : (v < -t ? v + t : 0.0);
    }
  }
  for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(x[j], ref[j], 1e-14);
  cfg.sigma = 0.5;
  EXPECT_EQ(DpsgdBaseline(d, cfg), DpsgdBaseline(d, cfg));
}

ResultRow SampleRow(double eps, std::uint64_t seed) {
  ResultRow r;
  r.setting = "federated";
  r.algorithm = "admm";
  r.epsilon = eps;
  r.delta = 1e-6;
  r.sigma = 0.1 + 1.0 / 3.0;
  r.iterations = 200;
  r.seed = seed;
  r.train_objective = 1e-310;
  r.test_objective = std::numeric_limits<double>::infinity();
  r.runtime_ms = 12.345678901234567;
  return r;
}

TEST(CsvTest, HeaderOnlyForEmptyResults) {
  std::ostringstream out;
  WriteResultsCsv(out, {});
  EXPECT_EQ(out.str(),
            "setting,algorithm,epsilon,delta,sigma,K,seed,train_obj,test_obj,"
            "runtime_ms\n");
}

TEST(CsvTest, RoundTripIsExactAndDeterministic) {
  const std::vector<ResultRow> rows{SampleRow(0.1, 0), SampleRow(3.0, 9)};
  std::ostringstream a, b;
  WriteResultsCsv(a, rows);
  WriteResultsCsv(b, rows);
  EXPECT_EQ(a.str(), b.str());
  std::istringstream in(a.str());
  const std::vector<ResultRow> back = ReadResultsCsv(in);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].setting, rows[i].setting);
    EXPECT_EQ(back[i].algorithm, rows[i].algorithm);
    EXPECT_EQ(back[i].epsilon, rows[i].epsilon);
    EXPECT_EQ(back[i].delta, rows[i].delta);
    EXPECT_EQ(back[i].sigma, rows[i].sigma);
    EXPECT_EQ(back[i].iterations, rows[i].iterations);
    EXPECT_EQ(back[i].seed, rows[i].seed);
    EXPECT_EQ(back[i].train_objective, rows[i].train_objective);
    EXPECT_EQ(back[i].test_objective, rows[i].test_objective);
    EXPECT_EQ(back[i].runtime_ms, rows[i].runtime_ms);
  }
}

TEST(CsvTest, NumberFormattingIsLocaleFree) {
  EXPECT_EQ(FormatNumber(0.5), "0.5");
  EXPECT_EQ(FormatNumber(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_TRUE(std::isnan(ParseNumber("nan")));
  EXPECT_EQ(ParseNumber(FormatNumber(0.1)), 0.1);
  EXPECT_THROW(ParseNumber("1,5"), Error);
}

TEST(CsvTest, RdpCurveAndTraceSchemas) {
  RdpCurve c({2.0, 4.0});
  c.Set(0, 0.5, "centralized");
  std::ostringstream out;
  WriteRdpCurveCsv(out, c);
  EXPECT_EQ(out.str(), "alpha,epsilon,provenance\n2,0.5,centralized\n4,0,\n");
  RunTrace t;
  IterationRecord r;
  r.objective = 1.5;
  t.records.push_back(r);
  std::ostringstream tr;
  WriteTraceCsv(tr, t);
  EXPECT_EQ(tr.str(), "iter,objective,dist_sq\n0,1.5,nan\n");
}

TEST(CsvTest, UnwritablePathIsIoErrorNamingPath) {
  const std::string path = "/nonexistent-dir/x/results.csv";
  try {
    WriteFile(path, [](std::ostream& o) { o << "x"; });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kIo);
    EXPECT_NE(std::string(e.what()).find(path), std::string::npos);
  }
}

TEST(ConfigTest, ParsesAndAppliesKeys) {
  std::istringstream in(
      "# bench\nsetting = centralized\nn=200\n epsilons = 0.5, 2\n"
      "seeds=3,4\nalgorithms = admm\nkappa = 0.02\ntune = false\n");
  const KeyValues kv = ParseKeyValues(in, "test");
  ExperimentConfig c;
  ApplyKeyValues(kv, c);
  EXPECT_EQ(c.setting, Deployment::kCentralized);
  EXPECT_EQ(c.n, 200u);
  EXPECT_EQ(c.epsilons, (std::vector<double>{0.5, 2.0}));
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{3, 4}));
  EXPECT_EQ(c.algorithms, std::vector<Algorithm>{Algorithm::kAdmm});
  EXPECT_EQ(c.kappa, 0.02);
  EXPECT_FALSE(c.cross_validate_kappa);
  EXPECT_FALSE(c.tune);
}

TEST(ConfigTest, RejectsUnknownKeysAndBadValues) {
  ExperimentConfig c;
  auto category = [&](const KeyValues& kv) {
    try {
      ApplyKeyValues(kv, c);
    } catch (const Error& e) {
      return e.category();
    }
    return ErrorCategory::kIo;
  };
  EXPECT_EQ(category({{"bogus", "1"}}), ErrorCategory::kParameter);
  EXPECT_EQ(category({{"n", "ten"}}), ErrorCategory::kParameter);
  EXPECT_EQ(category({{"setting", "mesh"}}), ErrorCategory::kParameter);
  std::istringstream bad("no equals sign here\n");
  EXPECT_THROW(ParseKeyValues(bad, "bad"), Error);
  EXPECT_THROW(ReadKeyValueFile("/nonexistent/config.txt"), Error);
}

TEST(ExperimentTest, AccountingUsesClipAsSensitivityScale) {
  ExperimentConfig c;
  c.clip = 0.5;
  const AccountingParams a = AccountingFor(c, Algorithm::kAdmm, 900);
  EXPECT_DOUBLE_EQ(a.lipschitz * a.gamma, 0.5);
  EXPECT_EQ(a.m, 90u);
  const AccountingParams s = AccountingFor(c, Algorithm::kDpsgd, 900);
  EXPECT_DOUBLE_EQ(s.lipschitz * s.gamma, 0.25);
  c.setting = Deployment::kCentralized;
  EXPECT_DOUBLE_EQ(
      AccountingFor(c, Algorithm::kAdmm, 900).lipschitz *
          AccountingFor(c, Algorithm::kAdmm, 900).gamma,
      450.0);
  EXPECT_TRUE(std::isinf(AchievedEpsilon(c, Algorithm::kAdmm, 900, 0.0)));
}

TEST(ExperimentTest, ReportedEpsilonComesFromTheAccountant) {
  ExperimentConfig c;
  c.n = 100;
  c.p = 16;
  c.support = 4;
  c.iterations = 50;
  c.seeds = {0, 1};
  c.epsilons = {1.0, 3.0};
  c.tune = false;
  c.cross_validate_kappa = false;
  c.gamma = 9.0;
  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult r = RunExperiment(c);
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  EXPECT_LT(seconds, 10.0);
  ASSERT_EQ(r.rows.size(), 2u * 2u * 2u);
  for (const ResultRow& row : r.rows) {
    const Algorithm alg = ParseAlgorithm(row.algorithm);
    EXPECT_EQ(row.epsilon, AchievedEpsilon(c, alg, 90, row.sigma));
    EXPECT_LE(row.epsilon, row.target_epsilon);
    EXPECT_EQ(row.iterations, 50u);
    EXPECT_TRUE(std::isfinite(row.test_objective));
  }
  const auto summary = Summarize(r.rows);
  EXPECT_EQ(summary.size(), 4u);
  for (const SummaryRow& s : summary) EXPECT_EQ(s.count, 2u);
}

TEST(ExperimentTest, NonPrivateCentralizedAdmmMatchesReference) {
  ExperimentConfig c;
  c.setting = Deployment::kCentralized;
  c.n = 200;
  c.p = 8;
  c.support = 3;
  c.kappa = 1e-3;
  c.cross_validate_kappa = false;
  c.sigma = 0.0;
  c.iterations = 400;
  c.lambda = 1.0;
  c.clip = 1e12;
  const TrainTestSplit data = PrepareData(c);
  c.gamma = static_cast<double>(data.train.n());
  const Vec z = RunAlgorithm(c, Algorithm::kAdmm, data.train, 0.0, 0);
  const ReferenceSolution ref = SolveLassoReference(data.train, c.kappa);
  const double obj = LassoObjective(data.train, z, c.kappa);
  EXPECT_LT(std::abs(obj - ref.objective) / ref.objective, 1e-6);
}

}  // namespace
}  // namespace dpfix
