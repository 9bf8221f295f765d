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

// Lasso benchmark runner: private ADMM against proximal DP-SGD across
// privacy budgets, with noise calibrated by the accountant.

#ifndef DPFIX_EXPERIMENT_H_
#define DPFIX_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpfix/admm.h"
#include "dpfix/lasso.h"
#include "dpfix/privacy.h"
#include "dpfix/utility.h"

namespace dpfix {

enum class Algorithm { kAdmm, kDpsgd };

Algorithm ParseAlgorithm(const std::string& name);
std::string AlgorithmName(Algorithm algorithm);
std::string DeploymentName(Deployment deployment);

struct ExperimentConfig {
  Deployment setting = Deployment::kFederated;
  // Data.
  std::size_t n = 1000;
  std::size_t p = 64;
  std::size_t support = 8;
  double noise_std = 0.1;
  double train_fraction = 0.9;
  std::uint64_t data_seed = 1;
  double kappa = 0.01;
  // Pick kappa by 5-fold cross-validation on the train split instead.
  bool cross_validate_kappa = true;
  // Optimization.
  std::size_t iterations = 200;  // K
  double lambda = 0.5;           // ADMM relaxation
  double gamma = 90.0;           // ADMM prox parameter
  double clip = 1.0;             // clip_C, shared by both algorithms
  double step = 0.3;             // DP-SGD step
  double sampling = 0.1;         // users per round / train size
  // Privacy. A fixed sigma bypasses calibration (0 = non-private).
  std::optional<double> sigma;
  std::vector<double> epsilons = {0.1, 0.3, 1.0, 3.0};
  double delta = 1e-6;
  // Repetitions.
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<Algorithm> algorithms = {Algorithm::kAdmm, Algorithm::kDpsgd};
  // Grid-search hyper-parameters at the smallest budget before running.
  bool tune = true;
  std::uint64_t tuning_seed = 7919;

  void Validate() const;
};

struct ResultRow {
  std::string setting;
  std::string algorithm;
  double epsilon = 0.0;  // achieved (epsilon, delta)-DP of the actual run
  double delta = 0.0;
  double sigma = 0.0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  double train_objective = 0.0;
  double test_objective = 0.0;
  double runtime_ms = 0.0;
  // Budget the row was calibrated for; not part of the CSV.
  double target_epsilon = 0.0;
};

struct TunedChoice {
  Algorithm algorithm = Algorithm::kAdmm;
  double gamma = 0.0;
  double lambda = 0.0;
  double step = 0.0;
  double clip = 0.0;
  double sigma = 0.0;
  double train_objective = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<TunedChoice> tuned;
  double kappa = 0.0;                // regularization actually used
  double zero_test_objective = 0.0;  // objective of x = 0 on the test set
};

// Seeded data set and its 90/10 style split.
TrainTestSplit PrepareData(const ExperimentConfig& config);

// {1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2}.
const std::vector<double>& KappaGrid();

// Users (rows) touched per step in the given setting.
std::size_t UsersPerRound(const ExperimentConfig& config, std::size_t n_train);

// The accountant setting and constants for an algorithm. With clipping at
// C, the products L * gamma entering the closed forms are C (federated and
// network ADMM), n C (centralized ADMM) and C/2 resp. n C/2 for DP-SGD,
// whose one-example gradient displacement is 2C rather than 4C.
PrivacySetting AccountingSetting(const ExperimentConfig& config);
AccountingParams AccountingFor(const ExperimentConfig& config,
                               Algorithm algorithm, std::size_t n_train);

double CalibrateFor(const ExperimentConfig& config, Algorithm algorithm,
                    std::size_t n_train, double epsilon);
// (epsilon, delta)-DP of a run with noise `sigma`; +inf when sigma = 0.
double AchievedEpsilon(const ExperimentConfig& config, Algorithm algorithm,
                       std::size_t n_train, double sigma);

// Released model of one run: z_K for ADMM, x_K for DP-SGD.
Vec RunAlgorithm(const ExperimentConfig& config, Algorithm algorithm,
                 const LassoDataset& train, double sigma, std::uint64_t seed);

struct RunOutput {
  Vec x;
  RunTrace trace;  // empty for DP-SGD
  std::optional<ObservationLog> log;  // decentralized runs only
};

// RunAlgorithm with ADMM trace hooks and the decentralized observation log.
RunOutput RunAlgorithmTraced(const ExperimentConfig& config,
                             Algorithm algorithm, const LassoDataset& train,
                             double sigma, std::uint64_t seed,
                             const AdmmTraceOptions& options);

// Grid search at the smallest budget on the tuning seed, scored by train
// objective. Writes the winning values back into `config`.
std::vector<TunedChoice> Tune(ExperimentConfig& config,
                              const LassoDataset& train);

ExperimentResult RunExperiment(ExperimentConfig config);

struct SummaryRow {
  std::string algorithm;
  double target_epsilon = 0.0;
  double mean_test_objective = 0.0;
  double std_test_objective = 0.0;
  std::size_t count = 0;
};

std::vector<SummaryRow> Summarize(const std::vector<ResultRow>& rows);

}  // namespace dpfix

#endif  // DPFIX_EXPERIMENT_H_
