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

#include "dpfix/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "dpfix/errors.h"

namespace dpfix {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Offsets keeping algorithm seeds apart from the data seed's streams.
constexpr std::uint64_t kRunSeedSalt = 0x5EEDull << 32;

}  // namespace

Algorithm ParseAlgorithm(const std::string& name) {
  if (name == "admm") return Algorithm::kAdmm;
  if (name == "dpsgd") return Algorithm::kDpsgd;
  ThrowParameter("unknown algorithm '" + name + "' (admm|dpsgd)");
}

std::string AlgorithmName(Algorithm algorithm) {
  return algorithm == Algorithm::kAdmm ? "admm" : "dpsgd";
}

std::string DeploymentName(Deployment deployment) {
  switch (deployment) {
    case Deployment::kCentralized:
      return "centralized";
    case Deployment::kFederated:
      return "federated";
    case Deployment::kDecentralized:
      return "decentralized";
  }
  return "unknown";
}

void ExperimentConfig::Validate() const {
  if (n < 2 || p == 0) ThrowParameter("need n >= 2 and p >= 1");
  if (support > p) ThrowParameter("support size exceeds p");
  if (iterations == 0) ThrowParameter("iteration count K must be >= 1");
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    ThrowParameter("lambda must lie in (0,1]");
  }
  if (!(gamma > 0.0)) ThrowParameter("gamma must be > 0");
  if (!(clip > 0.0)) ThrowParameter("clip_C must be > 0");
  if (!(step > 0.0)) ThrowParameter("DP-SGD step must be > 0");
  if (!(kappa >= 0.0)) ThrowParameter("kappa must be >= 0");
  if (!(sampling > 0.0 && sampling <= 1.0)) {
    ThrowParameter("user sampling probability must lie in (0,1]");
  }
  if (!(delta > 0.0 && delta < 1.0)) ThrowParameter("delta must lie in (0,1)");
  if (sigma && !(*sigma >= 0.0)) ThrowParameter("sigma must be >= 0");
  if (!sigma && epsilons.empty()) {
    ThrowParameter("give either a fixed sigma or at least one epsilon budget");
  }
  if (seeds.empty()) ThrowParameter("at least one seed is required");
  if (algorithms.empty()) ThrowParameter("at least one algorithm is required");
  if (setting == Deployment::kDecentralized &&
      std::find(algorithms.begin(), algorithms.end(), Algorithm::kDpsgd) !=
          algorithms.end()) {
    ThrowParameter("the DP-SGD baseline has no decentralized variant");
  }
}

TrainTestSplit PrepareData(const ExperimentConfig& config) {
  const LassoDataset data = GenLasso(config.n, config.p, config.support,
                                     config.noise_std, config.data_seed);
  return SplitDataset(data, config.train_fraction, config.data_seed);
}

const std::vector<double>& KappaGrid() {
  static const std::vector<double> kGrid = {1e-4, 3e-4, 1e-3,
                                            3e-3, 1e-2, 3e-2};
  return kGrid;
}

std::size_t UsersPerRound(const ExperimentConfig& config,
                          std::size_t n_train) {
  switch (config.setting) {
    case Deployment::kCentralized:
      return n_train;
    case Deployment::kDecentralized:
      return 1;
    case Deployment::kFederated: {
      const auto m = static_cast<std::size_t>(
          std::llround(config.sampling * static_cast<double>(n_train)));
      return std::clamp<std::size_t>(m, 1, n_train);
    }
  }
  return n_train;
}

PrivacySetting AccountingSetting(const ExperimentConfig& config) {
  switch (config.setting) {
    case Deployment::kCentralized:
      return PrivacySetting::kCentralized;
    case Deployment::kFederated:
      return PrivacySetting::kFederatedCentral;
    case Deployment::kDecentralized:
      return PrivacySetting::kNetwork;
  }
  return PrivacySetting::kCentralized;
}

AccountingParams AccountingFor(const ExperimentConfig& config,
                               Algorithm algorithm, std::size_t n_train) {
  AccountingParams params;
  params.iterations = static_cast<double>(config.iterations);
  params.n = n_train;
  params.m = UsersPerRound(config, n_train);
  params.participations =
      static_cast<double>(EstimateParticipations(config.iterations, n_train));
  double l_gamma = config.clip;
  if (config.setting == Deployment::kCentralized) {
    l_gamma *= static_cast<double>(n_train);
  }
  if (algorithm == Algorithm::kDpsgd) l_gamma /= 2.0;
  params.lipschitz = l_gamma;
  params.gamma = 1.0;
  return params;
}

double CalibrateFor(const ExperimentConfig& config, Algorithm algorithm,
                    std::size_t n_train, double epsilon) {
  return CalibrateSigma(DpTarget{epsilon, config.delta},
                        AccountingSetting(config),
                        AccountingFor(config, algorithm, n_train));
}

double AchievedEpsilon(const ExperimentConfig& config, Algorithm algorithm,
                       std::size_t n_train, double sigma) {
  if (!(sigma > 0.0)) return kInf;
  const RdpCurve curve = AccountCurve(AccountingSetting(config),
                                      AccountingFor(config, algorithm, n_train),
                                      sigma);
  return RdpToDp(curve, config.delta).epsilon;
}

RunOutput RunAlgorithmTraced(const ExperimentConfig& config,
                             Algorithm algorithm, const LassoDataset& train,
                             double sigma, std::uint64_t seed,
                             const AdmmTraceOptions& options) {
  const std::uint64_t run_seed = kRunSeedSalt ^ seed;
  RunOutput out;
  if (algorithm == Algorithm::kDpsgd) {
    DpsgdConfig sgd;
    sgd.step = config.step;
    sgd.clip = config.clip;
    sgd.sigma = sigma;
    sgd.iterations = config.iterations;
    sgd.batch = UsersPerRound(config, train.n());
    sgd.kappa = config.kappa;
    sgd.seed = run_seed;
    out.x = DpsgdBaseline(train, sgd);
    return out;
  }
  const ConsensusProblem problem =
      MakeLassoConsensus(train, config.kappa, config.gamma, config.clip);
  AdmmRunConfig run;
  run.lambda = config.lambda;
  run.sigma = sigma;
  run.iterations = config.iterations;
  run.seed = run_seed;
  const BlockVector u0(problem.n, problem.p);
  switch (config.setting) {
    case Deployment::kCentralized: {
      AdmmRelease r = CentralizedRun(problem, u0, run, options);
      out.x = std::move(r.z);
      out.trace = std::move(r.trace);
      break;
    }
    case Deployment::kFederated: {
      FederatedRelease r = FederatedRun(
          problem, u0, run, UsersPerRound(config, train.n()), options);
      out.x = std::move(r.z);
      out.trace = std::move(r.trace);
      break;
    }
    case Deployment::kDecentralized: {
      DecentralizedRelease r = DecentralizedRun(problem, u0, run, options);
      out.x = std::move(r.z);
      out.trace = std::move(r.trace);
      out.log = std::move(r.log);
      break;
    }
  }
  return out;
}

Vec RunAlgorithm(const ExperimentConfig& config, Algorithm algorithm,
                 const LassoDataset& train, double sigma, std::uint64_t seed) {
  return RunAlgorithmTraced(config, algorithm, train, sigma, seed, {}).x;
}

std::vector<TunedChoice> Tune(ExperimentConfig& config,
                              const LassoDataset& train) {
  static const double kGammaOverN[] = {0.01, 0.1, 1.0};
  static const double kLambda[] = {0.1, 0.3, 0.5, 1.0};
  static const double kStep[] = {0.1, 0.3, 0.5, 1.0};
  static const double kClip[] = {0.1, 1.0, 10.0};
  const double n_train = static_cast<double>(train.n());
  const double budget =
      config.epsilons.empty()
          ? 0.0
          : *std::min_element(config.epsilons.begin(), config.epsilons.end());

  // Noise scales with the clip threshold, so it is calibrated per trial.
  auto sigma_for = [&](const ExperimentConfig& c, Algorithm alg) {
    if (c.sigma) return *c.sigma;
    return CalibrateFor(c, alg, train.n(), budget);
  };

  std::vector<TunedChoice> tuned;
  for (Algorithm alg : config.algorithms) {
    TunedChoice best;
    best.algorithm = alg;
    best.train_objective = kInf;
    ExperimentConfig trial = config;
    auto consider = [&](ExperimentConfig& c) {
      const double sigma = sigma_for(c, alg);
      const Vec x = RunAlgorithm(c, alg, train, sigma, config.tuning_seed);
      const double obj = LassoObjective(train, x, c.kappa);
      if (obj < best.train_objective) {
        best = {alg, c.gamma, c.lambda, c.step, c.clip, sigma, obj};
      }
    };
    for (double clip : kClip) {
      trial.clip = clip;
      if (alg == Algorithm::kAdmm) {
        for (double g : kGammaOverN) {
          for (double lam : kLambda) {
            trial.gamma = g * n_train;
            trial.lambda = lam;
            consider(trial);
          }
        }
      } else {
        for (double s : kStep) {
          trial.step = s;
          consider(trial);
        }
      }
    }
    tuned.push_back(best);
  }
  return tuned;
}

ExperimentResult RunExperiment(ExperimentConfig config) {
  config.Validate();
  const TrainTestSplit data = PrepareData(config);
  ExperimentResult result;
  if (config.cross_validate_kappa) {
    config.kappa = SelectKappaByCrossValidation(data.train, KappaGrid(), 5,
                                                config.data_seed);
  }
  result.kappa = config.kappa;
  result.zero_test_objective =
      LassoObjective(data.test, Vec(config.p, 0.0), config.kappa);
  if (config.tune) result.tuned = Tune(config, data.train);

  std::vector<double> budgets = config.epsilons;
  if (config.sigma) budgets = {kInf};
  for (double target : budgets) {
    for (Algorithm alg : config.algorithms) {
      ExperimentConfig cell = config;
      for (const TunedChoice& t : result.tuned) {
        if (t.algorithm != alg) continue;
        cell.gamma = t.gamma;
        cell.lambda = t.lambda;
        cell.step = t.step;
        cell.clip = t.clip;
      }
      const double sigma =
          config.sigma ? *config.sigma
                       : CalibrateFor(cell, alg, data.train.n(), target);
      const double achieved =
          AchievedEpsilon(cell, alg, data.train.n(), sigma);
      for (std::uint64_t seed : config.seeds) {
        const auto start = std::chrono::steady_clock::now();
        const Vec x = RunAlgorithm(cell, alg, data.train, sigma, seed);
        const auto stop = std::chrono::steady_clock::now();
        ResultRow row;
        row.setting = DeploymentName(config.setting);
        row.algorithm = AlgorithmName(alg);
        row.epsilon = achieved;
        row.delta = config.delta;
        row.sigma = sigma;
        row.iterations = config.iterations;
        row.seed = seed;
        row.train_objective = LassoObjective(data.train, x, config.kappa);
        row.test_objective = LassoObjective(data.test, x, config.kappa);
        row.runtime_ms =
            std::chrono::duration<double, std::milli>(stop - start).count();
        row.target_epsilon = target;
        result.rows.push_back(std::move(row));
      }
    }
  }
  return result;
}

std::vector<SummaryRow> Summarize(const std::vector<ResultRow>& rows) {
  std::map<std::pair<double, std::string>, std::vector<double>> groups;
  for (const ResultRow& r : rows) {
    groups[{r.target_epsilon, r.algorithm}].push_back(r.test_objective);
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, values] : groups) {
    SummaryRow s;
    s.target_epsilon = key.first;
    s.algorithm = key.second;
    s.count = values.size();
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    s.mean_test_objective = mean;
    s.std_test_objective =
        values.size() > 1
            ? std::sqrt(var / static_cast<double>(values.size() - 1))
            : 0.0;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace dpfix
