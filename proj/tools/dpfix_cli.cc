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

// dpfix command-line tool.
//
//   dpfix solve      one run, writes trace.csv (and observations.csv)
//   dpfix bench      budget x algorithm x seed grid, writes results.csv
//   dpfix account    RDP curve and (epsilon, delta) for given parameters
//   dpfix calibrate  noise level meeting a target budget
//
// CSV files go to $DPFIX_OUTPUT_DIR (default: working directory). Exit
// codes: 0 ok, 2 parameter, 3 structural, 4 model, 5 condition not met,
// 6 I/O, 1 anything else.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpfix/config.h"
#include "dpfix/csv.h"
#include "dpfix/errors.h"
#include "dpfix/experiment.h"
#include "dpfix/privacy.h"

namespace dpfix {
namespace {

int ExitCode(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kParameter:
      return 2;
    case ErrorCategory::kStructural:
      return 3;
    case ErrorCategory::kModel:
      return 4;
    case ErrorCategory::kConditionNotMet:
      return 5;
    case ErrorCategory::kIo:
      return 6;
  }
  return 1;
}

std::string OutputPath(const std::string& name) {
  const std::filesystem::path dir(OutputDirectory());
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) ThrowIo("cannot create output directory '" + dir.string() + "'");
  return (dir / name).string();
}

// Experiment flags shared by `solve` and `bench`. Flags are parsed as
// strings and funneled through the config-file parser so both routes apply
// the same validation.
struct ExperimentFlags {
  std::string config_file;
  KeyValues values;
  std::vector<std::string> keys = {
      "setting", "n",       "p",         "support",    "noise_std",
      "train_fraction",     "data_seed", "kappa",      "K",
      "lambda",  "gamma",   "clip",      "step",       "sampling",
      "sigma",   "epsilons", "delta",    "seeds",      "num_seeds",
      "algorithms",         "tune",      "tuning_seed"};
  std::vector<std::string> raw = std::vector<std::string>(keys.size());

  void Register(CLI::App* app) {
    app->add_option("--config", config_file,
                    "key=value file; its entries override flags");
    for (std::size_t i = 0; i < keys.size(); ++i) {
      app->add_option("--" + keys[i], raw[i]);
    }
  }

  ExperimentConfig Build() {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (!raw[i].empty()) values[keys[i]] = raw[i];
    }
    if (!config_file.empty()) {
      for (const auto& [k, v] : ReadKeyValueFile(config_file)) values[k] = v;
    }
    ExperimentConfig config;
    ApplyKeyValues(values, config);
    return config;
  }
};

struct AccountFlags {
  std::string setting = "centralized";
  double iterations = 1;
  std::optional<double> participations;
  double lipschitz = 1.0;
  double gamma = 1.0;
  std::size_t n = 1;
  std::size_t m = 1;
  bool secure_aggregation = false;
  std::vector<double> alphas;

  void Register(CLI::App* app) {
    app->add_option("--setting", setting,
                    "centralized | federated_central | local | network");
    app->add_option("--K", iterations, "iterations");
    app->add_option("--Ki", participations,
                    "per-user participations (default ceil(K/n))");
    app->add_option("--L", lipschitz, "Lipschitz constant");
    app->add_option("--gamma", gamma);
    app->add_option("--n", n, "users / items");
    app->add_option("--m", m, "users per federated round");
    app->add_flag("--secure-agg", secure_aggregation);
    app->add_option("--alphas", alphas, "Renyi orders (default grid)")
        ->delimiter(',');
  }

  AccountingParams Params() const {
    AccountingParams p;
    p.iterations = iterations;
    p.participations = participations
                           ? *participations
                           : static_cast<double>(EstimateParticipations(
                                 static_cast<std::size_t>(iterations), n));
    p.lipschitz = lipschitz;
    p.gamma = gamma;
    p.n = n;
    p.m = m;
    p.secure_aggregation = secure_aggregation;
    return p;
  }

  const std::vector<double>& Alphas() const {
    return alphas.empty() ? DefaultAlphaGrid() : alphas;
  }
};

void RunSolve(ExperimentFlags& flags, const std::string& algorithm_name,
              std::uint64_t seed) {
  ExperimentConfig config = flags.Build();
  const Algorithm algorithm = ParseAlgorithm(algorithm_name);
  config.algorithms = {algorithm};
  config.Validate();
  const TrainTestSplit data = PrepareData(config);
  if (!flags.values.count("kappa") && config.cross_validate_kappa) {
    config.kappa = SelectKappaByCrossValidation(data.train, KappaGrid(), 5,
                                                config.data_seed);
  }
  double sigma = 0.0;
  if (config.sigma) {
    sigma = *config.sigma;
  } else {
    sigma = CalibrateFor(config, algorithm, data.train.n(),
                         config.epsilons.front());
  }
  AdmmTraceOptions options;
  const LassoDataset& train = data.train;
  const double kappa = config.kappa;
  options.objective = [&](std::span<const double> z) {
    return LassoObjective(train, z, kappa);
  };
  const RunOutput out =
      RunAlgorithmTraced(config, algorithm, train, sigma, seed, options);
  const double epsilon =
      AchievedEpsilon(config, algorithm, data.train.n(), sigma);
  std::cout << "setting=" << DeploymentName(config.setting)
            << " algorithm=" << AlgorithmName(algorithm)
            << " kappa=" << FormatNumber(config.kappa)
            << " sigma=" << FormatNumber(sigma)
            << " epsilon=" << FormatNumber(epsilon)
            << " delta=" << FormatNumber(config.delta)
            << " train_obj=" << FormatNumber(LassoObjective(train, out.x, kappa))
            << " test_obj="
            << FormatNumber(LassoObjective(data.test, out.x, kappa)) << '\n';
  if (!out.trace.records.empty()) {
    const std::string path = OutputPath("trace.csv");
    WriteFile(path, [&](std::ostream& os) { WriteTraceCsv(os, out.trace); });
    std::cout << "wrote " << path << '\n';
  }
  if (out.log) {
    const std::string path = OutputPath("observations.csv");
    WriteFile(path,
              [&](std::ostream& os) { WriteObservationLogCsv(os, *out.log); });
    std::cout << "wrote " << path << '\n';
  }
}

void RunBench(ExperimentFlags& flags) {
  ExperimentConfig config = flags.Build();
  const ExperimentResult result = RunExperiment(config);
  const std::string results = OutputPath("results.csv");
  WriteFile(results,
            [&](std::ostream& os) { WriteResultsCsv(os, result.rows); });
  const std::vector<SummaryRow> summary = Summarize(result.rows);
  const std::string summary_path = OutputPath("summary.csv");
  WriteFile(summary_path,
            [&](std::ostream& os) { WriteSummaryCsv(os, summary); });
  std::cout << "kappa=" << FormatNumber(result.kappa)
            << " zero_model_test_obj="
            << FormatNumber(result.zero_test_objective) << '\n';
  for (const TunedChoice& t : result.tuned) {
    std::cout << "tuned " << AlgorithmName(t.algorithm);
    if (t.algorithm == Algorithm::kAdmm) {
      std::cout << " gamma=" << FormatNumber(t.gamma)
                << " lambda=" << FormatNumber(t.lambda);
    } else {
      std::cout << " step=" << FormatNumber(t.step);
    }
    std::cout << " clip=" << FormatNumber(t.clip) << '\n';
  }
  WriteSummaryCsv(std::cout, summary);
  std::cout << "wrote " << results << " and " << summary_path << '\n';
}

void RunAccount(const AccountFlags& flags, double sigma, double delta) {
  const RdpCurve curve = AccountCurve(ParsePrivacySetting(flags.setting),
                                      flags.Params(), sigma, flags.Alphas());
  WriteRdpCurveCsv(std::cout, curve);
  const DpGuarantee dp = RdpToDp(curve, delta);
  std::cout << "# epsilon_dp=" << FormatNumber(dp.epsilon)
            << " delta=" << FormatNumber(delta)
            << " alpha=" << FormatNumber(dp.alpha) << '\n';
}

void RunCalibrate(const AccountFlags& flags, std::optional<double> epsilon,
                  double delta, std::optional<double> alpha,
                  std::optional<double> rdp_epsilon) {
  const PrivacySetting setting = ParsePrivacySetting(flags.setting);
  double sigma = 0.0;
  if (rdp_epsilon) {
    if (!alpha) ThrowParameter("--rdp-epsilon needs --alpha");
    sigma = CalibrateSigma(RdpTarget{*alpha, *rdp_epsilon}, setting,
                           flags.Params());
  } else if (epsilon) {
    sigma = CalibrateSigma(DpTarget{*epsilon, delta}, setting, flags.Params(),
                           flags.Alphas());
  } else {
    ThrowParameter("give --epsilon (with --delta) or --alpha and --rdp-epsilon");
  }
  std::cout << "sigma=" << FormatNumber(sigma) << '\n';
}

int Main(int argc, char** argv) {
  CLI::App app{"Differentially private fixed-point optimization toolkit"};
  app.require_subcommand(1);

  ExperimentFlags solve_flags;
  std::string solve_algorithm = "admm";
  std::uint64_t solve_seed = 0;
  CLI::App* solve = app.add_subcommand("solve", "run one algorithm once");
  solve_flags.Register(solve);
  solve->add_option("--algorithm", solve_algorithm, "admm | dpsgd");
  solve->add_option("--seed", solve_seed);

  ExperimentFlags bench_flags;
  CLI::App* bench = app.add_subcommand("bench", "budget comparison grid");
  bench_flags.Register(bench);

  AccountFlags account_flags;
  double account_sigma = 1.0;
  double account_delta = 1e-6;
  CLI::App* account = app.add_subcommand("account", "print the RDP curve");
  account_flags.Register(account);
  account->add_option("--sigma", account_sigma)->required();
  account->add_option("--delta", account_delta);

  AccountFlags calibrate_flags;
  std::optional<double> cal_epsilon;
  double cal_delta = 1e-6;
  std::optional<double> cal_alpha;
  std::optional<double> cal_rdp_epsilon;
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "noise level for a target budget");
  calibrate_flags.Register(calibrate);
  calibrate->add_option("--epsilon", cal_epsilon, "(epsilon, delta) target");
  calibrate->add_option("--delta", cal_delta);
  calibrate->add_option("--alpha", cal_alpha, "order of an RDP target");
  calibrate->add_option("--rdp-epsilon", cal_rdp_epsilon, "RDP target");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) RunSolve(solve_flags, solve_algorithm, solve_seed);
    if (*bench) RunBench(bench_flags);
    if (*account) RunAccount(account_flags, account_sigma, account_delta);
    if (*calibrate) {
      RunCalibrate(calibrate_flags, cal_epsilon, cal_delta, cal_alpha,
                   cal_rdp_epsilon);
    }
  } catch (const Error& e) {
    std::cerr << "error[" << CategoryName(e.category()) << "]: " << e.what()
              << '\n';
    return ExitCode(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace dpfix

int main(int argc, char** argv) { return dpfix::Main(argc, argv); }
