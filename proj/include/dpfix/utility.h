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

// Closed-form utility bounds for the private fixed-point iteration with a
// tau-contractive operator, plus the privacy/utility trade-off expressions
// of the three ADMM deployments.

#ifndef DPFIX_UTILITY_H_
#define DPFIX_UTILITY_H_

#include <cstddef>
#include <string>

namespace dpfix {

struct UtilityParams {
  double tau = 0.0;    // contraction factor, in [0,1)
  double q = 1.0;      // block activation probability, in (0,1]
  double sigma = 0.0;  // noise std
  double zeta = 0.0;   // E||e_k||^2 <= zeta^2
  std::size_t p = 1;   // block dimension
  double initial_dist_sq = 0.0;  // ||u_0 - u*||^2
  std::size_t k = 0;

  void Validate() const;
};

struct UtilityBound {
  double transient = 0.0;  // (1 - q^2(1-tau)/8)^k D
  double floor = 0.0;      // noise-driven plateau
  double total() const { return transient + floor; }
};

// Throws ConditionNotMet unless sigma sqrt(p) + zeta > sqrt(q)(1 - tau).
UtilityBound EvaluateUtilityBound(const UtilityParams& params);

// Per-iteration contraction of the noiseless bound, 1 - q^2(1-tau)/8.
double NoiselessRate(double tau, double q);

// b = sqrt(1 - q(1-tau)).
double ContractionB(double tau, double q);
// c defined by (sigma sqrt(p) + zeta)/sqrt(q) = (1+c)(1-tau); may be <= 0.
double NoiseExcessC(double tau, double q, double sigma, double zeta,
                    std::size_t p);

struct LearningRate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double lambda_star = 0.0;
  // lambda_star clamped into (0,1], the range the engine accepts.
  double lambda_clamped = 0.0;
  bool clamped = false;
  double b = 0.0;
  double c = 0.0;
};

// Open interval of admissible learning rates and the recommended value.
// Throws ConditionNotMet when c <= 0.
LearningRate LambdaRange(double tau, double q, double sigma, double zeta,
                         std::size_t p);
LearningRate LambdaRangeFromC(double tau, double q, double c);

// lambda*(tau, q, c) = (1/(1-b)) (1 - q/(2(1+c))).
double OptimalLambda(double tau, double q, double c);

// Contraction factor chi at an arbitrary lambda:
// 1 + lambda(sigma_1 - (1 - b^2)) - lambda^2 sigma_1 (1 - b).
double Chi(double tau, double q, double c, double lambda);
// Closed form at lambda*: 1 - (1+b)(1+c-q/2)/(2(1+c)).
double ChiAtOptimum(double tau, double q, double c);

enum class Deployment { kCentralized, kFederated, kDecentralized };

Deployment ParseDeployment(const std::string& name);

struct TradeoffTerms {
  double first = 0.0;
  double second = 0.0;
  double total() const { return first + second; }
};

// Order-of-magnitude privacy/utility trade-off with constants set to 1 and
// log factors dropped. `r_frac` is the federated participation ratio m/n and
// must lie in (0, 1/5) for the federated deployment.
double Tradeoff(Deployment deployment, double alpha, double epsilon,
                double lipschitz, double gamma, double p, double n,
                double r_frac, double tau);
TradeoffTerms TradeoffBreakdown(Deployment deployment, double alpha,
                                double epsilon, double lipschitz, double gamma,
                                double p, double n, double r_frac, double tau);
// The federated expression without the participation-ratio guard.
TradeoffTerms FederatedTradeoffUnchecked(double alpha, double epsilon,
                                         double lipschitz, double gamma,
                                         double p, double n, double r_frac,
                                         double tau);

}  // namespace dpfix

#endif  // DPFIX_UTILITY_H_
