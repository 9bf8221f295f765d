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

#include "dpfix/utility.h"

#include <cmath>

#include "dpfix/errors.h"

namespace dpfix {
namespace {

void RequireTauQ(double tau, double q) {
  if (!(tau >= 0.0 && tau < 1.0)) ThrowParameter("tau must lie in [0,1)");
  if (!(q > 0.0 && q <= 1.0)) ThrowParameter("q must lie in (0,1]");
}

void RequireCPositive(double c) {
  if (!(c > 0.0)) {
    throw ConditionNotMet("c>0",
                          "noise level too small: need "
                          "(sigma sqrt(p) + zeta)/sqrt(q) > 1 - tau");
  }
}

}  // namespace

void UtilityParams::Validate() const {
  RequireTauQ(tau, q);
  if (!(sigma >= 0.0)) ThrowParameter("sigma must be >= 0");
  if (!(zeta >= 0.0)) ThrowParameter("zeta must be >= 0");
  if (p == 0) ThrowParameter("dimension p must be >= 1");
  if (!(initial_dist_sq >= 0.0)) ThrowParameter("D must be >= 0");
}

double NoiselessRate(double tau, double q) {
  RequireTauQ(tau, q);
  return 1.0 - q * q * (1.0 - tau) / 8.0;
}

UtilityBound EvaluateUtilityBound(const UtilityParams& params) {
  params.Validate();
  const double pd = static_cast<double>(params.p);
  const double spread = params.sigma * std::sqrt(pd) + params.zeta;
  const double one_minus_tau = 1.0 - params.tau;
  if (!(spread > std::sqrt(params.q) * one_minus_tau)) {
    throw ConditionNotMet("sigma*sqrt(p)+zeta>sqrt(q)(1-tau)",
                          "utility bound needs sigma sqrt(p) + zeta > "
                          "sqrt(q)(1 - tau)");
  }
  UtilityBound out;
  out.transient =
      std::pow(NoiselessRate(params.tau, params.q),
               static_cast<double>(params.k)) *
      params.initial_dist_sq;
  const double q = params.q;
  out.floor = 8.0 * (spread / (std::sqrt(q) * one_minus_tau) +
                     (pd * params.sigma * params.sigma +
                      params.zeta * params.zeta) /
                         (q * q * q * one_minus_tau * one_minus_tau *
                          one_minus_tau));
  return out;
}

double ContractionB(double tau, double q) {
  RequireTauQ(tau, q);
  return std::sqrt(1.0 - q * (1.0 - tau));
}

double NoiseExcessC(double tau, double q, double sigma, double zeta,
                    std::size_t p) {
  RequireTauQ(tau, q);
  const double sigma1 =
      (sigma * std::sqrt(static_cast<double>(p)) + zeta) / std::sqrt(q);
  return sigma1 / (1.0 - tau) - 1.0;
}

double OptimalLambda(double tau, double q, double c) {
  RequireCPositive(c);
  const double b = ContractionB(tau, q);
  return (1.0 / (1.0 - b)) * (1.0 - q / (2.0 * (1.0 + c)));
}

LearningRate LambdaRangeFromC(double tau, double q, double c) {
  RequireTauQ(tau, q);
  RequireCPositive(c);
  LearningRate r;
  r.b = ContractionB(tau, q);
  r.c = c;
  const double one_c = 1.0 + c;
  const double base = (one_c - q) / (one_c * (1.0 - r.b));
  r.lambda_min = base;
  r.lambda_max =
      base * (0.5 + 0.5 * std::sqrt(1.0 + 4.0 * one_c * (1.0 - r.b) /
                                              ((1.0 - tau) * (one_c - q) *
                                               (one_c - q))));
  r.lambda_star = OptimalLambda(tau, q, c);
  r.clamped = r.lambda_star > 1.0;
  r.lambda_clamped = r.clamped ? 1.0 : r.lambda_star;
  return r;
}

LearningRate LambdaRange(double tau, double q, double sigma, double zeta,
                         std::size_t p) {
  return LambdaRangeFromC(tau, q, NoiseExcessC(tau, q, sigma, zeta, p));
}

double Chi(double tau, double q, double c, double lambda) {
  RequireTauQ(tau, q);
  const double b = ContractionB(tau, q);
  const double sigma1 = (1.0 + c) * (1.0 - tau);
  return 1.0 + lambda * (sigma1 - (1.0 - b * b)) -
         lambda * lambda * sigma1 * (1.0 - b);
}

double ChiAtOptimum(double tau, double q, double c) {
  RequireCPositive(c);
  const double b = ContractionB(tau, q);
  return 1.0 - (1.0 + b) * (1.0 + c - q / 2.0) / (2.0 * (1.0 + c));
}

Deployment ParseDeployment(const std::string& name) {
  if (name == "centralized") return Deployment::kCentralized;
  if (name == "federated") return Deployment::kFederated;
  if (name == "decentralized") return Deployment::kDecentralized;
  ThrowParameter("unknown deployment '" + name + "'");
}

TradeoffTerms FederatedTradeoffUnchecked(double alpha, double epsilon,
                                         double lipschitz, double gamma,
                                         double p, double n, double r_frac,
                                         double tau) {
  const double omt = 1.0 - tau;
  TradeoffTerms t;
  t.first = std::sqrt(p * alpha) * lipschitz * gamma /
            (std::sqrt(epsilon * r_frac) * n * omt);
  t.second = p * alpha * lipschitz * lipschitz * gamma * gamma /
             (epsilon * r_frac * r_frac * n * n * omt * omt * omt);
  return t;
}

TradeoffTerms TradeoffBreakdown(Deployment deployment, double alpha,
                                double epsilon, double lipschitz, double gamma,
                                double p, double n, double r_frac,
                                double tau) {
  if (!(alpha > 1.0)) ThrowParameter("alpha must be > 1");
  if (!(epsilon > 0.0)) ThrowParameter("epsilon must be > 0");
  if (!(n >= 1.0)) ThrowParameter("n must be >= 1");
  if (!(p >= 1.0)) ThrowParameter("p must be >= 1");
  if (!(tau >= 0.0 && tau < 1.0)) ThrowParameter("tau must lie in [0,1)");
  const double omt = 1.0 - tau;
  const double l2g2 = lipschitz * lipschitz * gamma * gamma;
  TradeoffTerms t;
  switch (deployment) {
    case Deployment::kCentralized:
      t.first = std::sqrt(p * alpha) * lipschitz * gamma /
                (std::sqrt(epsilon) * n * omt);
      t.second = p * alpha * l2g2 / (epsilon * n * n * omt * omt * omt);
      break;
    case Deployment::kFederated:
      if (!(r_frac > 0.0 && r_frac < 0.2)) {
        ThrowParameter("federated participation ratio must lie in (0, 1/5)");
      }
      t = FederatedTradeoffUnchecked(alpha, epsilon, lipschitz, gamma, p, n,
                                     r_frac, tau);
      break;
    case Deployment::kDecentralized:
      t.first = std::sqrt(p * alpha) * lipschitz * gamma /
                (std::sqrt(epsilon * n) * omt);
      t.second = p * alpha * l2g2 / (epsilon * n * omt * omt * omt);
      break;
  }
  return t;
}

double Tradeoff(Deployment deployment, double alpha, double epsilon,
                double lipschitz, double gamma, double p, double n,
                double r_frac, double tau) {
  return TradeoffBreakdown(deployment, alpha, epsilon, lipschitz, gamma, p, n,
                           r_frac, tau)
      .total();
}

}  // namespace dpfix
