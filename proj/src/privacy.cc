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

#include "dpfix/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "dpfix/errors.h"

namespace dpfix {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void RequireAlpha(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    ThrowParameter("Renyi order alpha must be a finite value > 1");
  }
}

void RequireSigma(double sigma) {
  if (!(sigma > 0.0)) ThrowParameter("noise std sigma must be > 0");
}

void RequireNonNegative(double v, const char* name) {
  if (!(v >= 0.0)) ThrowParameter(std::string(name) + " must be >= 0");
}

void RequirePositive(double v, const char* name) {
  if (!(v > 0.0)) ThrowParameter(std::string(name) + " must be > 0");
}

std::string Format(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

// Right-hand side of the alpha condition for the subsampled Gaussian bound.
double SubsamplingAlphaLimit(double alpha, double q, double sigma) {
  const double m = std::log(1.0 + 1.0 / (q * (alpha - 1.0)));
  const double s2 = sigma * sigma;
  return (m * m * s2 / 2.0 - std::log(5.0 * s2)) /
         (m + std::log(q * alpha) + 1.0 / (2.0 * s2));
}

double NetworkSigmaFloor(double alpha, double lipschitz, double gamma) {
  return 2.0 * lipschitz * gamma * std::sqrt(alpha * (alpha - 1.0));
}

}  // namespace

const std::vector<double>& DefaultAlphaGrid() {
  static const std::vector<double> kGrid = {1.5, 2,  3,  4,   8,
                                            16,  32, 64, 128, 256};
  return kGrid;
}

RdpCurve::RdpCurve(std::vector<double> alphas)
    : alphas_(std::move(alphas)),
      epsilons_(alphas_.size(), 0.0),
      provenance_(alphas_.size()) {
  for (double a : alphas_) RequireAlpha(a);
}

void RdpCurve::Set(std::size_t i, double epsilon, std::string provenance) {
  if (i >= alphas_.size()) ThrowStructural("RDP curve index out of range");
  if (!(epsilon >= 0.0)) ThrowParameter("RDP epsilon must be >= 0");
  epsilons_[i] = epsilon;
  provenance_[i] = std::move(provenance);
}

RdpCurve& RdpCurve::operator+=(const RdpCurve& other) {
  if (alphas_ != other.alphas_) {
    ThrowStructural("cannot compose RDP curves on different alpha grids");
  }
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    epsilons_[i] += other.epsilons_[i];
    if (other.provenance_[i].empty()) continue;
    if (!provenance_[i].empty()) provenance_[i] += " + ";
    provenance_[i] += other.provenance_[i];
  }
  return *this;
}

RdpCurve Compose(const std::vector<RdpCurve>& curves) {
  if (curves.empty()) ThrowStructural("nothing to compose");
  RdpCurve total(curves.front().alphas());
  for (const RdpCurve& c : curves) total += c;
  return total;
}

DpGuarantee RdpToDp(const RdpCurve& curve, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) ThrowParameter("delta must lie in (0,1)");
  if (curve.size() == 0) ThrowStructural("RDP curve has an empty alpha grid");
  DpGuarantee best{kInf, curve.alphas().front()};
  const double log_inv_delta = std::log(1.0 / delta);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double a = curve.alphas()[i];
    const double e = curve.epsilon(i) + log_inv_delta / (a - 1.0);
    if (e < best.epsilon) best = {e, a};
  }
  return best;
}

double GaussianRdp(double sensitivity, double sigma, double alpha) {
  RequireSigma(sigma);
  RequireAlpha(alpha);
  RequireNonNegative(sensitivity, "sensitivity");
  return alpha * sensitivity * sensitivity / (2.0 * sigma * sigma);
}

double SensitivityConsensus(double lipschitz, double gamma, double lambda,
                            double n) {
  RequirePositive(lipschitz, "Lipschitz constant L");
  RequirePositive(gamma, "gamma");
  RequirePositive(n, "n");
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    ThrowParameter("lambda must lie in (0,1]");
  }
  return 4.0 * lambda * lipschitz * gamma / n;
}

double SensitivityGeneral(double lipschitz, double gamma, double lambda,
                          double n, double a_norm, double omega_a) {
  if (!(omega_a > 0.0)) {
    ThrowModel("A is not full rank (smallest singular value is 0)");
  }
  RequirePositive(a_norm, "||A||_2");
  return SensitivityConsensus(lipschitz, gamma, lambda, n) * a_norm / omega_a;
}

double CentralizedEpsilon(double alpha, double iterations, double lipschitz,
                          double gamma, double sigma, double n) {
  RequireAlpha(alpha);
  RequireSigma(sigma);
  RequireNonNegative(iterations, "K");
  RequireNonNegative(lipschitz, "L");
  RequireNonNegative(gamma, "gamma");
  RequirePositive(n, "n");
  return 8.0 * alpha * iterations * lipschitz * lipschitz * gamma * gamma /
         (sigma * sigma * n * n);
}

void CheckSubsamplingRegime(double alpha, double q, double sigma) {
  RequireAlpha(alpha);
  RequireSigma(sigma);
  if (!(q > 0.0 && q <= 1.0)) ThrowParameter("q must lie in (0,1]");
  if (!(q < 0.2)) {
    throw ConditionNotMet("q<1/5", "subsampling bound needs q < 1/5, got q=" +
                                       Format(q));
  }
  if (!(sigma >= 4.0)) {
    throw ConditionNotMet("sigma>=4",
                          "subsampling bound needs sigma >= 4, got sigma=" +
                              Format(sigma));
  }
  const double limit = SubsamplingAlphaLimit(alpha, q, sigma);
  if (!(alpha <= limit)) {
    throw ConditionNotMet(
        "alpha<=(M^2 sigma^2/2-ln(5 sigma^2))/(M+ln(q alpha)+1/(2 sigma^2))",
        "subsampling bound at alpha=" + Format(alpha) + ", q=" + Format(q) +
            ", sigma=" + Format(sigma) + " needs alpha <= " + Format(limit));
  }
}

bool SubsamplingRegimeHolds(double alpha, double q, double sigma) {
  try {
    CheckSubsamplingRegime(alpha, q, sigma);
    return true;
  } catch (const ConditionNotMet&) {
    return false;
  }
}

double SubsampledRdp(double alpha, double q, double sensitivity, double sigma) {
  RequireNonNegative(sensitivity, "sensitivity");
  CheckSubsamplingRegime(alpha, q, sigma);
  return 2.0 * alpha * q * q * sensitivity * sensitivity / (sigma * sigma);
}

FederatedEpsilon FederatedEpsilons(double alpha, double iterations,
                                   double lipschitz, double gamma, double sigma,
                                   std::size_t m, std::size_t n,
                                   bool secure_aggregation) {
  if (n == 0 || m == 0 || m > n) ThrowParameter("need 1 <= m <= n");
  RequireNonNegative(iterations, "K");
  if (!(5.0 * static_cast<double>(m) < static_cast<double>(n))) {
    throw ConditionNotMet("m<n/5", "federated bound needs m < n/5, got m=" +
                                       std::to_string(m) +
                                       ", n=" + std::to_string(n));
  }
  const double q = static_cast<double>(m) / static_cast<double>(n);
  CheckSubsamplingRegime(alpha, q, sigma);
  const double l2g2 = lipschitz * lipschitz * gamma * gamma;
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  FederatedEpsilon out;
  out.central = 16.0 * alpha * iterations * l2g2 / (sigma * sigma * nn);
  out.local_per_round = 8.0 * alpha * l2g2 / (sigma * sigma);
  if (secure_aggregation) {
    const double mm = static_cast<double>(m) * static_cast<double>(m);
    out.local_per_round /= mm;
  }
  return out;
}

double FederatedCentralEpsilon(double alpha, double iterations,
                               double lipschitz, double gamma, double sigma,
                               std::size_t m, std::size_t n,
                               bool secure_aggregation) {
  return FederatedEpsilons(alpha, iterations, lipschitz, gamma, sigma, m, n,
                           secure_aggregation)
      .central;
}

double LocalEpsilon(double alpha, double participations, double lipschitz,
                    double gamma, double sigma) {
  RequireAlpha(alpha);
  RequireSigma(sigma);
  RequireNonNegative(participations, "K_i");
  return 8.0 * alpha * participations * lipschitz * lipschitz * gamma * gamma /
         (sigma * sigma);
}

double AmplificationByIteration(double displacement, double steps,
                                double sigma, double alpha) {
  if (!(steps >= 1.0)) ThrowParameter("number of steps must be >= 1");
  RequireSigma(sigma);
  RequireAlpha(alpha);
  RequireNonNegative(displacement, "displacement");
  return alpha * displacement * displacement / (2.0 * steps * sigma * sigma);
}

double NetworkRdpEpsilon(double alpha, double participations, double lipschitz,
                         double gamma, double sigma, std::size_t n) {
  RequireAlpha(alpha);
  RequireSigma(sigma);
  RequireNonNegative(participations, "K_i");
  if (n < 2) ThrowParameter("network bound needs n >= 2");
  const double floor = NetworkSigmaFloor(alpha, lipschitz, gamma);
  if (!(sigma > floor)) {
    throw ConditionNotMet("sigma>2*L*gamma*sqrt(alpha(alpha-1))",
                          "network bound needs sigma > " + Format(floor) +
                              ", got sigma=" + Format(sigma));
  }
  const double nd = static_cast<double>(n);
  return 8.0 * alpha * participations * lipschitz * lipschitz * gamma * gamma *
         std::log(nd) / (sigma * sigma * nd);
}

double NetworkAmplificationSum(std::size_t n, std::size_t horizon) {
  if (n < 1) ThrowParameter("n must be >= 1");
  const double keep = 1.0 - 1.0 / static_cast<double>(n);
  double power = 1.0;
  double sum = 0.0;
  for (std::size_t k = 1; k <= horizon; ++k) {
    power *= keep;
    sum += power / static_cast<double>(k);
  }
  return sum / static_cast<double>(n);
}

std::size_t EstimateParticipations(std::size_t iterations, std::size_t n) {
  if (n == 0) ThrowParameter("n must be >= 1");
  return (iterations + n - 1) / n;
}

PrivacySetting ParsePrivacySetting(const std::string& name) {
  if (name == "centralized") return PrivacySetting::kCentralized;
  if (name == "federated" || name == "federated_central") {
    return PrivacySetting::kFederatedCentral;
  }
  if (name == "local") return PrivacySetting::kLocal;
  if (name == "network" || name == "decentralized") {
    return PrivacySetting::kNetwork;
  }
  ThrowParameter("unknown privacy setting '" + name + "'");
}

std::string PrivacySettingName(PrivacySetting setting) {
  switch (setting) {
    case PrivacySetting::kCentralized:
      return "centralized";
    case PrivacySetting::kFederatedCentral:
      return "federated_central";
    case PrivacySetting::kLocal:
      return "local";
    case PrivacySetting::kNetwork:
      return "network";
  }
  return "unknown";
}

RdpCurve AccountCurve(PrivacySetting setting, const AccountingParams& params,
                      double sigma, const std::vector<double>& alphas) {
  RdpCurve curve(alphas);
  const AccountingParams& p = params;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double a = alphas[i];
    switch (setting) {
      case PrivacySetting::kCentralized:
        curve.Set(i,
                  CentralizedEpsilon(a, p.iterations, p.lipschitz, p.gamma,
                                     sigma, static_cast<double>(p.n)),
                  "centralized");
        break;
      case PrivacySetting::kLocal:
        curve.Set(i,
                  LocalEpsilon(a, p.participations, p.lipschitz, p.gamma,
                               sigma),
                  "local");
        break;
      case PrivacySetting::kFederatedCentral:
        try {
          curve.Set(i,
                    FederatedCentralEpsilon(a, p.iterations, p.lipschitz,
                                            p.gamma, sigma, p.m, p.n,
                                            p.secure_aggregation),
                    "federated_central");
        } catch (const ConditionNotMet& e) {
          curve.Set(i, kInf, "out_of_regime:" + e.clause());
        }
        break;
      case PrivacySetting::kNetwork:
        try {
          curve.Set(i,
                    NetworkRdpEpsilon(a, p.participations, p.lipschitz,
                                      p.gamma, sigma, p.n),
                    "network");
        } catch (const ConditionNotMet& e) {
          curve.Set(i, kInf, "out_of_regime:" + e.clause());
        }
        break;
    }
  }
  return curve;
}

namespace {

// Smallest achievable epsilon_DP as sigma grows without bound.
double AsymptoticDpEpsilon(PrivacySetting setting, const AccountingParams& p,
                           const std::vector<double>& alphas, double delta) {
  double best = kInf;
  const double q = static_cast<double>(p.m) / static_cast<double>(p.n);
  for (double a : alphas) {
    if (setting == PrivacySetting::kFederatedCentral) {
      // The alpha condition is reachable for large sigma only when its
      // denominator stays positive.
      const double mm = std::log(1.0 + 1.0 / (q * (a - 1.0)));
      if (!(mm + std::log(q * a) > 0.0)) continue;
    }
    best = std::min(best, std::log(1.0 / delta) / (a - 1.0));
  }
  return best;
}

void CheckSettingFeasible(PrivacySetting setting, const AccountingParams& p) {
  if (p.n == 0) ThrowParameter("n must be >= 1");
  if (setting == PrivacySetting::kFederatedCentral &&
      !(5.0 * static_cast<double>(p.m) < static_cast<double>(p.n))) {
    throw ConditionNotMet("m<n/5", "federated bound needs m < n/5");
  }
  if (setting == PrivacySetting::kNetwork && p.n < 2) {
    ThrowParameter("network bound needs n >= 2");
  }
}

constexpr double kSigmaCeiling = 1e15;
constexpr double kRelativeTolerance = 1e-3;

}  // namespace

double CalibrateSigma(const DpTarget& target, PrivacySetting setting,
                      const AccountingParams& params,
                      const std::vector<double>& alphas) {
  if (!(target.delta > 0.0 && target.delta < 1.0)) {
    ThrowParameter("delta must lie in (0,1)");
  }
  if (!(target.epsilon > 0.0)) {
    throw ConditionNotMet("epsilon>0", "an epsilon target of " +
                                           Format(target.epsilon) +
                                           " cannot be met by any sigma");
  }
  CheckSettingFeasible(setting, params);
  const double floor_eps =
      AsymptoticDpEpsilon(setting, params, alphas, target.delta);
  if (!(target.epsilon > floor_eps)) {
    throw ConditionNotMet(
        "epsilon>min_alpha ln(1/delta)/(alpha-1)",
        "epsilon target " + Format(target.epsilon) +
            " is below the conversion floor " + Format(floor_eps) +
            " of the alpha grid");
  }
  auto achieved = [&](double sigma) {
    return RdpToDp(AccountCurve(setting, params, sigma, alphas), target.delta)
        .epsilon;
  };
  const double sigma_min =
      setting == PrivacySetting::kFederatedCentral ? 4.0 : 0.0;
  double hi = std::max(sigma_min, 1.0);
  while (achieved(hi) > target.epsilon) {
    hi *= 2.0;
    if (hi > kSigmaCeiling) {
      throw ConditionNotMet("sigma<=1e15",
                            "no finite sigma meets the epsilon target");
    }
  }
  double lo = hi / 2.0;
  if (setting == PrivacySetting::kFederatedCentral) {
    if (achieved(sigma_min) <= target.epsilon) return sigma_min;
    lo = std::max(lo, sigma_min);
  } else {
    while (lo > 1e-300 && achieved(lo) <= target.epsilon) {
      hi = lo;
      lo /= 2.0;
    }
  }
  while (hi - lo > kRelativeTolerance * hi) {
    const double mid = 0.5 * (lo + hi);
    if (achieved(mid) > target.epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double CalibrateSigma(const RdpTarget& target, PrivacySetting setting,
                      const AccountingParams& params) {
  RequireAlpha(target.alpha);
  if (!(target.epsilon > 0.0)) {
    throw ConditionNotMet("epsilon>0", "an RDP target of " +
                                           Format(target.epsilon) +
                                           " cannot be met by any sigma");
  }
  CheckSettingFeasible(setting, params);
  const AccountingParams& p = params;
  // Every setting has the form coefficient / sigma^2.
  double coefficient = 0.0;
  switch (setting) {
    case PrivacySetting::kCentralized:
      coefficient = CentralizedEpsilon(target.alpha, p.iterations, p.lipschitz,
                                       p.gamma, 1.0, static_cast<double>(p.n));
      break;
    case PrivacySetting::kLocal:
      coefficient = LocalEpsilon(target.alpha, p.participations, p.lipschitz,
                                 p.gamma, 1.0);
      break;
    case PrivacySetting::kFederatedCentral: {
      const double nn = static_cast<double>(p.n) * static_cast<double>(p.n);
      coefficient = 16.0 * target.alpha * p.iterations * p.lipschitz *
                    p.lipschitz * p.gamma * p.gamma / nn;
      break;
    }
    case PrivacySetting::kNetwork: {
      const double nd = static_cast<double>(p.n);
      coefficient = 8.0 * target.alpha * p.participations * p.lipschitz *
                    p.lipschitz * p.gamma * p.gamma * std::log(nd) / nd;
      break;
    }
  }
  double sigma = std::sqrt(coefficient / target.epsilon);

  if (setting == PrivacySetting::kNetwork) {
    const double floor = NetworkSigmaFloor(target.alpha, p.lipschitz, p.gamma);
    if (!(sigma > floor)) {
      sigma = std::nextafter(floor, kInf) * (1.0 + kRelativeTolerance);
    }
  } else if (setting == PrivacySetting::kFederatedCentral) {
    const double q = static_cast<double>(p.m) / static_cast<double>(p.n);
    if (!SubsamplingRegimeHolds(target.alpha, q, sigma)) {
      double lo = std::max(sigma, 4.0);
      if (SubsamplingRegimeHolds(target.alpha, q, lo)) return lo;
      double hi = 2.0 * lo;
      while (!SubsamplingRegimeHolds(target.alpha, q, hi)) {
        hi *= 2.0;
        if (hi > kSigmaCeiling) {
          CheckSubsamplingRegime(target.alpha, q, hi);  // throws
        }
      }
      while (hi - lo > kRelativeTolerance * hi) {
        const double mid = 0.5 * (lo + hi);
        if (SubsamplingRegimeHolds(target.alpha, q, mid)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      sigma = hi;
    }
  }
  return sigma;
}

}  // namespace dpfix
