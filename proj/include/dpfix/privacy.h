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

// Renyi-DP accounting for the private fixed-point and ADMM algorithms.
//
// Every closed form below is an upper bound evaluated literally. Bounds
// with a validity regime (subsampling, network DP) never fall back silently:
// outside the regime they raise ConditionNotMet naming the failed clause.

#ifndef DPFIX_PRIVACY_H_
#define DPFIX_PRIVACY_H_

#include <cstddef>
#include <string>
#include <vector>

namespace dpfix {

// {1.5, 2, 3, 4, 8, 16, 32, 64, 128, 256}.
const std::vector<double>& DefaultAlphaGrid();

// epsilon(alpha) on a finite grid of orders alpha > 1. Entries may be +inf
// for orders at which no bound applies.
class RdpCurve {
 public:
  RdpCurve() = default;
  // Zero curve on `alphas`.
  explicit RdpCurve(std::vector<double> alphas);

  std::size_t size() const { return alphas_.size(); }
  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<double>& epsilons() const { return epsilons_; }
  const std::vector<std::string>& provenance() const { return provenance_; }

  double epsilon(std::size_t i) const { return epsilons_.at(i); }
  void Set(std::size_t i, double epsilon, std::string provenance);

  // Pointwise sum; grids must match exactly.
  RdpCurve& operator+=(const RdpCurve& other);

 private:
  std::vector<double> alphas_;
  std::vector<double> epsilons_;
  std::vector<std::string> provenance_;
};

RdpCurve Compose(const std::vector<RdpCurve>& curves);

struct DpGuarantee {
  double epsilon = 0.0;
  double alpha = 0.0;  // order attaining the minimum
};

// min over the grid of epsilon(alpha) + ln(1/delta)/(alpha - 1).
DpGuarantee RdpToDp(const RdpCurve& curve, double delta);

double GaussianRdp(double sensitivity, double sigma, double alpha);

// One-step sensitivity of the private consensus ADMM operator, 4 lambda L
// gamma / n. With n = 1 this is the user-level (local) sensitivity.
double SensitivityConsensus(double lipschitz, double gamma, double lambda,
                            double n);
// Same bound for the general constrained form, scaled by ||A||_2 / omega_A.
double SensitivityGeneral(double lipschitz, double gamma, double lambda,
                          double n, double a_norm, double omega_a);

double CentralizedEpsilon(double alpha, double iterations, double lipschitz,
                          double gamma, double sigma, double n);

// Throws ConditionNotMet unless q < 1/5, sigma >= 4 and
// alpha <= (M^2 sigma^2/2 - ln(5 sigma^2)) / (M + ln(q alpha) + 1/(2 sigma^2))
// with M = ln(1 + 1/(q(alpha - 1))).
void CheckSubsamplingRegime(double alpha, double q, double sigma);
bool SubsamplingRegimeHolds(double alpha, double q, double sigma);

// 2 alpha q^2 Delta^2 / sigma^2, inside the regime only.
double SubsampledRdp(double alpha, double q, double sensitivity, double sigma);

struct FederatedEpsilon {
  double central = 0.0;          // whole run, seen by the server
  double local_per_round = 0.0;  // one participation, seen by a user
};

// Central: 16 alpha K L^2 gamma^2 / (sigma^2 n^2), valid for m < n/5 and the
// subsampling regime at q = m/n. Secure aggregation divides the local
// per-round bound 8 alpha L^2 gamma^2 / sigma^2 by m^2.
FederatedEpsilon FederatedEpsilons(double alpha, double iterations,
                                   double lipschitz, double gamma, double sigma,
                                   std::size_t m, std::size_t n,
                                   bool secure_aggregation);
double FederatedCentralEpsilon(double alpha, double iterations,
                               double lipschitz, double gamma, double sigma,
                               std::size_t m, std::size_t n,
                               bool secure_aggregation = false);

// 8 alpha K_i L^2 gamma^2 / sigma^2 for a user taking part K_i times.
double LocalEpsilon(double alpha, double participations, double lipschitz,
                    double gamma, double sigma);

// alpha s^2 / (2 m sigma^2): a displacement s spread over m noisy
// non-expansive steps.
double AmplificationByIteration(double displacement, double steps,
                                double sigma, double alpha);

// 8 alpha K_i L^2 gamma^2 ln(n) / (sigma^2 n); requires
// sigma > 2 L gamma sqrt(alpha(alpha - 1)) and n >= 2.
double NetworkRdpEpsilon(double alpha, double participations, double lipschitz,
                         double gamma, double sigma, std::size_t n);

// (1/n) sum_{k=1}^{horizon} (1 - 1/n)^k / k, the averaging factor behind the
// network bound; never exceeds ln(n)/n.
double NetworkAmplificationSum(std::size_t n, std::size_t horizon);

// ceil(K / n): expected per-user participations for the random walk.
std::size_t EstimateParticipations(std::size_t iterations, std::size_t n);

enum class PrivacySetting { kCentralized, kFederatedCentral, kLocal, kNetwork };

PrivacySetting ParsePrivacySetting(const std::string& name);
std::string PrivacySettingName(PrivacySetting setting);

// Everything but sigma that a setting's closed form needs. Unused fields are
// ignored (e.g. m outside the federated setting).
struct AccountingParams {
  double iterations = 1;      // K
  double participations = 1;  // K_i (local and network)
  double lipschitz = 1.0;     // L
  double gamma = 1.0;
  std::size_t n = 1;
  std::size_t m = 1;
  bool secure_aggregation = false;
};

// Per-order curve of the setting at noise `sigma`. Orders outside a regime
// get +inf with the failed clause recorded as provenance.
RdpCurve AccountCurve(PrivacySetting setting, const AccountingParams& params,
                      double sigma,
                      const std::vector<double>& alphas = DefaultAlphaGrid());

struct DpTarget {
  double epsilon;
  double delta;
};
struct RdpTarget {
  double alpha;
  double epsilon;
};

// Smallest sigma (within 0.1%, rounded up) meeting an (epsilon, delta)
// target through RdpToDp over `alphas`.
double CalibrateSigma(const DpTarget& target, PrivacySetting setting,
                      const AccountingParams& params,
                      const std::vector<double>& alphas = DefaultAlphaGrid());
// Closed-form inverse at a single order, raised to the regime boundary when
// the setting has one.
double CalibrateSigma(const RdpTarget& target, PrivacySetting setting,
                      const AccountingParams& params);

}  // namespace dpfix

#endif  // DPFIX_PRIVACY_H_
