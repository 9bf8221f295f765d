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

#ifndef DPFIX_OPERATORS_H_
#define DPFIX_OPERATORS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <variant>

#include "dpfix/block_vector.h"
#include "dpfix/linalg.h"

namespace dpfix {

enum class ExpansivenessKind { kNonExpansive, kContractive, kAveraged };

// Declared Lipschitz class of an operator. The declaration is trusted at run
// time and audited by the test-suite on random probe pairs.
struct Expansiveness {
  ExpansivenessKind kind = ExpansivenessKind::kNonExpansive;
  double factor = 1.0;  // tau for kContractive, lambda for kAveraged

  static Expansiveness NonExpansive() { return {}; }
  static Expansiveness Contractive(double tau);
  static Expansiveness Averaged(double lambda);

  // Upper bound on the Lipschitz constant implied by the class.
  double LipschitzBound() const;
};

// Soft thresholding, sign(v_j) * max(|v_j| - t, 0). |v_j| == t maps to 0.
Vec ProxL1(std::span<const double> v, double threshold);

// argmin_x (1/2n)(a^T x - b)^2 + (1/2 gamma)||x - v||^2, i.e.
// (a a^T + (n/gamma) I)^{-1} (b a + (n/gamma) v), via Sherman-Morrison.
Vec ProxQuadraticRankOne(std::span<const double> a, double b, double gamma,
                         double n, std::span<const double> v);

// Radial projection onto the ball of radius c.
Vec Clip(std::span<const double> v, double c);

// A proximal operator prox_{gamma f} for one of a few closed-form families.
class ProxSpec {
 public:
  enum class Kind { kL1, kQuadraticRankOne, kQuadratic, kZero, kCustom };
  using CustomProx = std::function<Vec(std::span<const double>)>;

  // f = 0, prox is the identity.
  static ProxSpec Zero();
  // f = kappa ||.||_1, prox is soft thresholding at kappa * gamma.
  static ProxSpec L1(double kappa, double gamma);
  // f = (1/2n)(a^T x - b)^2.
  static ProxSpec QuadraticRankOne(Vec a, double b, double n, double gamma);
  // f = 1/2 x^T H x + g^T x with H symmetric positive semi-definite.
  static ProxSpec Quadratic(DenseMatrix h, Vec g, double gamma);
  // Caller-supplied prox; firm non-expansiveness is the caller's promise.
  static ProxSpec Custom(CustomProx prox, double gamma);

  Kind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  // Soft-threshold level kappa * gamma (L1 only, 0 otherwise).
  double threshold() const;

  Vec Apply(std::span<const double> v) const;

 private:
  struct L1Data {
    double threshold;
  };
  struct RankOneData {
    Vec a;
    double b;
    double n;
  };
  struct QuadraticData {
    DenseMatrix inverse;  // (H + I/gamma)^{-1}
    Vec g;
  };
  using Data = std::variant<std::monostate, L1Data, RankOneData,
                            std::shared_ptr<const QuadraticData>, CustomProx>;

  ProxSpec(Kind kind, double gamma, Data data)
      : kind_(kind), gamma_(gamma), data_(std::move(data)) {}

  Kind kind_;
  double gamma_;
  Data data_;
};

// A map on BlockVector with declared expansiveness. The evaluator receives
// the iteration index (so data-dependent operators can sample an item per
// step) and the activation mask; it must fill every active block of `out`
// and may leave inactive blocks untouched. An empty mask means all blocks.
class OperatorHandle {
 public:
  using Evaluator = std::function<void(
      const BlockVector& u, std::size_t k,
      std::span<const std::uint8_t> active, BlockVector& out)>;
  using FlatMap = std::function<Vec(std::span<const double>)>;

  OperatorHandle(Evaluator evaluator, Expansiveness expansiveness,
                 bool data_dependent = false);

  // Lifts a map on the flattened vector; block structure is preserved.
  static OperatorHandle FromFlatMap(FlatMap map, Expansiveness expansiveness,
                                    bool data_dependent = false);

  BlockVector operator()(const BlockVector& u, std::size_t k = 0) const;
  void Evaluate(const BlockVector& u, std::size_t k,
                std::span<const std::uint8_t> active, BlockVector& out) const;

  const Expansiveness& expansiveness() const { return expansiveness_; }
  bool data_dependent() const { return data_dependent_; }

 private:
  Evaluator evaluator_;
  Expansiveness expansiveness_;
  bool data_dependent_;
};

// R = 2 prox - I.
OperatorHandle Reflect(ProxSpec prox);

// T = lambda R1 R2 + (1 - lambda) I. Its fixed points u* give the
// minimizers of p1 + p2 through x* = prox2(u*).
OperatorHandle LionsMercier(ProxSpec prox1, ProxSpec prox2, double lambda);

using GradientMap = std::function<Vec(std::span<const double>)>;

// R(u) = u - (2/beta) grad(u); non-expansive for convex beta-smooth f.
OperatorHandle GradientStepOperator(GradientMap grad, double beta);

// R(u) = u - (2/(beta+mu)) grad(u); (beta-mu)/(beta+mu)-contractive for
// mu-strongly convex beta-smooth f.
OperatorHandle StronglyConvexGradientStepOperator(GradientMap grad, double beta,
                                                  double mu);

}  // namespace dpfix

#endif  // DPFIX_OPERATORS_H_
