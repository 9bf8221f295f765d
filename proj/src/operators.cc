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

#include "dpfix/operators.h"

#include <cmath>
#include <string>
#include <utility>

#include "dpfix/errors.h"

namespace dpfix {

Expansiveness Expansiveness::Contractive(double tau) {
  if (!(tau >= 0.0 && tau < 1.0)) {
    ThrowParameter("contraction factor must lie in [0,1), got " +
                   std::to_string(tau));
  }
  return {ExpansivenessKind::kContractive, tau};
}

Expansiveness Expansiveness::Averaged(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    ThrowParameter("averaging parameter must lie in (0,1), got " +
                   std::to_string(lambda));
  }
  return {ExpansivenessKind::kAveraged, lambda};
}

double Expansiveness::LipschitzBound() const {
  return kind == ExpansivenessKind::kContractive ? factor : 1.0;
}

Vec ProxL1(std::span<const double> v, double threshold) {
  if (!(threshold >= 0.0)) {
    ThrowParameter("soft threshold must be >= 0, got " +
                   std::to_string(threshold));
  }
  Vec out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double mag = std::abs(v[j]) - threshold;
    out[j] = mag > 0.0 ? std::copysign(mag, v[j]) : 0.0;
  }
  return out;
}

Vec ProxQuadraticRankOne(std::span<const double> a, double b, double gamma,
                         double n, std::span<const double> v) {
  if (!(gamma > 0.0)) ThrowParameter("prox parameter gamma must be > 0");
  if (!(n >= 1.0)) ThrowParameter("item count n must be >= 1");
  if (a.size() != v.size()) {
    ThrowStructural("rank-one prox: dim(a) != dim(v)");
  }
  // (a a^T + c I)^{-1} = (1/c) (I - a a^T / (c + a^T a))
  const double c = n / gamma;
  Vec rhs(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) rhs[j] = b * a[j] + c * v[j];
  const double coef = Dot(a, rhs) / (c * (c + Dot(a, a)));
  Vec x(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) x[j] = rhs[j] / c - coef * a[j];
  return x;
}

Vec Clip(std::span<const double> v, double c) {
  if (!(c > 0.0)) ThrowParameter("clipping threshold must be > 0");
  const double norm = Norm(v);
  Vec out(v.begin(), v.end());
  if (norm > c) {
    // Shrink the scale until the rounded result lies inside the ball, so a
    // second clip is the identity.
    double s = c / norm;
    for (;;) {
      for (std::size_t j = 0; j < out.size(); ++j) out[j] = v[j] * s;
      if (Norm(out) <= c) break;
      s = std::nextafter(s, 0.0);
    }
  }
  return out;
}

ProxSpec ProxSpec::Zero() { return ProxSpec(Kind::kZero, 1.0, {}); }

ProxSpec ProxSpec::L1(double kappa, double gamma) {
  if (!(gamma > 0.0)) ThrowParameter("prox parameter gamma must be > 0");
  if (!(kappa >= 0.0)) ThrowParameter("L1 weight kappa must be >= 0");
  return ProxSpec(Kind::kL1, gamma, L1Data{kappa * gamma});
}

ProxSpec ProxSpec::QuadraticRankOne(Vec a, double b, double n, double gamma) {
  if (!(gamma > 0.0)) ThrowParameter("prox parameter gamma must be > 0");
  if (!(n >= 1.0)) ThrowParameter("item count n must be >= 1");
  return ProxSpec(Kind::kQuadraticRankOne, gamma,
                  RankOneData{std::move(a), b, n});
}

ProxSpec ProxSpec::Quadratic(DenseMatrix h, Vec g, double gamma) {
  if (!(gamma > 0.0)) ThrowParameter("prox parameter gamma must be > 0");
  const std::size_t p = h.rows();
  if (h.cols() != p || g.size() != p) {
    ThrowStructural("quadratic prox: H must be p x p and g of length p");
  }
  DenseMatrix m = h;
  for (std::size_t i = 0; i < p; ++i) m(i, i) += 1.0 / gamma;
  DenseMatrix inverse(p, p);
  Vec e(p, 0.0);
  for (std::size_t c = 0; c < p; ++c) {
    e[c] = 1.0;
    const Vec col = Solve(m, e);
    for (std::size_t r = 0; r < p; ++r) inverse(r, c) = col[r];
    e[c] = 0.0;
  }
  auto data = std::make_shared<const QuadraticData>(
      QuadraticData{std::move(inverse), std::move(g)});
  return ProxSpec(Kind::kQuadratic, gamma, std::move(data));
}

ProxSpec ProxSpec::Custom(CustomProx prox, double gamma) {
  if (!(gamma > 0.0)) ThrowParameter("prox parameter gamma must be > 0");
  if (!prox) ThrowParameter("custom prox callback is empty");
  return ProxSpec(Kind::kCustom, gamma, std::move(prox));
}

double ProxSpec::threshold() const {
  if (const auto* l1 = std::get_if<L1Data>(&data_)) return l1->threshold;
  return 0.0;
}

Vec ProxSpec::Apply(std::span<const double> v) const {
  switch (kind_) {
    case Kind::kZero:
      return Vec(v.begin(), v.end());
    case Kind::kL1:
      return ProxL1(v, std::get<L1Data>(data_).threshold);
    case Kind::kQuadraticRankOne: {
      const auto& d = std::get<RankOneData>(data_);
      return ProxQuadraticRankOne(d.a, d.b, gamma_, d.n, v);
    }
    case Kind::kQuadratic: {
      const auto& d = *std::get<std::shared_ptr<const QuadraticData>>(data_);
      if (v.size() != d.g.size()) {
        ThrowStructural("quadratic prox: input has wrong dimension");
      }
      Vec rhs(v.size());
      for (std::size_t j = 0; j < v.size(); ++j) rhs[j] = v[j] / gamma_ - d.g[j];
      return d.inverse.Multiply(rhs);
    }
    case Kind::kCustom:
      return std::get<CustomProx>(data_)(v);
  }
  return {};
}

OperatorHandle::OperatorHandle(Evaluator evaluator, Expansiveness expansiveness,
                               bool data_dependent)
    : evaluator_(std::move(evaluator)),
      expansiveness_(expansiveness),
      data_dependent_(data_dependent) {
  if (!evaluator_) ThrowParameter("operator evaluator is empty");
}

OperatorHandle OperatorHandle::FromFlatMap(FlatMap map,
                                           Expansiveness expansiveness,
                                           bool data_dependent) {
  auto eval = [map = std::move(map)](const BlockVector& u, std::size_t,
                                     std::span<const std::uint8_t>,
                                     BlockVector& out) {
    Vec image = map(u.flat());
    if (image.size() != u.size()) {
      ThrowStructural("operator image has length " +
                      std::to_string(image.size()) + ", expected " +
                      std::to_string(u.size()));
    }
    out = BlockVector(u.num_blocks(), u.block_dim(), std::move(image));
  };
  return OperatorHandle(std::move(eval), expansiveness, data_dependent);
}

BlockVector OperatorHandle::operator()(const BlockVector& u,
                                       std::size_t k) const {
  BlockVector out(u.num_blocks(), u.block_dim());
  evaluator_(u, k, {}, out);
  return out;
}

void OperatorHandle::Evaluate(const BlockVector& u, std::size_t k,
                              std::span<const std::uint8_t> active,
                              BlockVector& out) const {
  evaluator_(u, k, active, out);
}

OperatorHandle Reflect(ProxSpec prox) {
  return OperatorHandle::FromFlatMap(
      [prox = std::move(prox)](std::span<const double> v) {
        Vec out = prox.Apply(v);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = 2.0 * out[j] - v[j];
        return out;
      },
      Expansiveness::NonExpansive());
}

OperatorHandle LionsMercier(ProxSpec prox1, ProxSpec prox2, double lambda) {
  const Expansiveness cls = Expansiveness::Averaged(lambda);
  return OperatorHandle::FromFlatMap(
      [p1 = std::move(prox1), p2 = std::move(prox2),
       lambda](std::span<const double> u) {
        Vec r2 = p2.Apply(u);
        for (std::size_t j = 0; j < r2.size(); ++j) r2[j] = 2.0 * r2[j] - u[j];
        Vec r1 = p1.Apply(r2);
        for (std::size_t j = 0; j < r1.size(); ++j) r1[j] = 2.0 * r1[j] - r2[j];
        Vec out(u.size());
        for (std::size_t j = 0; j < u.size(); ++j) {
          out[j] = lambda * r1[j] + (1.0 - lambda) * u[j];
        }
        return out;
      },
      cls);
}

namespace {

OperatorHandle GradientStep(GradientMap grad, double step, Expansiveness cls) {
  if (!grad) ThrowParameter("gradient callback is empty");
  return OperatorHandle::FromFlatMap(
      [grad = std::move(grad), step](std::span<const double> u) {
        const Vec g = grad(u);
        if (g.size() != u.size()) ThrowStructural("gradient has wrong length");
        Vec out(u.begin(), u.end());
        Axpy(-step, g, out);
        return out;
      },
      cls, /*data_dependent=*/true);
}

}  // namespace

OperatorHandle GradientStepOperator(GradientMap grad, double beta) {
  if (!(beta > 0.0)) ThrowParameter("smoothness beta must be > 0");
  return GradientStep(std::move(grad), 2.0 / beta,
                      Expansiveness::NonExpansive());
}

OperatorHandle StronglyConvexGradientStepOperator(GradientMap grad, double beta,
                                                  double mu) {
  if (!(beta > 0.0)) ThrowParameter("smoothness beta must be > 0");
  if (!(mu > 0.0 && mu <= beta)) {
    ThrowParameter("strong convexity mu must lie in (0, beta]");
  }
  return GradientStep(std::move(grad), 2.0 / (beta + mu),
                      Expansiveness::Contractive((beta - mu) / (beta + mu)));
}

}  // namespace dpfix
