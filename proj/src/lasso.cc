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

#include "dpfix/lasso.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "dpfix/errors.h"
#include "dpfix/rng.h"
#include "dpfix/simnet.h"

namespace dpfix {

LassoDataset GenLasso(std::size_t n, std::size_t p, std::size_t support_size,
                      double noise_std, std::uint64_t seed) {
  if (n == 0 || p == 0) ThrowParameter("n and p must be >= 1");
  if (support_size > p) {
    ThrowParameter("support size " + std::to_string(support_size) +
                   " exceeds dimension " + std::to_string(p));
  }
  if (!(noise_std >= 0.0)) ThrowParameter("noise std must be >= 0");
  LassoDataset data;
  data.noise_std = noise_std;
  data.a = DenseMatrix(n, p);
  Substream rows(seed, StreamDomain::kData, 0);
  std::normal_distribution<double> normal;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = data.a.row(i);
    double norm = 0.0;
    do {
      for (double& v : row) v = normal(rows);
      norm = Norm(row);
    } while (norm == 0.0);
    for (double& v : row) v /= norm;
  }

  Substream truth(seed, StreamDomain::kData, 1);
  std::vector<std::size_t> coords(p);
  std::iota(coords.begin(), coords.end(), 0);
  std::sample(coords.begin(), coords.end(), std::back_inserter(data.support),
              support_size, truth);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  data.x_true.assign(p, 0.0);
  for (std::size_t j : data.support) data.x_true[j] = coef(truth);

  data.b = data.a.Multiply(data.x_true);
  if (noise_std > 0.0) {
    Substream noise(seed, StreamDomain::kData, 2);
    std::normal_distribution<double> eps(0.0, noise_std);
    for (double& v : data.b) v += eps(noise);
  }
  return data;
}

double LassoObjective(const LassoDataset& data, std::span<const double> x,
                      double kappa) {
  if (x.size() != data.p()) {
    ThrowStructural("x has length " + std::to_string(x.size()) +
                    " but the dataset has p=" + std::to_string(data.p()));
  }
  const Vec ax = data.a.Multiply(x);
  double loss = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const double r = ax[i] - data.b[i];
    loss += r * r;
  }
  double l1 = 0.0;
  for (double v : x) l1 += std::abs(v);
  return loss / (2.0 * static_cast<double>(data.n())) + kappa * l1;
}

Vec LassoSmoothGradient(const LassoDataset& data, std::span<const double> x) {
  if (x.size() != data.p()) ThrowStructural("x has the wrong dimension");
  Vec r = data.a.Multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= data.b[i];
  Vec g = data.a.MultiplyTransposed(r);
  for (double& v : g) v /= static_cast<double>(data.n());
  return g;
}

TrainTestSplit SplitDataset(const LassoDataset& data, double train_fraction,
                            std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    ThrowParameter("train fraction must lie in (0,1)");
  }
  const std::size_t n = data.n();
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train == n) {
    ThrowParameter("split leaves an empty train or test set");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Substream stream(seed, StreamDomain::kSplit);
  std::shuffle(perm.begin(), perm.end(), stream);

  auto take = [&](std::size_t begin, std::size_t end) {
    LassoDataset part;
    part.a = DenseMatrix(end - begin, data.p());
    part.b.resize(end - begin);
    for (std::size_t r = begin; r < end; ++r) {
      const auto src = data.a.row(perm[r]);
      std::copy(src.begin(), src.end(), part.a.row(r - begin).begin());
      part.b[r - begin] = data.b[perm[r]];
    }
    part.x_true = data.x_true;
    part.support = data.support;
    part.noise_std = data.noise_std;
    return part;
  };
  return {take(0, n_train), take(n_train, n)};
}

ReferenceSolution SolveLassoReference(const LassoDataset& data, double kappa,
                                      std::size_t max_iterations,
                                      double tolerance) {
  if (!(kappa >= 0.0)) ThrowParameter("kappa must be >= 0");
  const double inv_n = 1.0 / static_cast<double>(data.n());
  // Work with the Gram form so each iteration costs O(p^2).
  DenseMatrix gram = data.a.Gram();
  for (std::size_t r = 0; r < gram.rows(); ++r) {
    for (double& v : gram.row(r)) v *= inv_n;
  }
  Vec atb = data.a.MultiplyTransposed(data.b);
  for (double& v : atb) v *= inv_n;
  const double lipschitz = SymmetricEigenvalues(gram).back();
  if (!(lipschitz > 0.0)) ThrowModel("design matrix is zero");
  const double step = 1.0 / lipschitz;

  ReferenceSolution sol;
  sol.x.assign(data.p(), 0.0);
  Vec grad(data.p());
  Vec trial(data.p());
  for (std::size_t it = 0; it < max_iterations; ++it) {
    grad = gram.Multiply(sol.x);
    for (std::size_t j = 0; j < grad.size(); ++j) grad[j] -= atb[j];
    for (std::size_t j = 0; j < trial.size(); ++j) {
      trial[j] = sol.x[j] - step * grad[j];
    }
    Vec next = ProxL1(trial, step * kappa);
    sol.gradient_map_norm = std::sqrt(SquaredDistance(sol.x, next)) / step;
    sol.x = std::move(next);
    sol.iterations = it + 1;
    if (sol.gradient_map_norm < tolerance) break;
  }
  sol.objective = LassoObjective(data, sol.x, kappa);
  return sol;
}

double SelectKappaByCrossValidation(const LassoDataset& data,
                                    const std::vector<double>& grid,
                                    std::size_t folds, std::uint64_t seed) {
  if (grid.empty()) ThrowParameter("kappa grid is empty");
  if (folds < 2 || folds > data.n()) {
    ThrowParameter("fold count must lie in [2, n]");
  }
  std::vector<std::size_t> perm(data.n());
  std::iota(perm.begin(), perm.end(), 0);
  Substream stream(seed, StreamDomain::kSplit, 1);
  std::shuffle(perm.begin(), perm.end(), stream);

  auto subset = [&](auto keep) {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < perm.size(); ++r) {
      if (keep(r)) rows.push_back(perm[r]);
    }
    LassoDataset part;
    part.a = DenseMatrix(rows.size(), data.p());
    part.b.resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto src = data.a.row(rows[r]);
      std::copy(src.begin(), src.end(), part.a.row(r).begin());
      part.b[r] = data.b[rows[r]];
    }
    return part;
  };

  double best_kappa = grid.front();
  double best_loss = std::numeric_limits<double>::infinity();
  for (double kappa : grid) {
    double loss = 0.0;
    for (std::size_t f = 0; f < folds; ++f) {
      const LassoDataset fit =
          subset([&](std::size_t r) { return r % folds != f; });
      const LassoDataset held =
          subset([&](std::size_t r) { return r % folds == f; });
      const ReferenceSolution sol = SolveLassoReference(fit, kappa);
      loss += LassoObjective(held, sol.x, 0.0);
    }
    if (loss < best_loss) {
      best_loss = loss;
      best_kappa = kappa;
    }
  }
  return best_kappa;
}

double LassoOptimalityViolation(const LassoDataset& data,
                                std::span<const double> x, double kappa) {
  const Vec g = LassoSmoothGradient(data, x);
  double worst = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    double v;
    if (x[j] > 0.0) {
      v = std::abs(g[j] + kappa);
    } else if (x[j] < 0.0) {
      v = std::abs(g[j] - kappa);
    } else {
      v = std::max(0.0, std::abs(g[j]) - kappa);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

ConsensusProblem MakeLassoConsensus(const LassoDataset& data, double kappa,
                                    double gamma, std::optional<double> clip,
                                    double lipschitz) {
  if (!(kappa >= 0.0)) ThrowParameter("kappa must be >= 0");
  if (!(gamma > 0.0)) ThrowParameter("gamma must be > 0");
  ConsensusProblem problem;
  problem.n = data.n();
  problem.p = data.p();
  problem.gamma = gamma;
  problem.lipschitz = lipschitz;
  problem.clip = clip;
  const double n = static_cast<double>(data.n());
  problem.prox_f.reserve(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto row = data.a.row(i);
    problem.prox_f.push_back(
        ProxSpec::QuadraticRankOne(Vec(row.begin(), row.end()), data.b[i], n,
                                   gamma));
  }
  problem.prox_r = ProxSpec::L1(kappa / n, gamma);
  problem.Validate();
  return problem;
}

Vec DpsgdBaseline(const LassoDataset& data, const DpsgdConfig& config) {
  if (!(config.step > 0.0)) ThrowParameter("DP-SGD step must be > 0");
  if (config.clip && !(*config.clip > 0.0)) {
    ThrowParameter("clip threshold must be > 0");
  }
  if (!(config.sigma >= 0.0)) ThrowParameter("sigma must be >= 0");
  if (config.iterations == 0) ThrowParameter("iteration count must be >= 1");
  if (config.batch == 0 || config.batch > data.n()) {
    ThrowParameter("batch size must lie in [1, n]");
  }
  if (!(config.kappa >= 0.0)) ThrowParameter("kappa must be >= 0");
  const std::size_t p = data.p();
  const double inv_m = 1.0 / static_cast<double>(config.batch);
  Vec x(p, 0.0);
  Vec avg(p);
  Vec eta(p);
  for (std::size_t k = 0; k < config.iterations; ++k) {
    Substream stream(config.seed, StreamDomain::kUserSampling, k);
    const std::vector<std::size_t> batch =
        SampleUsers(data.n(), config.batch, stream);
    std::fill(avg.begin(), avg.end(), 0.0);
    for (std::size_t i : batch) {
      const auto row = data.a.row(i);
      const double r = Dot(row, x) - data.b[i];
      Vec g = Scale(r, row);
      if (config.clip) g = Clip(g, *config.clip);
      if (config.sigma > 0.0) {
        NoiseBlock(config.seed, k, i, config.sigma, eta);
        for (std::size_t j = 0; j < p; ++j) g[j] += eta[j];
      }
      Axpy(inv_m, g, avg);
    }
    Axpy(-config.step, avg, x);
    x = ProxL1(x, config.step * config.kappa);
  }
  return x;
}

}  // namespace dpfix
