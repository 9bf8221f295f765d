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

// Synthetic Lasso benchmark data, a high-precision proximal-gradient
// reference solver and the proximal DP-SGD baseline.
//
//   min_x (1/2n)||Ax - b||^2 + kappa ||x||_1

#ifndef DPFIX_LASSO_H_
#define DPFIX_LASSO_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpfix/admm.h"
#include "dpfix/linalg.h"

namespace dpfix {

struct LassoDataset {
  DenseMatrix a;  // rows on the unit sphere
  Vec b;
  Vec x_true;
  std::vector<std::size_t> support;
  double noise_std = 0.0;

  std::size_t n() const { return a.rows(); }
  std::size_t p() const { return a.cols(); }
};

// Rows are normalized Gaussian draws, x_true is uniform in [-1,1] on a
// random support and b = A x_true + N(0, noise_std^2).
LassoDataset GenLasso(std::size_t n, std::size_t p, std::size_t support_size,
                      double noise_std, std::uint64_t seed);

double LassoObjective(const LassoDataset& data, std::span<const double> x,
                      double kappa);

// Gradient of the smooth part, (1/n) A^T (Ax - b).
Vec LassoSmoothGradient(const LassoDataset& data, std::span<const double> x);

struct TrainTestSplit {
  LassoDataset train;
  LassoDataset test;
};

// Seeded random split; `train_fraction` of the rows (rounded) go to train.
TrainTestSplit SplitDataset(const LassoDataset& data, double train_fraction,
                            std::uint64_t seed);

struct ReferenceSolution {
  Vec x;
  double objective = 0.0;
  std::size_t iterations = 0;
  double gradient_map_norm = 0.0;
};

// Proximal gradient with step 1/lambda_max(A^T A / n), stopped after
// `max_iterations` or once the gradient-map norm drops below `tolerance`.
ReferenceSolution SolveLassoReference(const LassoDataset& data, double kappa,
                                      std::size_t max_iterations = 100000,
                                      double tolerance = 1e-10);

// Regularization weight from `grid` minimizing the mean held-out squared
// loss over `folds` seeded folds, fitting each fold with the reference
// solver.
double SelectKappaByCrossValidation(const LassoDataset& data,
                                    const std::vector<double>& grid,
                                    std::size_t folds, std::uint64_t seed);

// Largest componentwise distance of -grad from kappa * subdifferential of
// |x_j|; zero exactly at a minimizer.
double LassoOptimalityViolation(const LassoDataset& data,
                                std::span<const double> x, double kappa);

// Consensus form with one user per row: local prox of (gamma/2n)(a_i^T x -
// b_i)^2 and a soft threshold of gamma kappa / n on z.
ConsensusProblem MakeLassoConsensus(const LassoDataset& data, double kappa,
                                    double gamma,
                                    std::optional<double> clip = std::nullopt,
                                    double lipschitz = 1.0);

struct DpsgdConfig {
  double step = 0.1;
  std::optional<double> clip;  // per-example gradient clipping
  double sigma = 0.0;          // per-example gradient noise std
  std::size_t iterations = 1;
  std::size_t batch = 1;  // examples sampled per step without replacement
  double kappa = 0.0;
  std::uint64_t seed = 0;
};

// x <- prox_{step kappa}(x - step (1/m) sum_{i in S} (clip(g_i) + eta_i))
// from x = 0. Batches come from substream (seed, k) and eta_i from the
// noise substream (seed, k, i).
Vec DpsgdBaseline(const LassoDataset& data, const DpsgdConfig& config);

}  // namespace dpfix

#endif  // DPFIX_LASSO_H_
