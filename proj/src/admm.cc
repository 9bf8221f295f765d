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

#include "dpfix/admm.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "dpfix/errors.h"
#include "dpfix/rng.h"

namespace dpfix {
namespace {

void RequireLambda(double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    ThrowParameter("ADMM step lambda must lie in (0,1]");
  }
}

void RequireShape(const ConsensusProblem& problem, const BlockVector& u) {
  if (u.num_blocks() != problem.n || u.block_dim() != problem.p) {
    ThrowStructural("u must have n=" + std::to_string(problem.n) +
                    " blocks of dimension p=" + std::to_string(problem.p));
  }
}

Vec Noise(std::uint64_t seed, std::size_t k, std::size_t block, double sigma,
          std::size_t p) {
  Vec eta(p, 0.0);
  if (sigma > 0.0) NoiseBlock(seed, k, block, sigma, eta);
  return eta;
}

void RecordZ(const AdmmTraceOptions& options, std::span<const double> z,
             IterationRecord& record) {
  if (options.objective) record.objective = options.objective(z);
  if (options.reference_z) {
    record.dist_sq = SquaredDistance(z, *options.reference_z);
  }
}

}  // namespace

void ConsensusProblem::Validate() const {
  if (n == 0) ThrowParameter("consensus problem needs n >= 1");
  if (p == 0) ThrowParameter("consensus problem needs p >= 1");
  if (!(gamma > 0.0)) ThrowParameter("gamma must be > 0");
  if (!(lipschitz > 0.0)) ThrowParameter("Lipschitz constant L must be > 0");
  if (prox_f.size() != n) {
    ThrowStructural("expected " + std::to_string(n) + " local proxes, got " +
                    std::to_string(prox_f.size()));
  }
  if (clip && !(*clip > 0.0)) ThrowParameter("clip threshold must be > 0");
}

void AdmmRunConfig::Validate() const {
  RequireLambda(lambda);
  if (!(sigma >= 0.0)) ThrowParameter("sigma must be >= 0");
  if (iterations == 0) ThrowParameter("iteration count K must be >= 1");
}

AdmmState InitialState(const ConsensusProblem& problem,
                       const std::optional<BlockVector>& u0) {
  problem.Validate();
  AdmmState state;
  state.u = u0 ? *u0 : BlockVector(problem.n, problem.p);
  RequireShape(problem, state.u);
  state.z = ZUpdate(state.u, problem);
  return state;
}

Vec ZUpdate(const BlockVector& u, const ConsensusProblem& problem) {
  return problem.prox_r.Apply(u.BlockMean());
}

Vec XUpdate(std::size_t i, std::span<const double> z, const BlockVector& u,
            const ConsensusProblem& problem) {
  if (i >= problem.n || i >= u.num_blocks()) {
    ThrowStructural("user index " + std::to_string(i) + " out of range");
  }
  const auto ui = u.block(i);
  if (z.size() != ui.size()) ThrowStructural("z and u_i differ in length");
  Vec v(z.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = 2.0 * z[j] - ui[j];
  return problem.prox_f[i].Apply(v);
}

Vec UUpdate(std::span<const double> u_i, std::span<const double> x_i,
            std::span<const double> z, double lambda,
            std::span<const double> eta, std::optional<double> clip) {
  RequireLambda(lambda);
  if (x_i.size() != u_i.size() || z.size() != u_i.size() ||
      (!eta.empty() && eta.size() != u_i.size())) {
    ThrowStructural("u-update operands differ in length");
  }
  Vec d = Subtract(x_i, z);
  if (clip) d = Clip(d, *clip);
  Vec out(u_i.begin(), u_i.end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double e = eta.empty() ? 0.0 : eta[j];
    out[j] += 2.0 * lambda * (d[j] + 0.5 * e);
  }
  return out;
}

AdmmRelease CentralizedRun(const ConsensusProblem& problem,
                           const BlockVector& u0, const AdmmRunConfig& config,
                           const AdmmTraceOptions& options) {
  problem.Validate();
  config.Validate();
  RequireShape(problem, u0);
  BlockVector u = u0;
  AdmmRelease release;
  release.trace.records.reserve(config.iterations);
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < config.iterations; ++k) {
    const Vec z = ZUpdate(u, problem);
    BlockVector next(problem.n, problem.p);
    for (std::size_t i = 0; i < problem.n; ++i) {
      const Vec x = XUpdate(i, z, u, problem);
      const Vec eta = Noise(config.seed, k, i, config.sigma, problem.p);
      const Vec ui = UUpdate(u.block(i), x, z, config.lambda, eta,
                             problem.clip);
      std::copy(ui.begin(), ui.end(), next.block(i).begin());
    }
    u = std::move(next);

    IterationRecord record;
    record.k = k;
    record.active.assign(problem.n, 1);
    record.noise_draws = config.sigma > 0.0 ? problem.n * problem.p : 0;
    total += record.noise_draws;
    record.noise_draws_total = total;
    RecordZ(options, z, record);
    release.trace.records.push_back(std::move(record));
    release.z = z;
  }
  return release;
}

OperatorHandle ConsensusAdmmOperator(ConsensusProblem problem) {
  problem.Validate();
  auto eval = [problem = std::move(problem)](
                  const BlockVector& u, std::size_t,
                  std::span<const std::uint8_t> active, BlockVector& out) {
    RequireShape(problem, u);
    const Vec z = ZUpdate(u, problem);
    for (std::size_t i = 0; i < problem.n; ++i) {
      if (!active.empty() && !active[i]) continue;
      const Vec x = XUpdate(i, z, u, problem);
      Vec d = Subtract(x, z);
      if (problem.clip) d = Clip(d, *problem.clip);
      const auto ui = u.block(i);
      auto oi = out.block(i);
      for (std::size_t j = 0; j < d.size(); ++j) oi[j] = ui[j] + 2.0 * d[j];
    }
  };
  return OperatorHandle(std::move(eval), Expansiveness::NonExpansive(),
                        /*data_dependent=*/true);
}

void FederatedRound(const ConsensusProblem& problem, AdmmState& state,
                    std::span<const std::size_t> sampled, double lambda,
                    double sigma, std::uint64_t seed) {
  if (sampled.empty()) ThrowParameter("a federated round needs >= 1 user");
  RequireLambda(lambda);
  RequireShape(problem, state.u);
  Vec delta_sum(problem.p, 0.0);
  for (std::size_t i : sampled) {
    const Vec x = XUpdate(i, state.z, state.u, problem);
    const Vec eta = Noise(seed, state.k, i, sigma, problem.p);
    auto ui = state.u.block(i);
    const Vec next = UUpdate(ui, x, state.z, lambda, eta, problem.clip);
    for (std::size_t j = 0; j < problem.p; ++j) {
      delta_sum[j] += next[j] - ui[j];
      ui[j] = next[j];
    }
  }
  Vec z_hat = state.z;
  Axpy(1.0 / static_cast<double>(problem.n), delta_sum, z_hat);
  state.z = problem.prox_r.Apply(z_hat);
  ++state.k;
}

FederatedRelease FederatedRun(const ConsensusProblem& problem,
                              const BlockVector& u0,
                              const AdmmRunConfig& config,
                              std::size_t users_per_round,
                              const AdmmTraceOptions& options) {
  config.Validate();
  if (users_per_round == 0 || users_per_round > problem.n) {
    ThrowParameter("users per round must lie in [1, n]");
  }
  AdmmState state = InitialState(problem, u0);
  FederatedRelease release;
  release.trace.records.reserve(config.iterations);
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < config.iterations; ++k) {
    Substream stream(config.seed, StreamDomain::kUserSampling, k);
    const std::vector<std::size_t> sampled =
        SampleUsers(problem.n, users_per_round, stream);
    FederatedRound(problem, state, sampled, config.lambda, config.sigma,
                   config.seed);

    IterationRecord record;
    record.k = k;
    record.active.assign(problem.n, 0);
    for (std::size_t i : sampled) record.active[i] = 1;
    record.noise_draws = config.sigma > 0.0 ? sampled.size() * problem.p : 0;
    total += record.noise_draws;
    record.noise_draws_total = total;
    RecordZ(options, state.z, record);
    release.trace.records.push_back(std::move(record));
  }
  release.z = std::move(state.z);
  return release;
}

std::size_t DecentralizedStep(const ConsensusProblem& problem,
                              AdmmState& state, std::size_t current,
                              double lambda, double sigma, std::uint64_t seed,
                              const Topology& topology, ObservationLog* log) {
  if (current >= problem.n) {
    ThrowStructural("walk position " + std::to_string(current) +
                    " out of range");
  }
  if (topology.num_users() != problem.n) {
    ThrowStructural("topology and problem disagree on the number of users");
  }
  RequireLambda(lambda);
  RequireShape(problem, state.u);
  const Vec x = XUpdate(current, state.z, state.u, problem);
  const Vec eta = Noise(seed, state.k, current, sigma, problem.p);
  auto ui = state.u.block(current);
  const Vec next = UUpdate(ui, x, state.z, lambda, eta, problem.clip);
  Vec z_hat = state.z;
  for (std::size_t j = 0; j < problem.p; ++j) {
    z_hat[j] += (next[j] - ui[j]) / static_cast<double>(problem.n);
    ui[j] = next[j];
  }
  state.z = problem.prox_r.Apply(z_hat);
  ++state.k;
  Substream walk(seed, StreamDomain::kWalk, state.k);
  const std::size_t receiver = topology.Next(current, walk);
  if (log != nullptr) log->Record(receiver, state.k, state.z);
  return receiver;
}

DecentralizedRelease DecentralizedRun(const ConsensusProblem& problem,
                                      const BlockVector& u0,
                                      const AdmmRunConfig& config,
                                      const AdmmTraceOptions& options) {
  config.Validate();
  AdmmState state = InitialState(problem, u0);
  const CompleteGraph graph(problem.n);
  DecentralizedRelease release;
  release.log = ObservationLog(problem.n);
  Substream start(config.seed, StreamDomain::kWalk, 0);
  release.first_user = graph.Next(0, start);
  std::size_t current = release.first_user;
  release.trace.records.reserve(config.iterations);
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < config.iterations; ++k) {
    IterationRecord record;
    record.k = k;
    record.active.assign(problem.n, 0);
    record.active[current] = 1;
    current = DecentralizedStep(problem, state, current, config.lambda,
                                config.sigma, config.seed, graph,
                                &release.log);
    record.noise_draws = config.sigma > 0.0 ? problem.p : 0;
    total += record.noise_draws;
    record.noise_draws_total = total;
    RecordZ(options, state.z, record);
    release.trace.records.push_back(std::move(record));
  }
  release.z = std::move(state.z);
  return release;
}

std::vector<std::size_t> ParticipationCounts(const RunTrace& trace) {
  std::vector<std::size_t> counts;
  for (const IterationRecord& r : trace.records) {
    if (counts.empty()) counts.assign(r.active.size(), 0);
    if (r.active.size() != counts.size()) {
      ThrowStructural("trace masks differ in length");
    }
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += r.active[i];
  }
  return counts;
}

GeneralAdmmProblem MakeGeneralAdmmProblem(
    std::function<Vec(std::span<const double>, std::span<const double>)>
        f_argmin,
    std::function<Vec(std::span<const double>)> g_argmin, DenseMatrix a,
    DenseMatrix b, Vec c, double gamma, std::size_t noise_block_dim) {
  if (!f_argmin || !g_argmin) ThrowParameter("both argmin maps are required");
  if (!(gamma > 0.0)) ThrowParameter("gamma must be > 0");
  if (a.rows() == 0 || a.cols() == 0 || b.cols() == 0) {
    ThrowStructural("A and B must be non-empty");
  }
  if (b.rows() != a.rows() || c.size() != a.rows()) {
    ThrowStructural("A, B and c must have the same number of rows");
  }
  if (noise_block_dim == 0) noise_block_dim = a.rows();
  if (a.rows() % noise_block_dim != 0) {
    ThrowStructural("noise block size must divide the number of rows");
  }
  const SingularValueBounds sv = ExtremeSingularValues(a);
  if (!(sv.smallest > 1e-12 * std::max(1.0, sv.largest))) {
    ThrowModel("A is not full rank (smallest singular value ~ 0)");
  }
  GeneralAdmmProblem problem;
  problem.f_argmin = std::move(f_argmin);
  problem.g_argmin = std::move(g_argmin);
  problem.a = std::move(a);
  problem.b = std::move(b);
  problem.c = std::move(c);
  problem.gamma = gamma;
  problem.noise_block_dim = noise_block_dim;
  problem.omega_a = sv.smallest;
  problem.a_norm = sv.largest;
  return problem;
}

void GeneralAdmmStep(const GeneralAdmmProblem& problem, GeneralAdmmState& state,
                     double lambda, double sigma, std::uint64_t seed) {
  RequireLambda(lambda);
  if (!(sigma >= 0.0)) ThrowParameter("sigma must be >= 0");
  if (state.u.size() != problem.a.rows()) {
    ThrowStructural("u must have one entry per row of A");
  }
  state.z = problem.g_argmin(state.u);
  if (state.z.size() != problem.b.cols()) {
    ThrowStructural("g_argmin returned z of the wrong length");
  }
  const Vec x = problem.f_argmin(state.z, state.u);
  if (x.size() != problem.a.cols()) {
    ThrowStructural("f_argmin returned x of the wrong length");
  }
  const Vec ax = problem.a.Multiply(x);
  const Vec bz = problem.b.Multiply(state.z);
  const std::size_t blocks = state.u.size() / problem.noise_block_dim;
  Vec eta(problem.noise_block_dim, 0.0);
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    if (sigma > 0.0) NoiseBlock(seed, state.k, blk, sigma, eta);
    for (std::size_t j = 0; j < problem.noise_block_dim; ++j) {
      const std::size_t r = blk * problem.noise_block_dim + j;
      state.u[r] +=
          2.0 * lambda * ((ax[r] + bz[r] - problem.c[r]) + 0.5 * eta[j]);
    }
  }
  ++state.k;
}

Vec RecoverXFromZ(const GeneralAdmmProblem& problem,
                  std::span<const double> z) {
  if (problem.a.rows() != problem.a.cols()) {
    ThrowModel("x can only be recovered from z when A is square");
  }
  if (z.size() != problem.b.cols()) ThrowStructural("z has the wrong length");
  const Vec rhs = Subtract(problem.c, problem.b.Multiply(z));
  return Solve(problem.a, rhs);
}

GeneralAdmmProblem ConsensusAsGeneral(const ConsensusProblem& problem) {
  problem.Validate();
  if (problem.clip) {
    ThrowParameter("the general form has no clipping; use an unclipped problem");
  }
  const std::size_t n = problem.n;
  const std::size_t p = problem.p;
  auto g_argmin = [problem](std::span<const double> u) {
    return ZUpdate(BlockVector(problem.n, problem.p, Vec(u.begin(), u.end())),
                   problem);
  };
  auto f_argmin = [problem](std::span<const double> z,
                            std::span<const double> u) {
    const BlockVector ub(problem.n, problem.p, Vec(u.begin(), u.end()));
    Vec x(u.size());
    for (std::size_t i = 0; i < problem.n; ++i) {
      const Vec xi = XUpdate(i, z, ub, problem);
      std::copy(xi.begin(), xi.end(), x.begin() + i * problem.p);
    }
    return x;
  };
  return MakeGeneralAdmmProblem(std::move(f_argmin), std::move(g_argmin),
                                DenseMatrix::Identity(n * p),
                                DenseMatrix::StackedIdentity(n, p, -1.0),
                                Vec(n * p, 0.0), problem.gamma, p);
}

}  // namespace dpfix
