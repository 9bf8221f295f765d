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

// Private consensus ADMM: the z/x/u updates and their centralized,
// federated and random-walk deployments, plus the general constrained form
//
//   min_{x,z} f(x; D) + g(z)  s.t.  Ax + Bz = c.
//
// Runs release the consensus variable z only; local x iterates never leave
// a round.

#ifndef DPFIX_ADMM_H_
#define DPFIX_ADMM_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dpfix/block_vector.h"
#include "dpfix/fixed_point.h"
#include "dpfix/linalg.h"
#include "dpfix/operators.h"
#include "dpfix/simnet.h"

namespace dpfix {

// min (1/n) sum_i f(x_i; d_i) + r(z) s.t. x_i = z.
//
// prox_f[i] is the prox of gamma * (1/n) f(.; d_i) and prox_r the prox of
// gamma * r, so the z-update is prox_r applied to the mean of u.
struct ConsensusProblem {
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<ProxSpec> prox_f;
  ProxSpec prox_r = ProxSpec::Zero();
  double gamma = 1.0;
  double lipschitz = 1.0;
  std::optional<double> clip;  // clip threshold for x_i - z

  void Validate() const;
};

struct AdmmState {
  BlockVector u;  // n blocks of dimension p
  Vec z;
  std::size_t k = 0;
};

// State with u = u0 (zero if absent) and z = prox_r(mean u).
AdmmState InitialState(const ConsensusProblem& problem,
                       const std::optional<BlockVector>& u0 = std::nullopt);

// prox_r((1/n) sum_i u_i).
Vec ZUpdate(const BlockVector& u, const ConsensusProblem& problem);
// prox_f[i](2z - u_i).
Vec XUpdate(std::size_t i, std::span<const double> z, const BlockVector& u,
            const ConsensusProblem& problem);
// u_i + 2 lambda (clip(x_i - z) + eta_i / 2). Empty `eta` means no noise.
Vec UUpdate(std::span<const double> u_i, std::span<const double> x_i,
            std::span<const double> z, double lambda,
            std::span<const double> eta, std::optional<double> clip);

// Trace hooks evaluated on the released z after each iteration.
struct AdmmTraceOptions {
  std::function<double(std::span<const double>)> objective;
  std::optional<Vec> reference_z;
};

struct AdmmRunConfig {
  double lambda = 1.0;
  double sigma = 0.0;
  std::size_t iterations = 1;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Release of a run: the last z and its trace. Deliberately holds no x.
struct AdmmRelease {
  Vec z;
  RunTrace trace;
};

// Every user updates every iteration: z, then x_i and u_i with fresh
// eta_i ~ N(0, sigma^2 I_p) from noise substream (seed, k, i).
AdmmRelease CentralizedRun(const ConsensusProblem& problem,
                           const BlockVector& u0, const AdmmRunConfig& config,
                           const AdmmTraceOptions& options = {});

// The centralized iteration written as an operator for the generic
// engine: R(u)_i = u_i + 2 clip(x_i - z) with z and x_i computed from u.
// Running the engine with AllBlocks and the same (lambda, sigma, seed)
// follows the same path as CentralizedRun.
OperatorHandle ConsensusAdmmOperator(ConsensusProblem problem);

// One federated round over the users in `sampled` (sorted, distinct). The
// local step uses the current z; the server adds (1/n) sum of u-deltas and
// applies prox_r.
void FederatedRound(const ConsensusProblem& problem, AdmmState& state,
                    std::span<const std::size_t> sampled, double lambda,
                    double sigma, std::uint64_t seed);

struct FederatedRelease {
  Vec z;
  RunTrace trace;  // active mask = sampled users of each round
};

// Rounds of `users_per_round` users drawn from substream (seed, round).
FederatedRelease FederatedRun(const ConsensusProblem& problem,
                              const BlockVector& u0,
                              const AdmmRunConfig& config,
                              std::size_t users_per_round,
                              const AdmmTraceOptions& options = {});

// User `current` updates its block, refreshes z and hands it to the next
// user chosen by `topology`. The hand-off is recorded in `log` (if any) as
// seen by the receiver at step k+1. Returns the receiver.
std::size_t DecentralizedStep(const ConsensusProblem& problem,
                              AdmmState& state, std::size_t current,
                              double lambda, double sigma, std::uint64_t seed,
                              const Topology& topology,
                              ObservationLog* log = nullptr);

struct DecentralizedRelease {
  Vec z;
  RunTrace trace;  // active mask = the single updating user
  ObservationLog log;
  std::size_t first_user = 0;
};

DecentralizedRelease DecentralizedRun(const ConsensusProblem& problem,
                                      const BlockVector& u0,
                                      const AdmmRunConfig& config,
                                      const AdmmTraceOptions& options = {});

// Per-block activation counts over a trace (users for ADMM runs).
std::vector<std::size_t> ParticipationCounts(const RunTrace& trace);

struct GeneralAdmmProblem {
  // argmin_x f(x; D) + (1/2 gamma)||Ax + 2Bz + u - c||^2.
  std::function<Vec(std::span<const double> z, std::span<const double> u)>
      f_argmin;
  // argmin_z g(z) + (1/2 gamma)||Bz + u||^2.
  std::function<Vec(std::span<const double> u)> g_argmin;
  DenseMatrix a;
  DenseMatrix b;
  Vec c;
  double gamma = 1.0;
  // u is split into blocks of this size for noise substreams.
  std::size_t noise_block_dim = 0;
  double omega_a = 0.0;  // smallest singular value of A
  double a_norm = 0.0;   // ||A||_2
};

// Checks shapes and computes omega_A, ||A||_2. Rank-deficient A is a model
// error.
GeneralAdmmProblem MakeGeneralAdmmProblem(
    std::function<Vec(std::span<const double>, std::span<const double>)>
        f_argmin,
    std::function<Vec(std::span<const double>)> g_argmin, DenseMatrix a,
    DenseMatrix b, Vec c, double gamma, std::size_t noise_block_dim = 0);

struct GeneralAdmmState {
  Vec u;  // length rows(A)
  Vec z;
  std::size_t k = 0;
};

void GeneralAdmmStep(const GeneralAdmmProblem& problem, GeneralAdmmState& state,
                     double lambda, double sigma, std::uint64_t seed);

// The unique x with Ax + Bz = c; A must be square and invertible.
Vec RecoverXFromZ(const GeneralAdmmProblem& problem, std::span<const double> z);

// A = I, B = -[I; ...; I], c = 0, g = n r, with f separable over users.
// Requires an unclipped problem.
GeneralAdmmProblem ConsensusAsGeneral(const ConsensusProblem& problem);

}  // namespace dpfix

#endif  // DPFIX_ADMM_H_
