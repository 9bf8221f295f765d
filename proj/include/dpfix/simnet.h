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

// Scheduling and topology simulation: user subsampling for federated
// rounds, the random walk for decentralized runs and the per-user views a
// network adversary would see.

#ifndef DPFIX_SIMNET_H_
#define DPFIX_SIMNET_H_

#include <cstddef>
#include <vector>

#include "dpfix/linalg.h"
#include "dpfix/rng.h"

namespace dpfix {

// m distinct users out of n, uniformly without replacement, sorted.
std::vector<std::size_t> SampleUsers(std::size_t n, std::size_t m,
                                     Substream& rng);

// Communication graph over users. Only the next-hop rule matters to the
// algorithms, so that is the whole interface.
class Topology {
 public:
  virtual ~Topology() = default;
  virtual std::size_t num_users() const = 0;
  virtual std::size_t Next(std::size_t current, Substream& rng) const = 0;
};

// Complete graph with self-loops: every hop is uniform over all n users.
class CompleteGraph : public Topology {
 public:
  explicit CompleteGraph(std::size_t n);
  std::size_t num_users() const override { return n_; }
  std::size_t Next(std::size_t current, Substream& rng) const override;

 private:
  std::size_t n_;
};

struct Observation {
  std::size_t step = 0;
  Vec z;
};

// What each user has seen of the shared iterate, in arrival order.
class ObservationLog {
 public:
  explicit ObservationLog(std::size_t num_users = 0);

  void Record(std::size_t user, std::size_t step, Vec z);

  std::size_t num_users() const { return views_.size(); }
  const std::vector<Observation>& View(std::size_t user) const;
  std::size_t TotalEvents() const;

  friend bool operator==(const ObservationLog&, const ObservationLog&);

 private:
  std::vector<std::vector<Observation>> views_;
};

bool operator==(const Observation& a, const Observation& b);

// Number of events per user; sums to the number of recorded events.
std::vector<std::size_t> ParticipationCounts(const ObservationLog& log);

}  // namespace dpfix

#endif  // DPFIX_SIMNET_H_
