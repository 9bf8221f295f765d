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

#include "dpfix/simnet.h"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "dpfix/errors.h"

namespace dpfix {

std::vector<std::size_t> SampleUsers(std::size_t n, std::size_t m,
                                     Substream& rng) {
  if (m == 0 || m > n) {
    ThrowParameter("cannot sample " + std::to_string(m) + " users out of " +
                   std::to_string(n));
  }
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::size_t> chosen;
  chosen.reserve(m);
  // std::sample keeps the input order, so the result is already sorted.
  std::sample(all.begin(), all.end(), std::back_inserter(chosen), m, rng);
  return chosen;
}

CompleteGraph::CompleteGraph(std::size_t n) : n_(n) {
  if (n == 0) ThrowParameter("a graph needs at least one user");
}

std::size_t CompleteGraph::Next(std::size_t, Substream& rng) const {
  std::uniform_int_distribution<std::size_t> pick(0, n_ - 1);
  return pick(rng);
}

ObservationLog::ObservationLog(std::size_t num_users) : views_(num_users) {}

void ObservationLog::Record(std::size_t user, std::size_t step, Vec z) {
  if (user >= views_.size()) {
    ThrowStructural("observation for unknown user " + std::to_string(user));
  }
  views_[user].push_back({step, std::move(z)});
}

const std::vector<Observation>& ObservationLog::View(std::size_t user) const {
  if (user >= views_.size()) {
    ThrowStructural("no view for unknown user " + std::to_string(user));
  }
  return views_[user];
}

std::size_t ObservationLog::TotalEvents() const {
  std::size_t total = 0;
  for (const auto& v : views_) total += v.size();
  return total;
}

bool operator==(const Observation& a, const Observation& b) {
  return a.step == b.step && a.z == b.z;
}

bool operator==(const ObservationLog& a, const ObservationLog& b) {
  return a.views_ == b.views_;
}

std::vector<std::size_t> ParticipationCounts(const ObservationLog& log) {
  std::vector<std::size_t> counts(log.num_users());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    counts[j] = log.View(j).size();
  }
  return counts;
}

}  // namespace dpfix
