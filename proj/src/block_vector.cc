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

#include "dpfix/block_vector.h"

#include <string>
#include <utility>

#include "dpfix/errors.h"

namespace dpfix {

BlockVector::BlockVector(std::size_t num_blocks, std::size_t block_dim,
                         double fill)
    : BlockVector(num_blocks, block_dim, Vec(num_blocks * block_dim, fill)) {}

BlockVector::BlockVector(std::size_t num_blocks, std::size_t block_dim,
                         Vec flat)
    : num_blocks_(num_blocks), block_dim_(block_dim), data_(std::move(flat)) {
  if (num_blocks_ == 0 || block_dim_ == 0) {
    ThrowStructural("BlockVector needs at least one block of dimension >= 1");
  }
  if (data_.size() != num_blocks_ * block_dim_) {
    ThrowStructural("BlockVector: flat length " + std::to_string(data_.size()) +
                    " != B*p = " + std::to_string(num_blocks_ * block_dim_));
  }
}

BlockVector BlockVector::FromBlocks(const std::vector<Vec>& blocks) {
  if (blocks.empty()) ThrowStructural("BlockVector: no blocks");
  const std::size_t p = blocks.front().size();
  Vec flat;
  flat.reserve(blocks.size() * p);
  for (const Vec& b : blocks) {
    if (b.size() != p) ThrowStructural("BlockVector: blocks differ in size");
    flat.insert(flat.end(), b.begin(), b.end());
  }
  return BlockVector(blocks.size(), p, std::move(flat));
}

std::span<double> BlockVector::block(std::size_t b) {
  if (b >= num_blocks_) {
    ThrowStructural("block index " + std::to_string(b) + " out of range");
  }
  return {data_.data() + b * block_dim_, block_dim_};
}

std::span<const double> BlockVector::block(std::size_t b) const {
  if (b >= num_blocks_) {
    ThrowStructural("block index " + std::to_string(b) + " out of range");
  }
  return {data_.data() + b * block_dim_, block_dim_};
}

double BlockVector::Norm() const { return dpfix::Norm(data_); }

Vec BlockVector::BlockMean() const {
  Vec mean(block_dim_, 0.0);
  for (std::size_t b = 0; b < num_blocks_; ++b) {
    const double* v = data_.data() + b * block_dim_;
    for (std::size_t j = 0; j < block_dim_; ++j) mean[j] += v[j];
  }
  const double inv = 1.0 / static_cast<double>(num_blocks_);
  for (double& m : mean) m *= inv;
  return mean;
}

double SquaredDistance(const BlockVector& a, const BlockVector& b) {
  if (!a.SameShape(b)) ThrowStructural("BlockVector shape mismatch");
  return SquaredDistance(a.flat(), b.flat());
}

}  // namespace dpfix
