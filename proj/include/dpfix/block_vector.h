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

#ifndef DPFIX_BLOCK_VECTOR_H_
#define DPFIX_BLOCK_VECTOR_H_

#include <cstddef>
#include <span>
#include <vector>

#include "dpfix/linalg.h"

namespace dpfix {

// A vector of R^(B*p) stored flat and addressed block by block. Iterates of
// the fixed-point engine and the ADMM dual variable u live here.
class BlockVector {
 public:
  BlockVector() = default;
  BlockVector(std::size_t num_blocks, std::size_t block_dim, double fill = 0.0);
  // Takes ownership of `flat`; its length must equal num_blocks * block_dim.
  BlockVector(std::size_t num_blocks, std::size_t block_dim, Vec flat);

  static BlockVector FromBlocks(const std::vector<Vec>& blocks);

  std::size_t num_blocks() const { return num_blocks_; }
  std::size_t block_dim() const { return block_dim_; }
  std::size_t size() const { return data_.size(); }

  std::span<double> block(std::size_t b);
  std::span<const double> block(std::size_t b) const;

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }
  const Vec& values() const { return data_; }

  double Norm() const;
  Vec BlockMean() const;

  bool SameShape(const BlockVector& other) const {
    return num_blocks_ == other.num_blocks_ && block_dim_ == other.block_dim_;
  }

  friend bool operator==(const BlockVector&, const BlockVector&) = default;

 private:
  std::size_t num_blocks_ = 0;
  std::size_t block_dim_ = 0;
  Vec data_;
};

double SquaredDistance(const BlockVector& a, const BlockVector& b);

}  // namespace dpfix

#endif  // DPFIX_BLOCK_VECTOR_H_
