// Copyright 2026 The recnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstddef>
#include <span>
#include <vector>

namespace recnet {

// Fenwick tree over non-negative doubles with O(log n) append, point update,
// prefix query and inverse-CDF search. Positions are 0-based.
class PrefixSumTree {
 public:
  PrefixSumTree() = default;

  explicit PrefixSumTree(std::span<const double> values) { assign(values); }

  // O(n) construction.
  void assign(std::span<const double> values) {
    tree_.assign(values.begin(), values.end());
    const std::size_t n = tree_.size();
    for (std::size_t i = 1; i <= n; ++i) {
      const std::size_t parent = i + (i & (~i + 1));
      if (parent <= n) tree_[parent - 1] += tree_[i - 1];
    }
  }

  void clear() { tree_.clear(); }

  std::size_t size() const noexcept { return tree_.size(); }

  // Appends a value at position size().
  void push_back(double value) {
    const std::size_t k = tree_.size() + 1;
    double node = value;
    const std::size_t low = k & (~k + 1);
    for (std::size_t j = k - 1; j > k - low; j -= j & (~j + 1)) {
      node += tree_[j - 1];
    }
    tree_.push_back(node);
  }

  void add(std::size_t pos, double delta) {
    for (std::size_t k = pos + 1; k <= tree_.size(); k += k & (~k + 1)) {
      tree_[k - 1] += delta;
    }
  }

  // Sum of positions [0, count).
  double prefix(std::size_t count) const {
    double sum = 0.0;
    for (std::size_t k = count; k > 0; k -= k & (~k + 1)) sum += tree_[k - 1];
    return sum;
  }

  double total() const { return prefix(tree_.size()); }

  // Smallest position p with prefix(p + 1) > target, or size() if none.
  std::size_t upper_bound(double target) const {
    const std::size_t n = tree_.size();
    if (n == 0) return 0;
    std::size_t pos = 0;
    double acc = 0.0;
    for (std::size_t step = std::bit_floor(n); step > 0; step >>= 1) {
      const std::size_t next = pos + step;
      if (next <= n && acc + tree_[next - 1] <= target) {
        pos = next;
        acc += tree_[next - 1];
      }
    }
    return pos;
  }

 private:
  std::vector<double> tree_;
};

}  // namespace recnet
