// Copyright 2026 The qtn Authors
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
/**
 * @file
 * Binary contraction trees over hypergraph vertices with cost annotations.
 * Pair cost: p (product of output dimensions) and q (product of summed
 * dimensions) give flops = p (2q - 1) and memory = |lhs| + |rhs| + |out|.
 */
#pragma once

#include "qtn/tensor/network.hpp"

#include <nlohmann/json.hpp>

#include <utility>
#include <vector>

namespace qtn::path {

using tn::Hypergraph;

struct TreeNode {
    int left = -1;
    int right = -1;
    int vertex = -1;        ///< leaf vertex, -1 for internal nodes
    std::vector<int> edges; ///< hypergraph edge ids of the result
    double size = 1;        ///< elements of the result tensor
    double flops = 0;
    double width = 0;       ///< log2 of the largest tensor of the pair
    double memory = 0;

    [[nodiscard]] bool is_leaf() const { return vertex >= 0; }
};

class ContractionTree {
  public:
    ContractionTree() = default;

    /// Leaves are vertices 0..n-1 (node ids equal vertex ids); merge k
    /// creates node n+k from two existing node ids.
    static ContractionTree from_merges(const Hypergraph &h,
                                       const std::vector<std::pair<int, int>> &merges);

    /// Recomputes edge sets and costs. Edges flagged in `removed` (sliced)
    /// are dropped from every node.
    void annotate(const Hypergraph &h, const std::vector<bool> &removed = {});

    [[nodiscard]] const std::vector<TreeNode> &nodes() const { return nodes_; }
    [[nodiscard]] int root() const { return root_; }
    [[nodiscard]] int n_leaves() const { return n_leaves_; }
    [[nodiscard]] double total_flops() const { return total_flops_; }
    /// log2 of the largest tensor (leaves and intermediates).
    [[nodiscard]] double width() const { return width_; }
    [[nodiscard]] double max_memory() const { return max_memory_; }

    /// Internal node ids in execution order (children before parents).
    [[nodiscard]] std::vector<int> internal_order() const;
    [[nodiscard]] std::vector<std::pair<int, int>> merges() const;

    [[nodiscard]] nlohmann::json to_json(const Hypergraph &h) const;
    /// Stable digest of the structure (merge list).
    [[nodiscard]] std::size_t hash() const;

    friend bool operator==(const ContractionTree &a, const ContractionTree &b) {
        return a.merges() == b.merges() && a.n_leaves_ == b.n_leaves_;
    }

  private:
    std::vector<TreeNode> nodes_;
    int root_ = -1;
    int n_leaves_ = 0;
    double total_flops_ = 0;
    double width_ = 0;
    double max_memory_ = 0;
};

/// Cost of contracting two tensors with the given edge sets into `out`.
struct PairCost {
    double p;
    double q;
    [[nodiscard]] double flops() const { return p * (2 * q - 1); }
};
PairCost pair_cost(const Hypergraph &h, const std::vector<int> &a,
                   const std::vector<int> &b, const std::vector<int> &out);

} // namespace qtn::path
