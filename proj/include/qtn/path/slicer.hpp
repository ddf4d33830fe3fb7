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
 * Index slicing: fix a set of closed edges so that every tensor of the
 * residual contraction fits a size target. The full result is the sum of
 * the residual contraction over all assignments of the sliced edges.
 */
#pragma once

#include "qtn/path/contraction_tree.hpp"
#include "qtn/path/partitioner.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace qtn::path {

struct SlicingConfig {
    double target_size = 268435456.0; ///< max elements per tensor (2^28)
    int repeats = 1024;               ///< real slicing trials
    int pseudo_trials = 128;          ///< per path trial, in the first phase
    /// When set, also slice until at least this many slices exist.
    std::optional<double> target_num_slices;
    bool contract_parallel = false;
    int workers = 1;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SlicingPlan {
    std::vector<int> sliced_edges; ///< hypergraph edge ids, in slicing order
    ContractionTree tree;          ///< residual tree (sliced edges removed)
    double n_slices = 1;
    double slice_flops = 0;        ///< flops of one residual contraction
    double unsliced_flops = 0;
    double overhead_ratio = 1;

    [[nodiscard]] bool empty() const { return sliced_edges.empty(); }
    [[nodiscard]] nlohmann::json to_json(const Hypergraph &h) const;
};

/// Greedy slicing of `tree`: while some tensor exceeds target_size, slice
/// the closed edge found in the most of the largest tensors (ties: found in
/// the most tensors of the whole tree, then random). Throws Unsliceable
/// when an oversized tensor has no closed edge left.
SlicingPlan greedy_slice(const Hypergraph &h, const ContractionTree &tree,
                         const SlicingConfig &cfg, std::uint64_t seed);

/// n_slices * per-slice flops of greedy_slice() with the same seed,
/// computed on edge metadata only.
double pseudo_slice_cost(const Hypergraph &h, const ContractionTree &tree,
                         const SlicingConfig &cfg, std::uint64_t seed);

struct TwoPhaseResult {
    ContractionTree tree; ///< unsliced tree chosen in phase one
    SlicingPlan plan;
    int best_trial = -1;
    int trials_completed = 0;
};

/// Phase one: every path trial is scored by the best of `pseudo_trials`
/// pseudo-slicings; the tree with the lowest score is kept. Phase two runs
/// `repeats` real slicings on it and returns the cheapest plan.
TwoPhaseResult two_phase_search(const Hypergraph &h, const PartitionerConfig &path_cfg,
                                const SlicingConfig &slice_cfg);

} // namespace qtn::path
