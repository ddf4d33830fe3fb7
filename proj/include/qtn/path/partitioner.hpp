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
 * Contraction-path search by recursive hypergraph bisection. Each bisection
 * minimizes (weight of cut hyperedges) + lambda * |W0 - W1|, where W_s is
 * the weight of the subgraph's outer edges (open, or with pins outside the
 * subgraph) touching side s. The partitioner is multilevel: heavy-edge
 * matching, several initial partitions at the coarsest level, and
 * Fiduccia-Mattheyses refinement while uncoarsening. Small subgraphs are
 * finished by the greedy pair heuristic.
 */
#pragma once

#include "qtn/path/contraction_tree.hpp"

#include <cstdint>
#include <vector>

namespace qtn::path {

struct PartitionerConfig {
    double imbalance = 0.03;  ///< epsilon
    int max_repeats = 128;    ///< search trials
    double max_time = 120.0;  ///< seconds for the whole search
    int search_parallel = 1;  ///< worker threads
    std::uint64_t seed = 0;   ///< trial t uses seed + t
    double outer_balance = 1.0; ///< lambda
    /// Subgraphs of at most this many vertices are finished greedily.
    int cutoff = 8;
    /// Upper bound of the per-trial noise scale of the greedy finish.
    double greedy_temperature = 1.0;
    /// Draw epsilon, lambda and the cutoff per trial (from [imbalance, 0.5),
    /// [0, 2 lambda], [1, cutoff] and [0, greedy_temperature]) so trials explore different trees.
    bool randomize_trials = true;

    void validate() const;
};

/// Splits `vertices` (a subset of h) in two. Returns 0/1 per entry of
/// `vertices`. Both sides are non-empty and hold at most
/// ceil((1 + imbalance) |vertices| / 2) vertices.
std::vector<int> bipartition(const Hypergraph &h, const std::vector<int> &vertices,
                             double imbalance, double outer_balance,
                             std::uint64_t seed);

/// The objective minimized by bipartition().
double bipartition_objective(const Hypergraph &h, const std::vector<int> &vertices,
                             const std::vector<int> &parts, double outer_balance);

/// One trial: recursive bisection down to `cutoff`-sized subgraphs, which
/// are contracted greedily.
ContractionTree build_tree(const Hypergraph &h, const PartitionerConfig &cfg,
                           std::uint64_t seed);

struct SearchResult {
    ContractionTree tree;
    int best_trial = -1;
    int trials_completed = 0;
    std::vector<double> trial_flops; ///< per completed trial, in trial order
};

/// Runs up to max_repeats trials within max_time and keeps the minimum by
/// (width, total_flops, trial index). Throws PathSearchTimeout when no trial
/// finished.
SearchResult search(const Hypergraph &h, const PartitionerConfig &cfg);

/// Repeatedly contracts the pair with the fewest flops (ties: smaller
/// result, then lower node ids).
ContractionTree greedy_baseline(const Hypergraph &h);

} // namespace qtn::path
