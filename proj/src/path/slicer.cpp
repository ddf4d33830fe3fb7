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
#include "qtn/path/slicer.hpp"

#include "qtn/error.hpp"
#include "qtn/util/thread_pool.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>

namespace qtn::path {

namespace {

/// Per-node sizes and summed-index products, updated as edges are sliced.
struct SliceMeta {
    std::vector<double> size;
    std::vector<double> q;
    std::vector<std::vector<int>> edge_nodes;
    std::vector<int> summed_at;
    std::vector<char> removed;
    double n_slices = 1;
};

SliceMeta make_meta(const Hypergraph &h, const ContractionTree &tree) {
    SliceMeta m;
    const auto &nodes = tree.nodes();
    m.size.resize(nodes.size());
    m.q.assign(nodes.size(), 1.0);
    m.edge_nodes.assign(h.edges.size(), {});
    m.summed_at.assign(h.edges.size(), -1);
    m.removed.assign(h.edges.size(), 0);
    for (std::size_t id = 0; id < nodes.size(); ++id) {
        const auto &n = nodes[id];
        m.size[id] = n.size;
        for (int e : n.edges) m.edge_nodes[e].push_back(static_cast<int>(id));
        if (n.is_leaf()) continue;
        const auto &l = nodes[n.left].edges, &r = nodes[n.right].edges;
        m.q[id] = pair_cost(h, l, r, n.edges).q;
        auto summed = [&](int e) {
            if (std::find(n.edges.begin(), n.edges.end(), e) == n.edges.end()) {
                m.summed_at[e] = static_cast<int>(id);
            }
        };
        for (int e : l) summed(e);
        for (int e : r) summed(e);
    }
    return m;
}

void slice_edge(const Hypergraph &h, SliceMeta &m, int e) {
    const double d = static_cast<double>(h.edges[e].dim);
    for (int id : m.edge_nodes[e]) m.size[id] /= d;
    if (m.summed_at[e] >= 0) m.q[m.summed_at[e]] /= d;
    m.removed[e] = 1;
    m.n_slices *= d;
}

/// The greedy selection loop shared by real and pseudo slicing.
std::vector<int> select_edges(const Hypergraph &h, const ContractionTree &tree,
                              const SlicingConfig &cfg, std::uint64_t seed, SliceMeta &m) {
    std::mt19937_64 rng(seed);
    const auto &nodes = tree.nodes();
    const int n_nodes = static_cast<int>(nodes.size());
    std::vector<int> chosen;
    std::vector<int> in_largest(h.edges.size(), 0);
    std::vector<int> touched;
    auto sliceable = [&](int e) { return !h.edges[e].open && !m.removed[e]; };
    auto has_sliceable = [&](int id) {
        return std::any_of(nodes[id].edges.begin(), nodes[id].edges.end(), sliceable);
    };
    while (true) {
        std::vector<int> pool;
        for (int id = 0; id < n_nodes; ++id) {
            if (m.size[id] > cfg.target_size) pool.push_back(id);
        }
        const bool need_more = cfg.target_num_slices && m.n_slices < *cfg.target_num_slices;
        if (pool.empty() && !need_more) break;
        if (pool.empty()) {
            for (int id = 0; id < n_nodes; ++id) {
                if (has_sliceable(id)) pool.push_back(id);
            }
        }
        double largest = 0;
        for (int id : pool) {
            if (!has_sliceable(id)) {
                throw Error(ErrorCode::Unsliceable,
                            "a tensor above the target size has no closed index left to slice");
            }
            largest = std::max(largest, m.size[id]);
        }
        if (pool.empty()) {
            throw Error(ErrorCode::Unsliceable, "no closed index left to reach the slice count");
        }
        touched.clear();
        for (int id : pool) {
            if (m.size[id] < largest) continue;
            for (int e : nodes[id].edges) {
                if (!sliceable(e)) continue;
                if (in_largest[e] == 0) touched.push_back(e);
                ++in_largest[e];
            }
        }
        int best = -1;
        int ties = 0;
        auto key = [&](int e) {
            return std::make_pair(in_largest[e], static_cast<int>(m.edge_nodes[e].size()));
        };
        for (int e : touched) {
            if (best < 0 || key(e) > key(best)) {
                best = e;
                ties = 1;
            } else if (key(e) == key(best) &&
                       std::uniform_int_distribution<int>(0, ties++)(rng) == 0) {
                best = e;
            }
        }
        for (int e : touched) in_largest[e] = 0;
        slice_edge(h, m, best);
        chosen.push_back(best);
    }
    return chosen;
}

double meta_flops(const ContractionTree &tree, const SliceMeta &m) {
    double total = 0;
    for (std::size_t id = 0; id < tree.nodes().size(); ++id) {
        if (!tree.nodes()[id].is_leaf()) total += m.size[id] * (2 * m.q[id] - 1);
    }
    return total;
}

bool fits(const ContractionTree &tree, const SlicingConfig &cfg) {
    double largest = 0;
    for (const auto &n : tree.nodes()) largest = std::max(largest, n.size);
    return largest <= cfg.target_size && !cfg.target_num_slices;
}

} // namespace

void SlicingConfig::validate() const {
    if (!(target_size >= 2)) {
        throw Error(ErrorCode::InvalidArgument, "target_size must be >= 2");
    }
    if (repeats < 1 || pseudo_trials < 1) {
        throw Error(ErrorCode::InvalidArgument, "repeats and pseudo_trials must be >= 1");
    }
    if (workers < 1) {
        throw Error(ErrorCode::InvalidArgument, "workers must be >= 1");
    }
}

nlohmann::json SlicingPlan::to_json(const Hypergraph &h) const {
    nlohmann::json labels = nlohmann::json::array();
    for (int e : sliced_edges) labels.push_back(h.edges[e].label);
    return {{"sliced_labels", labels},
            {"n_slices", n_slices},
            {"slice_flops", slice_flops},
            {"unsliced_flops", unsliced_flops},
            {"overhead_ratio", overhead_ratio},
            {"width", tree.width()}};
}

SlicingPlan greedy_slice(const Hypergraph &h, const ContractionTree &tree,
                         const SlicingConfig &cfg, std::uint64_t seed) {
    cfg.validate();
    SliceMeta m = make_meta(h, tree);
    SlicingPlan plan;
    plan.sliced_edges = select_edges(h, tree, cfg, seed, m);
    plan.tree = tree;
    if (!plan.sliced_edges.empty()) {
        std::vector<bool> removed(h.edges.size(), false);
        for (int e : plan.sliced_edges) removed[e] = true;
        plan.tree.annotate(h, removed);
    }
    plan.n_slices = m.n_slices;
    plan.slice_flops = plan.tree.total_flops();
    plan.unsliced_flops = tree.total_flops();
    plan.overhead_ratio = plan.unsliced_flops > 0
                              ? plan.n_slices * plan.slice_flops / plan.unsliced_flops
                              : 1.0;
    return plan;
}

double pseudo_slice_cost(const Hypergraph &h, const ContractionTree &tree,
                         const SlicingConfig &cfg, std::uint64_t seed) {
    SliceMeta m = make_meta(h, tree);
    select_edges(h, tree, cfg, seed, m);
    return m.n_slices * meta_flops(tree, m);
}

TwoPhaseResult two_phase_search(const Hypergraph &h, const PartitionerConfig &path_cfg,
                                const SlicingConfig &slice_cfg) {
    path_cfg.validate();
    slice_cfg.validate();
    using clock = std::chrono::steady_clock;
    const auto deadline =
        clock::now() + std::chrono::duration_cast<clock::duration>(
                           std::chrono::duration<double>(path_cfg.max_time));

    std::mutex mu;
    TwoPhaseResult res;
    double best_cost = std::numeric_limits<double>::infinity();
    util::parallel_for(path_cfg.max_repeats, path_cfg.search_parallel, [&](std::size_t t) {
        if (clock::now() >= deadline) return;
        auto tree = build_tree(h, path_cfg, path_cfg.seed + t);
        double cost = tree.total_flops();
        if (!fits(tree, slice_cfg)) {
            cost = std::numeric_limits<double>::infinity();
            for (int k = 0; k < slice_cfg.pseudo_trials; ++k) {
                cost = std::min(cost, pseudo_slice_cost(h, tree, slice_cfg,
                                                        slice_cfg.seed + k));
            }
        }
        std::lock_guard lock(mu);
        ++res.trials_completed;
        const int trial = static_cast<int>(t);
        if (res.best_trial < 0 ||
            std::make_pair(cost, trial) < std::make_pair(best_cost, res.best_trial)) {
            best_cost = cost;
            res.best_trial = trial;
            res.tree = std::move(tree);
        }
    });
    if (res.trials_completed == 0) {
        throw Error(ErrorCode::PathSearchTimeout,
                    "no contraction-path trial finished within max_time");
    }

    const int repeats = fits(res.tree, slice_cfg) ? 1 : slice_cfg.repeats;
    int best_rep = -1;
    double best_total = 0;
    util::parallel_for(repeats, slice_cfg.workers, [&](std::size_t r) {
        auto plan = greedy_slice(h, res.tree, slice_cfg, slice_cfg.seed + r);
        const double total = plan.n_slices * plan.slice_flops;
        std::lock_guard lock(mu);
        const int rep = static_cast<int>(r);
        if (best_rep < 0 || std::make_pair(total, rep) < std::make_pair(best_total, best_rep)) {
            best_total = total;
            best_rep = rep;
            res.plan = std::move(plan);
        }
    });
    return res;
}

} // namespace qtn::path
