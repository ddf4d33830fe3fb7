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
#include "qtn/path/contraction_tree.hpp"

#include "qtn/error.hpp"

#include <cmath>

namespace qtn::path {

namespace {

double edges_size(const Hypergraph &h, const std::vector<int> &edges) {
    double s = 1;
    for (int e : edges) s *= static_cast<double>(h.edges[e].dim);
    return s;
}

} // namespace

PairCost pair_cost(const Hypergraph &h, const std::vector<int> &a,
                   const std::vector<int> &b, const std::vector<int> &out) {
    PairCost c{1, 1};
    for (int e : out) c.p *= static_cast<double>(h.edges[e].dim);
    auto summed = [&](int e) {
        return std::find(out.begin(), out.end(), e) == out.end();
    };
    for (int e : a) {
        if (summed(e)) c.q *= static_cast<double>(h.edges[e].dim);
    }
    for (int e : b) {
        if (summed(e) && std::find(a.begin(), a.end(), e) == a.end()) {
            c.q *= static_cast<double>(h.edges[e].dim);
        }
    }
    return c;
}

ContractionTree ContractionTree::from_merges(
    const Hypergraph &h, const std::vector<std::pair<int, int>> &merges) {
    ContractionTree t;
    t.n_leaves_ = h.n_vertices;
    if (h.n_vertices < 1) {
        throw Error(ErrorCode::InvalidArgument, "a tree needs at least one vertex");
    }
    if (static_cast<int>(merges.size()) != h.n_vertices - 1) {
        throw Error(ErrorCode::InvalidArgument,
                    "a tree over n leaves needs n-1 merges");
    }
    t.nodes_.resize(h.n_vertices);
    for (int v = 0; v < h.n_vertices; ++v) t.nodes_[v].vertex = v;
    std::vector<bool> used(h.n_vertices + merges.size(), false);
    for (auto [a, b] : merges) {
        const int id = static_cast<int>(t.nodes_.size());
        if (a < 0 || b < 0 || a >= id || b >= id || a == b || used[a] || used[b]) {
            throw Error(ErrorCode::InvalidArgument, "invalid merge sequence");
        }
        used[a] = used[b] = true;
        TreeNode n;
        n.left = a;
        n.right = b;
        t.nodes_.push_back(n);
    }
    t.root_ = static_cast<int>(t.nodes_.size()) - 1;
    t.annotate(h);
    return t;
}

void ContractionTree::annotate(const Hypergraph &h, const std::vector<bool> &removed) {
    auto is_removed = [&](int e) {
        return !removed.empty() && removed[static_cast<std::size_t>(e)];
    };
    std::vector<std::vector<int>> counts(nodes_.size());
    total_flops_ = 0;
    width_ = 0;
    max_memory_ = 0;
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
        auto &n = nodes_[id];
        n.edges.clear();
        if (n.is_leaf()) {
            for (int e : h.vertex_edges[n.vertex]) {
                if (!is_removed(e)) {
                    n.edges.push_back(e);
                    counts[id].push_back(1);
                }
            }
            n.size = edges_size(h, n.edges);
            n.flops = 0;
            n.memory = n.size;
            n.width = std::log2(n.size);
        } else {
            const auto &l = nodes_[n.left], &r = nodes_[n.right];
            std::vector<int> uni = l.edges;
            std::vector<int> cnt = counts[n.left];
            for (std::size_t i = 0; i < r.edges.size(); ++i) {
                const auto it = std::find(uni.begin(), uni.end(), r.edges[i]);
                if (it == uni.end()) {
                    uni.push_back(r.edges[i]);
                    cnt.push_back(counts[n.right][i]);
                } else {
                    cnt[it - uni.begin()] += counts[n.right][i];
                }
            }
            for (std::size_t i = 0; i < uni.size(); ++i) {
                const auto &edge = h.edges[uni[i]];
                if (edge.open || cnt[i] < static_cast<int>(edge.pins.size())) {
                    n.edges.push_back(uni[i]);
                    counts[id].push_back(cnt[i]);
                }
            }
            const auto c = pair_cost(h, l.edges, r.edges, n.edges);
            n.size = c.p;
            n.flops = c.flops();
            n.memory = l.size + r.size + n.size;
            n.width = std::log2(std::max({l.size, r.size, n.size}));
            total_flops_ += n.flops;
        }
        width_ = std::max(width_, std::log2(n.size));
        max_memory_ = std::max(max_memory_, n.memory);
    }
}

std::vector<int> ContractionTree::internal_order() const {
    std::vector<int> out;
    for (int id = n_leaves_; id < static_cast<int>(nodes_.size()); ++id) {
        out.push_back(id);
    }
    return out;
}

std::vector<std::pair<int, int>> ContractionTree::merges() const {
    std::vector<std::pair<int, int>> out;
    for (int id = n_leaves_; id < static_cast<int>(nodes_.size()); ++id) {
        out.emplace_back(nodes_[id].left, nodes_[id].right);
    }
    return out;
}

nlohmann::json ContractionTree::to_json(const Hypergraph &h) const {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
        const auto &n = nodes_[id];
        nlohmann::json labels = nlohmann::json::array();
        for (int e : n.edges) labels.push_back(h.edges[e].label);
        nlohmann::json j{{"id", id}, {"edges", labels}, {"width", n.width}};
        if (n.is_leaf()) {
            j["leaf"] = n.vertex;
        } else {
            j["left"] = n.left;
            j["right"] = n.right;
            j["flops"] = n.flops;
        }
        nodes.push_back(std::move(j));
    }
    return {{"n_leaves", n_leaves_},
            {"root", root_},
            {"total_flops", total_flops_},
            {"width", width_},
            {"nodes", nodes}};
}

std::size_t ContractionTree::hash() const {
    std::size_t hsh = 1469598103934665603ULL;
    auto mix = [&](std::size_t v) {
        hsh ^= v + 0x9e3779b97f4a7c15ULL + (hsh << 6) + (hsh >> 2);
    };
    mix(static_cast<std::size_t>(n_leaves_));
    for (auto [a, b] : merges()) {
        mix(static_cast<std::size_t>(a));
        mix(static_cast<std::size_t>(b));
    }
    return hsh;
}

} // namespace qtn::path
