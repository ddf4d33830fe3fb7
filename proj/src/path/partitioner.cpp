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
#include "qtn/path/partitioner.hpp"

#include "qtn/error.hpp"
#include "qtn/util/thread_pool.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <unordered_map>

namespace qtn::path {

namespace {

constexpr int kCoarsestSize = 40;
constexpr int kInitialPartitions = 8;
constexpr int kMaxFmPasses = 8;
constexpr int kFmPatience = 25;
constexpr double kOverweightPenalty = 1e6;
constexpr double kEps = 1e-12;

/// Subgraph used by the partitioner: weighted vertices and hyperedges with
/// local pin ids.
struct Graph {
    int n = 0;
    std::vector<int> vw;
    std::vector<std::vector<int>> pins;
    std::vector<double> ew;
    std::vector<char> outer;
    std::vector<std::vector<int>> vedges;

    void add_edge(std::vector<int> p, double w, bool is_outer) {
        if (p.size() >= 2 || (is_outer && !p.empty())) {
            pins.push_back(std::move(p));
            ew.push_back(w);
            outer.push_back(is_outer);
        }
    }
    void build_vedges() {
        vedges.assign(n, {});
        for (std::size_t e = 0; e < pins.size(); ++e) {
            for (int v : pins[e]) vedges[v].push_back(static_cast<int>(e));
        }
    }
    [[nodiscard]] int total_weight() const {
        return std::accumulate(vw.begin(), vw.end(), 0);
    }
};

Graph local_graph(const Hypergraph &h, const std::vector<int> &vertices) {
    Graph g;
    g.n = static_cast<int>(vertices.size());
    g.vw.assign(g.n, 1);
    std::unordered_map<int, int> local;
    for (int i = 0; i < g.n; ++i) local[vertices[i]] = i;
    std::unordered_map<int, bool> seen;
    for (int v : vertices) {
        for (int e : h.vertex_edges[v]) {
            if (!seen.emplace(e, true).second) continue;
            const auto &edge = h.edges[e];
            std::vector<int> inside;
            for (int p : edge.pins) {
                auto it = local.find(p);
                if (it != local.end()) inside.push_back(it->second);
            }
            const bool outer = edge.open || inside.size() < edge.pins.size();
            g.add_edge(std::move(inside), edge.weight, outer);
        }
    }
    g.build_vedges();
    return g;
}

class PartitionState {
  public:
    PartitionState(const Graph &g, double lambda, int maxw, std::vector<int> part)
        : g_(g), lambda_(lambda), maxw_(maxw), part_(std::move(part)) {
        cnt_.assign(g.pins.size(), {0, 0});
        for (int v = 0; v < g.n; ++v) weight_[part_[v]] += g.vw[v];
        for (std::size_t e = 0; e < g.pins.size(); ++e) {
            for (int v : g.pins[e]) ++cnt_[e][part_[v]];
            if (cnt_[e][0] > 0 && cnt_[e][1] > 0) cut_ += g.ew[e];
            if (g.outer[e]) {
                for (int s = 0; s < 2; ++s) {
                    if (cnt_[e][s] > 0) w_[s] += g.ew[e];
                }
            }
        }
    }

    [[nodiscard]] double objective() const {
        return value(cut_, w_[0], w_[1], weight_[0], weight_[1]);
    }

    /// Objective after moving v, or nullopt when the move is not allowed.
    [[nodiscard]] std::optional<double> after_move(int v) const {
        const int a = part_[v], b = 1 - a;
        const int vw = g_.vw[v];
        if (weight_[a] - vw < 1) return std::nullopt;
        if (weight_[b] + vw > maxw_ && weight_[b] + vw >= weight_[a]) {
            return std::nullopt;
        }
        double cut = cut_;
        double w[2] = {w_[0], w_[1]};
        for (int e : g_.vedges[v]) {
            const auto &c = cnt_[e];
            const bool before = c[0] > 0 && c[1] > 0;
            const bool after = (c[a] - 1) > 0 && (c[b] + 1) > 0;
            cut += g_.ew[e] * (static_cast<int>(after) - static_cast<int>(before));
            if (g_.outer[e]) {
                if (c[a] == 1) w[a] -= g_.ew[e];
                if (c[b] == 0) w[b] += g_.ew[e];
            }
        }
        int wt[2] = {weight_[0], weight_[1]};
        wt[a] -= vw;
        wt[b] += vw;
        return value(cut, w[0], w[1], wt[0], wt[1]);
    }

    void move(int v) {
        const int a = part_[v], b = 1 - a;
        for (int e : g_.vedges[v]) {
            auto &c = cnt_[e];
            const bool before = c[0] > 0 && c[1] > 0;
            if (g_.outer[e]) {
                if (c[a] == 1) w_[a] -= g_.ew[e];
                if (c[b] == 0) w_[b] += g_.ew[e];
            }
            --c[a];
            ++c[b];
            const bool after = c[0] > 0 && c[1] > 0;
            cut_ += g_.ew[e] * (static_cast<int>(after) - static_cast<int>(before));
        }
        weight_[a] -= g_.vw[v];
        weight_[b] += g_.vw[v];
        part_[v] = b;
    }

    /// Worth considering: touches a cut or outer edge, or sits on an
    /// overweight side.
    [[nodiscard]] bool candidate(int v) const {
        const int a = part_[v];
        if (weight_[a] > maxw_) return true;
        for (int e : g_.vedges[v]) {
            if (g_.outer[e] || cnt_[e][1 - a] > 0) return true;
        }
        return false;
    }

    [[nodiscard]] const std::vector<int> &part() const { return part_; }

  private:
    double value(double cut, double w0, double w1, int wt0, int wt1) const {
        const int over = std::max(0, wt0 - maxw_) + std::max(0, wt1 - maxw_);
        return cut + lambda_ * std::abs(w0 - w1) + kOverweightPenalty * over;
    }

    const Graph &g_;
    double lambda_;
    int maxw_;
    std::vector<int> part_;
    std::vector<std::array<int, 2>> cnt_;
    double cut_ = 0;
    double w_[2] = {0, 0};
    int weight_[2] = {0, 0};
};

/// Fiduccia-Mattheyses passes with rollback to the best prefix.
std::vector<int> fm_refine(const Graph &g, std::vector<int> part, double lambda,
                           int maxw, std::mt19937_64 &rng) {
    std::vector<int> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    for (int pass = 0; pass < kMaxFmPasses; ++pass) {
        PartitionState st(g, lambda, maxw, part);
        const double start = st.objective();
        double best = start;
        std::size_t best_len = 0;
        std::vector<int> moves;
        std::vector<char> locked(g.n, 0);
        std::shuffle(order.begin(), order.end(), rng);
        int stale = 0;
        while (true) {
            int pick = -1;
            double pick_obj = std::numeric_limits<double>::infinity();
            for (int v : order) {
                if (locked[v] || !st.candidate(v)) continue;
                const auto obj = st.after_move(v);
                if (obj && *obj < pick_obj - kEps) {
                    pick = v;
                    pick_obj = *obj;
                }
            }
            if (pick < 0) break;
            st.move(pick);
            locked[pick] = 1;
            moves.push_back(pick);
            if (pick_obj < best - kEps) {
                best = pick_obj;
                best_len = moves.size();
                stale = 0;
            } else if (++stale >= kFmPatience) {
                break;
            }
        }
        for (std::size_t i = 0; i < best_len; ++i) part[moves[i]] ^= 1;
        if (!(best < start - kEps)) break;
    }
    return part;
}

std::vector<int> random_partition(const Graph &g, int target, std::mt19937_64 &rng) {
    std::vector<int> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> part(g.n, 0);
    int w = 0;
    for (int v : order) {
        if (w >= target) break;
        part[v] = 1;
        w += g.vw[v];
    }
    return part;
}

/// Breadth-first region growing from a random vertex.
std::vector<int> grown_partition(const Graph &g, int target, std::mt19937_64 &rng) {
    std::vector<int> part(g.n, 0);
    std::vector<char> seen(g.n, 0);
    std::vector<int> queue;
    std::uniform_int_distribution<int> pick(0, g.n - 1);
    int w = 0;
    std::size_t head = 0;
    while (w < target) {
        if (head == queue.size()) {
            int s = pick(rng);
            while (seen[s]) s = (s + 1) % g.n;
            seen[s] = 1;
            queue.push_back(s);
        }
        const int v = queue[head++];
        part[v] = 1;
        w += g.vw[v];
        std::vector<int> next;
        for (int e : g.vedges[v]) {
            for (int u : g.pins[e]) {
                if (!seen[u]) {
                    seen[u] = 1;
                    next.push_back(u);
                }
            }
        }
        std::shuffle(next.begin(), next.end(), rng);
        queue.insert(queue.end(), next.begin(), next.end());
    }
    return part;
}

Graph coarsen(const Graph &g, int cap, std::mt19937_64 &rng, std::vector<int> &map) {
    std::vector<int> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    map.assign(g.n, -1);
    std::vector<double> score(g.n, 0.0);
    std::vector<int> touched;
    int next = 0;
    for (int v : order) {
        if (map[v] >= 0) continue;
        touched.clear();
        for (int e : g.vedges[v]) {
            const auto &p = g.pins[e];
            if (p.size() < 2 || p.size() > 50) continue;
            const double s = g.ew[e] / static_cast<double>(p.size() - 1);
            for (int u : p) {
                if (u == v || map[u] >= 0 || g.vw[u] + g.vw[v] > cap) continue;
                if (score[u] == 0.0) touched.push_back(u);
                score[u] += s;
            }
        }
        int best = -1;
        for (int u : touched) {
            if (best < 0 || score[u] > score[best] + kEps) best = u;
        }
        for (int u : touched) score[u] = 0.0;
        map[v] = next;
        if (best >= 0) map[best] = next;
        ++next;
    }
    Graph c;
    c.n = next;
    c.vw.assign(next, 0);
    for (int v = 0; v < g.n; ++v) c.vw[map[v]] += g.vw[v];
    for (std::size_t e = 0; e < g.pins.size(); ++e) {
        std::vector<int> p;
        for (int v : g.pins[e]) p.push_back(map[v]);
        std::sort(p.begin(), p.end());
        p.erase(std::unique(p.begin(), p.end()), p.end());
        c.add_edge(std::move(p), g.ew[e], g.outer[e]);
    }
    c.build_vedges();
    return c;
}

std::vector<int> partition_graph(const Graph &g0, double imbalance, double lambda,
                                 std::mt19937_64 &rng) {
    if (g0.n == 2) return {0, 1};
    const int total = g0.total_weight();
    int maxw = static_cast<int>(std::ceil((1.0 + imbalance) * total / 2.0 - 1e-9));
    maxw = std::min(std::max(maxw, (total + 1) / 2), total - 1);

    std::vector<Graph> levels{g0};
    std::vector<std::vector<int>> maps;
    const int cap = std::max(2, total / 16);
    while (levels.back().n > kCoarsestSize) {
        std::vector<int> map;
        Graph c = coarsen(levels.back(), cap, rng, map);
        if (c.n > levels.back().n * 9 / 10) break;
        maps.push_back(std::move(map));
        levels.push_back(std::move(c));
    }

    const Graph &coarsest = levels.back();
    std::vector<int> best;
    double best_obj = std::numeric_limits<double>::infinity();
    const int target = total / 2;
    for (int i = 0; i < kInitialPartitions; ++i) {
        auto part = (i % 2 == 0) ? grown_partition(coarsest, target, rng)
                                 : random_partition(coarsest, target, rng);
        if (std::count(part.begin(), part.end(), 1) == 0) part[0] = 1;
        if (std::count(part.begin(), part.end(), 0) == 0) part[0] = 0;
        part = fm_refine(coarsest, std::move(part), lambda, maxw, rng);
        const double obj = PartitionState(coarsest, lambda, maxw, part).objective();
        if (obj < best_obj - kEps) {
            best_obj = obj;
            best = std::move(part);
        }
    }
    for (std::size_t lv = levels.size() - 1; lv-- > 0;) {
        const auto &map = maps[lv];
        std::vector<int> fine(levels[lv].n);
        for (int v = 0; v < levels[lv].n; ++v) fine[v] = best[map[v]];
        best = fm_refine(levels[lv], std::move(fine), lambda, maxw, rng);
    }
    return best;
}

/// Greedy pairwise contraction of `vertices`; appends merges and returns
/// the id of the subtree root. With temperature > 0 each pair's log2 flops
/// is perturbed by Gumbel noise of that scale.
int greedy_subtree(const Hypergraph &h, const std::vector<int> &vertices,
                   std::vector<std::pair<int, int>> &merges,
                   double temperature = 0.0, std::mt19937_64 *rng = nullptr) {
    struct Active {
        int id;
        std::vector<int> edges;
        std::vector<int> counts;
        double size;
    };
    std::vector<Active> active;
    for (int v : vertices) {
        Active a{v, h.vertex_edges[v], std::vector<int>(h.vertex_edges[v].size(), 1), 1};
        for (int e : a.edges) a.size *= static_cast<double>(h.edges[e].dim);
        active.push_back(std::move(a));
    }
    auto combine = [&](const Active &a, const Active &b) {
        Active r{-1, {}, {}, 1};
        std::vector<int> uni = a.edges, cnt = a.counts;
        for (std::size_t i = 0; i < b.edges.size(); ++i) {
            auto it = std::find(uni.begin(), uni.end(), b.edges[i]);
            if (it == uni.end()) {
                uni.push_back(b.edges[i]);
                cnt.push_back(b.counts[i]);
            } else {
                cnt[it - uni.begin()] += b.counts[i];
            }
        }
        for (std::size_t i = 0; i < uni.size(); ++i) {
            const auto &e = h.edges[uni[i]];
            if (e.open || cnt[i] < static_cast<int>(e.pins.size())) {
                r.edges.push_back(uni[i]);
                r.counts.push_back(cnt[i]);
                r.size *= static_cast<double>(e.dim);
            }
        }
        return r;
    };
    while (active.size() > 1) {
        struct Best {
            double flops, size;
            int a, b;
        };
        std::optional<Best> best;
        std::optional<Active> best_result;
        std::size_t bi = 0, bj = 0;
        auto consider = [&](std::size_t i, std::size_t j) {
            auto r = combine(active[i], active[j]);
            double flops = pair_cost(h, active[i].edges, active[j].edges, r.edges).flops();
            if (temperature > 0.0) {
                const double u = std::uniform_real_distribution<double>(1e-300, 1.0)(*rng);
                flops = std::log2(flops) - temperature * -std::log(-std::log(u));
            }
            const int a = std::min(active[i].id, active[j].id);
            const int b = std::max(active[i].id, active[j].id);
            Best c{flops, r.size, a, b};
            if (!best || std::tie(c.flops, c.size, c.a, c.b) <
                             std::tie(best->flops, best->size, best->a, best->b)) {
                best = c;
                best_result = std::move(r);
                bi = i;
                bj = j;
            }
        };
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                bool shared = false;
                for (int e : active[i].edges) {
                    if (std::find(active[j].edges.begin(), active[j].edges.end(), e) !=
                        active[j].edges.end()) {
                        shared = true;
                        break;
                    }
                }
                if (shared) consider(i, j);
            }
        }
        if (!best) {
            for (std::size_t i = 0; i < active.size(); ++i) {
                for (std::size_t j = i + 1; j < active.size(); ++j) consider(i, j);
            }
        }
        merges.emplace_back(active[bi].id, active[bj].id);
        best_result->id = h.n_vertices + static_cast<int>(merges.size()) - 1;
        active[bi] = std::move(*best_result);
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    return active.front().id;
}

int build_recursive(const Hypergraph &h, const std::vector<int> &vertices,
                    double imbalance, double lambda, int cutoff, double temperature,
                    std::mt19937_64 &rng,
                    std::vector<std::pair<int, int>> &merges) {
    if (vertices.size() == 1) return vertices[0];
    if (static_cast<int>(vertices.size()) <= cutoff) return greedy_subtree(h, vertices, merges, temperature, &rng);
    const auto parts =
        partition_graph(local_graph(h, vertices), imbalance, lambda, rng);
    std::vector<int> a, b;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        (parts[i] == 0 ? a : b).push_back(vertices[i]);
    }
    const int l = build_recursive(h, a, imbalance, lambda, cutoff, temperature, rng, merges);
    const int r = build_recursive(h, b, imbalance, lambda, cutoff, temperature, rng, merges);
    merges.emplace_back(l, r);
    return h.n_vertices + static_cast<int>(merges.size()) - 1;
}

} // namespace

void PartitionerConfig::validate() const {
    if (!(imbalance > 0.0 && imbalance < 0.5)) {
        throw Error(ErrorCode::InvalidArgument, "imbalance must be in (0, 0.5)");
    }
    if (max_repeats < 1) {
        throw Error(ErrorCode::InvalidArgument, "max_repeats must be >= 1");
    }
    if (search_parallel < 1) {
        throw Error(ErrorCode::InvalidArgument, "search_parallel must be >= 1");
    }
    if (cutoff < 1) {
        throw Error(ErrorCode::InvalidArgument, "cutoff must be >= 1");
    }
    if (!(max_time >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "max_time must be >= 0");
    }
}

std::vector<int> bipartition(const Hypergraph &h, const std::vector<int> &vertices,
                             double imbalance, double outer_balance,
                             std::uint64_t seed) {
    if (vertices.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "bipartition needs two vertices");
    }
    std::mt19937_64 rng(seed);
    return partition_graph(local_graph(h, vertices), imbalance, outer_balance, rng);
}

double bipartition_objective(const Hypergraph &h, const std::vector<int> &vertices,
                             const std::vector<int> &parts, double outer_balance) {
    const Graph g = local_graph(h, vertices);
    return PartitionState(g, outer_balance, g.total_weight(), parts).objective();
}

ContractionTree build_tree(const Hypergraph &h, const PartitionerConfig &cfg,
                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double imbalance = cfg.imbalance;
    double lambda = cfg.outer_balance;
    int cutoff = cfg.cutoff;
    double temperature = 0.0;
    if (cfg.randomize_trials) {
        imbalance = std::uniform_real_distribution<double>(cfg.imbalance, 0.5)(rng);
        lambda = std::uniform_real_distribution<double>(0.0, 2.0 * cfg.outer_balance)(rng);
        cutoff = std::uniform_int_distribution<int>(1, std::max(1, cfg.cutoff))(rng);
        temperature = std::uniform_real_distribution<double>(0.0, cfg.greedy_temperature)(rng);
    }
    std::vector<int> all(h.n_vertices);
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::pair<int, int>> merges;
    build_recursive(h, all, imbalance, lambda, cutoff, temperature, rng, merges);
    return ContractionTree::from_merges(h, merges);
}

SearchResult search(const Hypergraph &h, const PartitionerConfig &cfg) {
    cfg.validate();
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::duration_cast<clock::duration>(
                                             std::chrono::duration<double>(cfg.max_time));
    std::vector<std::optional<ContractionTree>> trees(cfg.max_repeats);
    util::parallel_for(cfg.max_repeats, cfg.search_parallel, [&](std::size_t t) {
        if (clock::now() >= deadline) return;
        trees[t] = build_tree(h, cfg, cfg.seed + t);
    });
    SearchResult res;
    for (int t = 0; t < cfg.max_repeats; ++t) {
        if (!trees[t]) continue;
        ++res.trials_completed;
        res.trial_flops.push_back(trees[t]->total_flops());
        if (res.best_trial < 0 ||
            std::make_pair(trees[t]->width(), trees[t]->total_flops()) <
                std::make_pair(res.tree.width(), res.tree.total_flops())) {
            res.best_trial = t;
            res.tree = *trees[t];
        }
    }
    if (res.trials_completed == 0) {
        throw Error(ErrorCode::PathSearchTimeout,
                    "no contraction-path trial finished within max_time");
    }
    return res;
}

ContractionTree greedy_baseline(const Hypergraph &h) {
    std::vector<int> all(h.n_vertices);
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::pair<int, int>> merges;
    greedy_subtree(h, all, merges);
    return ContractionTree::from_merges(h, merges);
}

} // namespace qtn::path
