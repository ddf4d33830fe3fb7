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
#include "qtn/engine/executor.hpp"

#include "qtn/error.hpp"
#include "qtn/util/thread_pool.hpp"

#include <algorithm>

namespace qtn::engine {

using tn::shape_size;

namespace {

std::vector<std::size_t> shape_of(const tn::TensorNetwork &net, const std::vector<Label> &ls) {
    std::vector<std::size_t> s;
    s.reserve(ls.size());
    for (Label l : ls) s.push_back(net.dim(l));
    return s;
}

/// Offsets of a tensor with some axes pinned to fixed values.
struct FixedView {
    std::size_t base = 0;
    std::vector<std::size_t> dims;
    std::vector<std::size_t> strides;

    template <class F> void for_each(F &&f) const {
        std::vector<std::size_t> idx(dims.size(), 0);
        std::size_t off = base;
        std::size_t k = 0;
        const std::size_t total = shape_size(dims);
        for (std::size_t i = 0; i < total; ++i) {
            f(k++, off);
            for (std::size_t a = dims.size(); a-- > 0;) {
                off += strides[a];
                if (++idx[a] < dims[a]) break;
                off -= strides[a] * dims[a];
                idx[a] = 0;
            }
        }
    }
};

FixedView fixed_view(const std::vector<std::size_t> &shape,
                     const std::vector<std::pair<int, int>> &fixes,
                     const std::vector<std::size_t> &digits) {
    std::vector<std::size_t> strides(shape.size());
    std::size_t s = 1;
    for (std::size_t a = shape.size(); a-- > 0;) {
        strides[a] = s;
        s *= shape[a];
    }
    FixedView v;
    std::vector<char> pinned(shape.size(), 0);
    for (auto [axis, pos] : fixes) {
        v.base += digits[pos] * strides[axis];
        pinned[axis] = 1;
    }
    for (std::size_t a = 0; a < shape.size(); ++a) {
        if (!pinned[a]) {
            v.dims.push_back(shape[a]);
            v.strides.push_back(strides[a]);
        }
    }
    return v;
}

void add_into(DenseTensor &acc, const DenseTensor &t) {
    for (std::size_t i = 0; i < t.values.size(); ++i) acc.values[i] += t.values[i];
}

/// Binary-counter pairwise summation.
class Cascade {
  public:
    void add(DenseTensor t) {
        for (auto &slot : levels_) {
            if (!slot) {
                slot = std::move(t);
                return;
            }
            add_into(*slot, t);
            t = std::move(*slot);
            slot.reset();
        }
        levels_.emplace_back(std::move(t));
    }
    [[nodiscard]] std::optional<DenseTensor> total() && {
        std::optional<DenseTensor> out;
        for (auto &slot : levels_) {
            if (!slot) continue;
            if (!out) {
                out = std::move(slot);
            } else {
                add_into(*out, *slot);
            }
        }
        return out;
    }

  private:
    std::vector<std::optional<DenseTensor>> levels_;
};

} // namespace

struct ContractionExecutor::RunState {
    std::vector<DenseTensor> vals;
    std::vector<char> has;
    std::vector<DenseTensor> full; ///< sliced leaves: payload or adjoint before fixing
    std::vector<char> has_full;

    explicit RunState(std::size_t n) : vals(n), has(n, 0), full(n), has_full(n, 0) {}

    void accumulate(int step, DenseTensor t) {
        if (has[step]) {
            add_into(vals[step], t);
        } else {
            vals[step] = std::move(t);
            has[step] = 1;
        }
    }
    void merge(RunState &&o) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (o.has[i]) accumulate(static_cast<int>(i), std::move(o.vals[i]));
            if (o.has_full[i]) {
                if (has_full[i]) {
                    add_into(full[i], o.full[i]);
                } else {
                    full[i] = std::move(o.full[i]);
                    has_full[i] = 1;
                }
            }
        }
    }
};

struct ContractionExecutor::SliceState {
    std::vector<DenseTensor> vals;
    std::vector<std::size_t> digits;
    explicit SliceState(std::size_t n) : vals(n) {}
};

ContractionExecutor::ContractionExecutor(tn::TensorNetwork net, const tn::Hypergraph &h,
                                         const path::ContractionTree &tree,
                                         const path::SlicingPlan *plan, ExecutorOptions opt)
    : net_(std::move(net)), opt_(opt) {
    const path::ContractionTree &t = plan ? plan->tree : tree;
    if (t.n_leaves() != h.n_vertices ||
        h.n_vertices != static_cast<int>(net_.nodes().size())) {
        throw Error(ErrorCode::InvalidArgument, "tree does not match the network");
    }
    if (plan) {
        for (int e : plan->sliced_edges) {
            sliced_labels_.push_back(h.edges[e].label);
            sliced_dims_.push_back(h.edges[e].dim);
            n_slices_ *= static_cast<double>(h.edges[e].dim);
        }
    }
    std::vector<int> step_of(t.nodes().size(), -1);
    for (std::size_t id = 0; id < t.nodes().size(); ++id) {
        const auto &nd = t.nodes()[id];
        if (nd.is_leaf()) {
            step_of[id] = add_node(h.vertex_nodes[nd.vertex]);
        } else {
            std::vector<Label> labels;
            for (int e : nd.edges) labels.push_back(h.edges[e].label);
            step_of[id] = add_pair(step_of[nd.left], step_of[nd.right], std::move(labels));
        }
    }
    root_ = step_of[t.root()];
    const auto &root_labels = steps_[root_].labels;
    const auto &open = net_.open_labels();
    if (root_labels.size() != open.size()) {
        throw Error(ErrorCode::InvalidArgument, "tree root does not carry the open labels");
    }
    for (Label l : open) {
        const auto it = std::find(root_labels.begin(), root_labels.end(), l);
        if (it == root_labels.end()) {
            throw Error(ErrorCode::InvalidArgument, "tree root does not carry the open labels");
        }
        out_perm_.push_back(static_cast<int>(it - root_labels.begin()));
    }
}

int ContractionExecutor::add_node(int node_id) {
    const auto &nd = net_.node(node_id);
    if (nd.base < 0) {
        const int l = add_node(nd.left);
        const int r = add_node(nd.right);
        std::vector<Label> labels;
        for (Label x : nd.labels) {
            if (std::find(sliced_labels_.begin(), sliced_labels_.end(), x) ==
                sliced_labels_.end()) {
                labels.push_back(x);
            }
        }
        return add_pair(l, r, std::move(labels));
    }
    const auto &b = net_.base(nd.base);
    Step s;
    s.base = nd.base;
    s.parametric = b.parametric();
    s.base_shape = shape_of(net_, b.labels);
    for (std::size_t a = 0; a < b.labels.size(); ++a) {
        const auto it = std::find(sliced_labels_.begin(), sliced_labels_.end(), b.labels[a]);
        if (it == sliced_labels_.end()) {
            s.labels.push_back(b.labels[a]);
        } else {
            s.fixes.emplace_back(static_cast<int>(a),
                                 static_cast<int>(it - sliced_labels_.begin()));
        }
    }
    std::reverse(s.fixes.begin(), s.fixes.end());
    s.sliced = !s.fixes.empty();
    s.shape = shape_of(net_, s.labels);
    peak_tensor_ = std::max(peak_tensor_, static_cast<double>(shape_size(s.base_shape)));
    steps_.push_back(std::move(s));
    cache_.push_back(b.parametric()
                         ? nullptr
                         : std::make_shared<const DenseTensor>(net_.base_tensor(nd.base, nullptr)));
    return static_cast<int>(steps_.size()) - 1;
}

int ContractionExecutor::add_pair(int left, int right, std::vector<Label> labels) {
    Step s;
    s.left = left;
    s.right = right;
    s.labels = std::move(labels);
    s.shape = shape_of(net_, s.labels);
    const auto &l = steps_[left], &r = steps_[right];
    s.parametric = l.parametric || r.parametric;
    s.sliced = l.sliced || r.sliced;
    s.pair = std::make_shared<const tn::PairPlan>(tn::PairSpec{l.labels, r.labels, s.labels},
                                                  l.shape, r.shape);
    const double ls = static_cast<double>(shape_size(l.shape));
    const double rsz = static_cast<double>(shape_size(r.shape));
    const double os = static_cast<double>(shape_size(s.shape));
    peak_pair_ = std::max(peak_pair_, ls + rsz + os);
    peak_tensor_ = std::max(peak_tensor_, os);
    if (ls + rsz + os > opt_.memory_budget) {
        throw Error(ErrorCode::OutOfMemoryBudget,
                    "a pairwise contraction needs " + std::to_string(ls + rsz + os) +
                        " elements, above the budget of " +
                        std::to_string(opt_.memory_budget));
    }
    if (l.parametric) {
        s.adj_left = std::make_shared<const tn::PairPlan>(
            tn::PairSpec{s.labels, r.labels, l.labels}, s.shape, r.shape);
    }
    if (r.parametric) {
        s.adj_right = std::make_shared<const tn::PairPlan>(
            tn::PairSpec{s.labels, l.labels, r.labels}, s.shape, l.shape);
    }
    std::shared_ptr<const DenseTensor> cached;
    if (!s.parametric && !s.sliced) {
        cached = std::make_shared<const DenseTensor>(s.pair->execute(*cache_[left], *cache_[right]));
        // only the new value is needed from here on
        cache_[left].reset();
        cache_[right].reset();
    }
    steps_.push_back(std::move(s));
    cache_.push_back(std::move(cached));
    return static_cast<int>(steps_.size()) - 1;
}

std::size_t ContractionExecutor::n_cached() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        if (!steps_[i].parametric && !steps_[i].sliced && steps_[i].base < 0) ++n;
    }
    return n;
}

const DenseTensor &ContractionExecutor::value_of(const RunState &rs, const SliceState *ss,
                                                 int step) const {
    const auto &s = steps_[step];
    if (s.sliced) return ss->vals[step];
    if (!s.parametric) return *cache_[step];
    return rs.vals[step];
}

void ContractionExecutor::forward_run(const BoundAngles *angles, RunState &rs) const {
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        const auto &s = steps_[i];
        if (!s.parametric) continue;
        if (s.base >= 0) {
            auto payload = net_.base_tensor(s.base, angles);
            if (s.sliced) {
                rs.full[i] = std::move(payload);
                rs.has_full[i] = 1;
            } else {
                rs.vals[i] = std::move(payload);
                rs.has[i] = 1;
            }
        } else if (!s.sliced) {
            rs.vals[i] = s.pair->execute(value_of(rs, nullptr, s.left),
                                         value_of(rs, nullptr, s.right));
            rs.has[i] = 1;
        }
    }
}

void ContractionExecutor::forward_slice(const RunState &rs, std::size_t slice, SliceState &ss,
                                        bool keep) const {
    ss.digits.assign(sliced_dims_.size(), 0);
    for (std::size_t k = sliced_dims_.size(); k-- > 0;) {
        ss.digits[k] = slice % sliced_dims_[k];
        slice /= sliced_dims_[k];
    }
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        const auto &s = steps_[i];
        if (!s.sliced) continue;
        if (s.base >= 0) {
            const DenseTensor &src = s.parametric ? rs.full[i] : *cache_[i];
            DenseTensor out(s.shape);
            fixed_view(s.base_shape, s.fixes, ss.digits).for_each([&](std::size_t k, std::size_t off) {
                out.values[k] = src.values[off];
            });
            ss.vals[i] = std::move(out);
        } else {
            ss.vals[i] = s.pair->execute(value_of(rs, &ss, s.left), value_of(rs, &ss, s.right));
            if (!keep) {
                if (steps_[s.left].sliced) ss.vals[s.left] = DenseTensor();
                if (steps_[s.right].sliced) ss.vals[s.right] = DenseTensor();
            }
        }
    }
}

void ContractionExecutor::backward_slice(const RunState &rs, const SliceState &ss,
                                         std::size_t /*slice*/, const DenseTensor &root_adj,
                                         RunState &acc) const {
    std::vector<DenseTensor> adj(steps_.size());
    std::vector<char> has(steps_.size(), 0);
    adj[root_] = root_adj;
    has[root_] = 1;
    for (std::size_t i = steps_.size(); i-- > 0;) {
        const auto &s = steps_[i];
        if (!s.sliced || !has[i]) continue;
        if (s.base >= 0) {
            if (!s.parametric) continue;
            if (!acc.has_full[i]) {
                acc.full[i] = DenseTensor(s.base_shape);
                acc.has_full[i] = 1;
            }
            auto &full = acc.full[i];
            fixed_view(s.base_shape, s.fixes, ss.digits).for_each([&](std::size_t k, std::size_t off) {
                full.values[off] += adj[i].values[k];
            });
            continue;
        }
        auto push = [&](int child, int sibling, const tn::PairPlan &plan) {
            auto a = plan.execute(adj[i], value_of(rs, &ss, sibling));
            if (steps_[child].sliced) {
                adj[child] = std::move(a);
                has[child] = 1;
            } else {
                acc.accumulate(child, std::move(a));
            }
        };
        if (s.adj_left) push(s.left, s.right, *s.adj_left);
        if (s.adj_right) push(s.right, s.left, *s.adj_right);
        adj[i] = DenseTensor();
    }
}

void ContractionExecutor::backward_run(const RunState &rs, RunState &acc,
                                       const BoundAngles &angles,
                                       std::vector<double> &grad) const {
    grad.assign(angles.values.size(), 0.0);
    for (std::size_t i = steps_.size(); i-- > 0;) {
        const auto &s = steps_[i];
        if (!s.parametric) continue;
        if (s.base >= 0) {
            const DenseTensor *a = nullptr;
            if (s.sliced && acc.has_full[i]) a = &acc.full[i];
            if (!s.sliced && acc.has[i]) a = &acc.vals[i];
            if (a == nullptr) continue;
            const auto gate = *net_.base(s.base).gate;
            const std::size_t off = angles.offset[gate];
            const std::size_t n = angles.offset[gate + 1] - off;
            for (std::size_t j = 0; j < n; ++j) {
                const auto d = net_.base_tensor(s.base, &angles, static_cast<int>(j));
                grad[off + j] += tn::inner_product(*a, d).real();
            }
            continue;
        }
        if (s.sliced || !acc.has[i]) continue;
        if (s.adj_left) {
            acc.accumulate(s.left, s.adj_left->execute(acc.vals[i], value_of(rs, nullptr, s.right)));
        }
        if (s.adj_right) {
            acc.accumulate(s.right, s.adj_right->execute(acc.vals[i], value_of(rs, nullptr, s.left)));
        }
        acc.vals[i] = DenseTensor();
        acc.has[i] = 0;
    }
}

DenseTensor ContractionExecutor::root_to_output(const DenseTensor &root) const {
    return tn::permute(root, out_perm_);
}

DenseTensor ContractionExecutor::output_to_root(const DenseTensor &adj) const {
    std::vector<int> inv(out_perm_.size());
    for (std::size_t i = 0; i < out_perm_.size(); ++i) inv[out_perm_[i]] = static_cast<int>(i);
    if (adj.shape != tn::permute(DenseTensor(steps_[root_].shape), out_perm_).shape) {
        throw Error(ErrorCode::ShapeMismatch, "root adjoint has the wrong shape");
    }
    return tn::permute(adj, inv);
}

Execution ContractionExecutor::execute(const BoundAngles *angles, bool want_tape) const {
    RunState rs(steps_.size());
    forward_run(angles, rs);
    Execution ex;
    if (!steps_[root_].sliced) {
        ex.value = root_to_output(value_of(rs, nullptr, root_));
        if (want_tape) {
            ex.tape = AdjointTape{angles ? *angles : BoundAngles{}, std::move(rs.vals), {}};
        }
        return ex;
    }
    const auto n = static_cast<std::size_t>(n_slices_);
    std::vector<std::vector<DenseTensor>> kept;
    const int chunks = (opt_.contract_parallel && !want_tape)
                           ? static_cast<int>(std::min<std::size_t>(n, opt_.workers))
                           : 1;
    std::vector<std::optional<DenseTensor>> partial(chunks);
    util::parallel_for(chunks, chunks, [&](std::size_t c) {
        SliceState ss(steps_.size());
        Cascade sum;
        for (std::size_t sl = n * c / chunks; sl < n * (c + 1) / chunks; ++sl) {
            forward_slice(rs, sl, ss, want_tape);
            sum.add(ss.vals[root_]);
            if (want_tape) kept.push_back(ss.vals);
        }
        partial[c] = std::move(sum).total();
    });
    Cascade total;
    for (auto &p : partial) total.add(std::move(*p));
    ex.value = root_to_output(*std::move(total).total());
    if (want_tape) {
        ex.tape = AdjointTape{angles ? *angles : BoundAngles{}, std::move(rs.vals), std::move(kept)};
    }
    return ex;
}

std::vector<double> ContractionExecutor::backward(const AdjointTape *tape,
                                                  const DenseTensor &root_adjoint) const {
    const std::size_t want_slices = steps_[root_].sliced ? static_cast<std::size_t>(n_slices_) : 0;
    if (tape == nullptr || tape->run_values.size() != steps_.size() ||
        tape->slice_values.size() != want_slices) {
        throw Error(ErrorCode::TapeMissing, "backward needs the tape of a matching execute()");
    }
    RunState rs(steps_.size());
    rs.vals = tape->run_values;
    RunState acc(steps_.size());
    const auto adj = output_to_root(root_adjoint);
    if (!steps_[root_].sliced) {
        acc.accumulate(root_, adj);
    } else {
        SliceState ss(steps_.size());
        for (std::size_t sl = 0; sl < want_slices; ++sl) {
            ss.vals = tape->slice_values[sl];
            ss.digits.assign(sliced_dims_.size(), 0);
            std::size_t rem = sl;
            for (std::size_t k = sliced_dims_.size(); k-- > 0;) {
                ss.digits[k] = rem % sliced_dims_[k];
                rem /= sliced_dims_[k];
            }
            backward_slice(rs, ss, sl, adj, acc);
        }
    }
    std::vector<double> grad;
    backward_run(rs, acc, tape->angles, grad);
    return grad;
}

ContractionExecutor::ValueAndGrad
ContractionExecutor::value_and_grad(const BoundAngles &angles,
                                    const std::vector<DenseTensor> &root_adjoints) const {
    RunState rs(steps_.size());
    forward_run(&angles, rs);
    std::vector<DenseTensor> adjs;
    for (const auto &a : root_adjoints) adjs.push_back(output_to_root(a));
    const std::size_t R = adjs.size();
    ValueAndGrad out;
    out.grads.resize(R);
    std::vector<RunState> acc(R, RunState(steps_.size()));
    if (!steps_[root_].sliced) {
        out.value = root_to_output(value_of(rs, nullptr, root_));
        for (std::size_t r = 0; r < R; ++r) acc[r].accumulate(root_, adjs[r]);
    } else {
        const auto n = static_cast<std::size_t>(n_slices_);
        const int chunks = opt_.contract_parallel
                               ? static_cast<int>(std::min<std::size_t>(n, opt_.workers))
                               : 1;
        std::vector<std::optional<DenseTensor>> partial(chunks);
        std::vector<std::vector<RunState>> chunk_acc(chunks);
        util::parallel_for(chunks, chunks, [&](std::size_t c) {
            SliceState ss(steps_.size());
            Cascade sum;
            std::vector<RunState> local(R, RunState(steps_.size()));
            for (std::size_t sl = n * c / chunks; sl < n * (c + 1) / chunks; ++sl) {
                forward_slice(rs, sl, ss, true);
                sum.add(ss.vals[root_]);
                for (std::size_t r = 0; r < R; ++r) backward_slice(rs, ss, sl, adjs[r], local[r]);
            }
            partial[c] = std::move(sum).total();
            chunk_acc[c] = std::move(local);
        });
        Cascade total;
        for (auto &p : partial) total.add(std::move(*p));
        out.value = root_to_output(*std::move(total).total());
        for (int c = 0; c < chunks; ++c) {
            for (std::size_t r = 0; r < R; ++r) acc[r].merge(std::move(chunk_acc[c][r]));
        }
    }
    for (std::size_t r = 0; r < R; ++r) backward_run(rs, acc[r], angles, out.grads[r]);
    return out;
}

} // namespace qtn::engine
