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
#include "qtn/tensor/network.hpp"

#include "qtn/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qtn::tn {

namespace {

constexpr double kZeroTolerance = 1e-14;

std::vector<std::size_t> strides_of(const std::vector<std::size_t> &shape) {
    std::vector<std::size_t> s(shape.size(), 1);
    for (std::size_t i = shape.size(); i-- > 1;) {
        s[i - 1] = s[i] * shape[i];
    }
    return s;
}

void decode(std::size_t linear, const std::vector<std::size_t> &shape,
            std::vector<std::size_t> &idx) {
    idx.resize(shape.size());
    for (std::size_t i = shape.size(); i-- > 0;) {
        idx[i] = linear % shape[i];
        linear /= shape[i];
    }
}

template <class T> void erase_at(std::vector<T> &v, int pos) {
    v.erase(v.begin() + pos);
}

int find_label(const std::vector<Label> &labels, Label l) {
    const auto it = std::find(labels.begin(), labels.end(), l);
    return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

DenseTensor apply_op(const DenseTensor &t, const LeafOp &op) {
    const auto st = strides_of(t.shape);
    std::vector<std::size_t> idx;
    switch (op.kind) {
    case LeafOp::Kind::Flip: {
        DenseTensor out(t.shape);
        const std::size_t d = t.shape[op.axis];
        for (std::size_t o = 0; o < t.size(); ++o) {
            decode(o, t.shape, idx);
            const std::size_t src =
                o + (d - 1 - 2 * idx[op.axis]) * st[op.axis];
            out.values[o] = t.values[src];
        }
        return out;
    }
    case LeafOp::Kind::Fix:
    case LeafOp::Kind::SumOut:
    case LeafOp::Kind::Diagonal: {
        const int drop = op.kind == LeafOp::Kind::Diagonal ? op.other : op.axis;
        auto shape = t.shape;
        erase_at(shape, drop);
        DenseTensor out(shape);
        std::vector<std::size_t> full(t.rank());
        for (std::size_t o = 0; o < out.size(); ++o) {
            decode(o, shape, idx);
            for (std::size_t i = 0, j = 0; i < t.rank(); ++i) {
                full[i] = static_cast<int>(i) == drop ? 0 : idx[j++];
            }
            std::size_t off = 0;
            for (std::size_t i = 0; i < t.rank(); ++i) off += full[i] * st[i];
            if (op.kind == LeafOp::Kind::Fix) {
                out.values[o] = t.values[off + op.value * st[drop]];
            } else if (op.kind == LeafOp::Kind::Diagonal) {
                out.values[o] = t.values[off + full[op.axis] * st[drop]];
            } else {
                cplx acc{0.0, 0.0};
                for (std::size_t v = 0; v < t.shape[drop]; ++v) {
                    acc += t.values[off + v * st[drop]];
                }
                out.values[o] = acc;
            }
        }
        return out;
    }
    }
    return t;
}

DenseTensor pauli_tensor(char p, double coeff) {
    switch (p) {
    case 'X': return DenseTensor({2, 2}, {0.0, coeff, coeff, 0.0});
    case 'Y': return DenseTensor({2, 2}, {0.0, cplx(0, -coeff), cplx(0, coeff), 0.0});
    case 'Z': return DenseTensor({2, 2}, {coeff, 0.0, 0.0, -coeff});
    default: return DenseTensor({2, 2}, {coeff, 0.0, 0.0, coeff});
    }
}

} // namespace

std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::State: return "state";
    case Provenance::Gate: return "gate";
    case Provenance::Observable: return "observable";
    case Provenance::Conjugate: return "conjugate";
    case Provenance::Intermediate: return "intermediate";
    }
    return "unknown";
}

DenseTensor apply_ops(DenseTensor t, const std::vector<LeafOp> &ops) {
    for (const auto &op : ops) {
        t = apply_op(t, op);
    }
    return t;
}

Label TensorNetwork::new_label(std::size_t d) {
    const Label l = next_label_++;
    dims_[l] = d;
    return l;
}

bool TensorNetwork::is_open(Label l) const {
    return std::find(open_.begin(), open_.end(), l) != open_.end();
}

int TensorNetwork::add_tensor(std::shared_ptr<const DenseTensor> data,
                              std::vector<Label> labels, Provenance p,
                              std::string name, bool conj) {
    if (data->rank() != labels.size()) {
        throw Error(ErrorCode::ShapeMismatch, "tensor rank != label count");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = dims_.find(labels[i]);
        if (it == dims_.end()) {
            dims_[labels[i]] = data->shape[i];
        } else if (it->second != data->shape[i]) {
            throw Error(ErrorCode::ShapeMismatch,
                        "dimension mismatch on label " + std::to_string(labels[i]));
        }
        next_label_ = std::max(next_label_, labels[i] + 1);
    }
    BaseTensor b;
    b.provenance = p;
    b.name = std::move(name);
    b.base_shape = data->shape;
    b.data = std::move(data);
    b.conj = conj;
    b.base_labels = labels;
    b.labels = labels;
    bases_.push_back(std::move(b));
    TensorNode n;
    n.base = static_cast<int>(bases_.size()) - 1;
    n.labels = std::move(labels);
    pool_.push_back(std::move(n));
    active_.push_back(static_cast<int>(pool_.size()) - 1);
    return active_.back();
}

int TensorNetwork::add_tensor(DenseTensor data, std::vector<Label> labels,
                              Provenance p, std::string name) {
    return add_tensor(std::make_shared<const DenseTensor>(std::move(data)),
                      std::move(labels), p, std::move(name));
}

int TensorNetwork::add_gate(std::size_t gate, GateKind kind, std::size_t arity,
                            std::vector<Label> labels, Provenance p,
                            std::string name, bool conj) {
    BaseTensor b;
    b.provenance = p;
    b.name = std::move(name);
    b.gate = gate;
    b.kind = kind;
    b.conj = conj;
    b.base_shape.assign(2 * arity, 2);
    for (Label l : labels) {
        dims_[l] = 2;
        next_label_ = std::max(next_label_, l + 1);
    }
    b.base_labels = labels;
    b.labels = labels;
    bases_.push_back(std::move(b));
    TensorNode n;
    n.base = static_cast<int>(bases_.size()) - 1;
    n.labels = std::move(labels);
    pool_.push_back(std::move(n));
    active_.push_back(static_cast<int>(pool_.size()) - 1);
    return active_.back();
}

std::vector<int> TensorNetwork::bases_of(int id) const {
    std::vector<int> out;
    std::vector<int> stack{id};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        const auto &n = pool_[v];
        if (n.base >= 0) {
            out.push_back(n.base);
        } else {
            stack.push_back(n.right);
            stack.push_back(n.left);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::map<Label, std::vector<int>> TensorNetwork::incidence() const {
    std::map<Label, std::vector<int>> inc;
    for (int id : active_) {
        for (Label l : pool_[id].labels) inc[l].push_back(id);
    }
    return inc;
}

bool TensorNetwork::has_parametric(int node) const {
    for (int b : bases_of(node)) {
        if (bases_[b].parametric()) return true;
    }
    return false;
}

DenseTensor TensorNetwork::base_tensor(int bi, const BoundAngles *angles,
                                       std::optional<int> derivative) const {
    const auto &b = bases_.at(bi);
    DenseTensor t;
    if (b.data) {
        if (derivative) {
            t = DenseTensor(b.base_shape);
        } else {
            t = *b.data;
        }
    } else {
        if (angles == nullptr) {
            throw Error(ErrorCode::InvalidArgument,
                        "parametric tensor needs bound angles");
        }
        const auto a = angles->of(*b.gate);
        t = DenseTensor(b.base_shape,
                        derivative ? gate_matrix_derivative(b.kind, a, *derivative)
                                   : gate_matrix(b.kind, a));
    }
    if (b.conj) {
        for (auto &v : t.values) v = std::conj(v);
    }
    return apply_ops(std::move(t), b.ops);
}

DenseTensor TensorNetwork::node_tensor(int id, const BoundAngles *angles) const {
    const auto &n = pool_.at(id);
    if (n.base >= 0) {
        return base_tensor(n.base, angles);
    }
    const auto a = node_tensor(n.left, angles);
    const auto b = node_tensor(n.right, angles);
    PairSpec spec{pool_[n.left].labels, pool_[n.right].labels, n.labels};
    return contract_pair(a, b, spec);
}

std::map<Label, int> TensorNetwork::base_label_counts() const {
    std::map<Label, int> c;
    for (const auto &b : bases_) {
        for (Label l : b.labels) ++c[l];
    }
    return c;
}

std::map<Label, int> TensorNetwork::subtree_label_counts(int id) const {
    std::map<Label, int> c;
    for (int b : bases_of(id)) {
        for (Label l : bases_[b].labels) ++c[l];
    }
    return c;
}

std::vector<Label>
TensorNetwork::merged_labels(int left, int right,
                             const std::map<Label, int> &total) const {
    auto inside = subtree_label_counts(left);
    for (const auto &[l, k] : subtree_label_counts(right)) inside[l] += k;
    std::vector<Label> out;
    auto keep = [&](Label l) {
        if (std::find(out.begin(), out.end(), l) != out.end()) return;
        if (is_open(l) || total.at(l) > inside[l]) out.push_back(l);
    };
    for (Label l : pool_[left].labels) keep(l);
    for (Label l : pool_[right].labels) keep(l);
    return out;
}

void TensorNetwork::refresh_labels() {
    const auto total = base_label_counts();
    // children always precede parents in the pool
    for (std::size_t id = 0; id < pool_.size(); ++id) {
        auto &n = pool_[id];
        if (n.base >= 0) {
            n.labels = bases_[n.base].labels;
        } else {
            n.labels = merged_labels(n.left, n.right, total);
        }
    }
}

void TensorNetwork::rename_label(Label from, Label to) {
    if (from == to) return;
    if (dims_.at(from) != dims_.at(to)) {
        throw Error(ErrorCode::ShapeMismatch, "cannot identify labels of different dimension");
    }
    const bool from_open = is_open(from);
    if (from_open && is_open(to)) {
        throw Error(ErrorCode::InvalidArgument, "cannot identify two open labels");
    }
    for (auto &b : bases_) {
        const int pf = find_label(b.labels, from);
        if (pf < 0) continue;
        const int pt = find_label(b.labels, to);
        if (pt < 0) {
            b.labels[pf] = to;
            continue;
        }
        const int keep = std::min(pf, pt), drop = std::max(pf, pt);
        b.ops.push_back({LeafOp::Kind::Diagonal, keep, drop, 0});
        b.labels[keep] = to;
        erase_at(b.labels, drop);
    }
    if (from_open) {
        std::replace(open_.begin(), open_.end(), from, to);
    }
    refresh_labels();
}

void TensorNetwork::flip_label(Label l) {
    for (auto &b : bases_) {
        const int p = find_label(b.labels, l);
        if (p >= 0) b.ops.push_back({LeafOp::Kind::Flip, p, 0, 0});
    }
}

void TensorNetwork::fix_label(Label l, std::size_t value) {
    for (auto &b : bases_) {
        const int p = find_label(b.labels, l);
        if (p < 0) continue;
        b.ops.push_back({LeafOp::Kind::Fix, p, 0, value});
        erase_at(b.labels, p);
    }
    open_.erase(std::remove(open_.begin(), open_.end(), l), open_.end());
    refresh_labels();
}

void TensorNetwork::sum_out(int bi, Label l) {
    auto &b = bases_.at(bi);
    const int p = find_label(b.labels, l);
    if (p < 0) return;
    b.ops.push_back({LeafOp::Kind::SumOut, p, 0, 0});
    erase_at(b.labels, p);
    refresh_labels();
}

int TensorNetwork::merge(int a, int b) {
    TensorNode n;
    n.left = a;
    n.right = b;
    n.labels = merged_labels(a, b, base_label_counts());
    pool_.push_back(std::move(n));
    const int id = static_cast<int>(pool_.size()) - 1;
    std::replace(active_.begin(), active_.end(), a, id);
    active_.erase(std::remove(active_.begin(), active_.end(), b), active_.end());
    return id;
}

TensorNetwork circuit_to_network(const Circuit &circuit, std::size_t mi) {
    const auto &meas = circuit.measurements().at(mi);
    if (meas.kind == MeasurementKind::State) {
        throw Error(ErrorCode::UnsupportedMeasurementForMode,
                    "full state output is not available in tensor-network mode");
    }
    const int n = circuit.n_qubits();
    const auto &gates = circuit.gates();
    const auto bound = circuit.bind(std::vector<double>(circuit.param_count()));
    TensorNetwork tn;
    std::vector<Label> ket(n);

    std::shared_ptr<const DenseTensor> init;
    if (circuit.init_state()) {
        init = std::make_shared<const DenseTensor>(
            std::vector<std::size_t>(n, 2), *circuit.init_state());
        for (auto &l : ket) l = tn.new_label(2);
        tn.add_tensor(init, ket, Provenance::State, "psi0");
    }
    const auto zero = std::make_shared<const DenseTensor>(
        std::vector<std::size_t>{2}, std::vector<cplx>{1.0, 0.0});
    if (!init) {
        for (int q = 0; q < n; ++q) {
            ket[q] = tn.new_label(2);
            tn.add_tensor(zero, {ket[q]}, Provenance::State,
                          "|0>q" + std::to_string(q));
        }
    }

    std::vector<std::shared_ptr<const DenseTensor>> constant(gates.size());
    for (std::size_t g = 0; g < gates.size(); ++g) {
        const auto &gate = gates[g];
        const std::size_t k = gate.qubits.size();
        std::vector<Label> labels;
        for (std::size_t j = 0; j < k; ++j) labels.push_back(tn.new_label(2));
        for (int q : gate.qubits) labels.push_back(ket[q]);
        const std::string name(gate_info(gate.kind).name);
        if (gate.is_parametric()) {
            tn.add_gate(g, gate.kind, k, labels, Provenance::Gate, name, false);
        } else {
            const auto m = gate.kind == GateKind::Unitary
                               ? *gate.matrix
                               : gate_matrix(gate.kind, bound.of(g));
            constant[g] = std::make_shared<const DenseTensor>(
                std::vector<std::size_t>(2 * k, 2), m);
            tn.add_tensor(constant[g], labels, Provenance::Gate, name);
        }
        for (std::size_t j = 0; j < k; ++j) ket[gate.qubits[j]] = labels[j];
    }

    std::vector<Label> bra = ket;
    if (meas.kind == MeasurementKind::Expectation) {
        std::vector<int> active;
        for (int q = 0; q < n; ++q) {
            if (meas.observable.ops[q] != 'I') active.push_back(q);
        }
        if (active.empty()) active.push_back(0);
        bool first = true;
        for (int q : active) {
            bra[q] = tn.new_label(2);
            tn.add_tensor(pauli_tensor(meas.observable.ops[q],
                                       first ? meas.observable.coeff : 1.0),
                          {bra[q], ket[q]}, Provenance::Observable,
                          std::string(1, meas.observable.ops[q]) + "q" +
                              std::to_string(q));
            first = false;
        }
    } else {
        std::vector<Label> open;
        for (int q : meas.qubits) open.push_back(ket[q]);
        tn.set_open(open);
    }

    for (std::size_t g = gates.size(); g-- > 0;) {
        const auto &gate = gates[g];
        const std::size_t k = gate.qubits.size();
        std::vector<Label> labels;
        for (int q : gate.qubits) labels.push_back(bra[q]);
        for (std::size_t j = 0; j < k; ++j) labels.push_back(tn.new_label(2));
        const std::string name = std::string(gate_info(gate.kind).name) + "*";
        if (gate.is_parametric()) {
            tn.add_gate(g, gate.kind, k, labels, Provenance::Conjugate, name, true);
        } else {
            tn.add_tensor(constant[g], labels, Provenance::Conjugate, name, true);
        }
        for (std::size_t j = 0; j < k; ++j) bra[gate.qubits[j]] = labels[k + j];
    }
    if (init) {
        tn.add_tensor(init, bra, Provenance::Conjugate, "psi0*", true);
    } else {
        for (int q = 0; q < n; ++q) {
            tn.add_tensor(zero, {bra[q]}, Provenance::Conjugate,
                          "<0|q" + std::to_string(q), true);
        }
    }
    return tn;
}

namespace {

/// 0/1 support of a base tensor after its ops: symbolic for parametric
/// gates, numeric (|x| >= 1e-14) for constant tensors.
DenseTensor support_mask(const TensorNetwork &tn, int bi) {
    const auto &b = tn.base(bi);
    if (!b.parametric()) {
        auto t = tn.base_tensor(bi, nullptr);
        for (auto &v : t.values) v = std::abs(v) < kZeroTolerance ? 0.0 : 1.0;
        return t;
    }
    DenseTensor mask(b.base_shape);
    const auto st = gate_structure(b.kind);
    std::vector<std::size_t> idx;
    for (std::size_t o = 0; o < mask.size(); ++o) {
        decode(o, b.base_shape, idx);
        bool nz = true;
        for (auto [x, y] : st.diagonal) nz = nz && idx[x] == idx[y];
        for (auto [x, y] : st.anti_diagonal) nz = nz && idx[x] != idx[y];
        mask.values[o] = nz ? 1.0 : 0.0;
    }
    mask = apply_ops(std::move(mask), b.ops);
    for (auto &v : mask.values) v = std::abs(v) > 0.0 ? 1.0 : 0.0;
    return mask;
}

enum class PairKind { None, Diagonal, AntiDiagonal };

PairKind classify_pair(const DenseTensor &mask, int a, int b) {
    if (mask.shape[a] != mask.shape[b]) return PairKind::None;
    bool diag = true, anti = mask.shape[a] == 2;
    std::vector<std::size_t> idx;
    for (std::size_t o = 0; o < mask.size() && (diag || anti); ++o) {
        if (mask.values[o] == 0.0) continue;
        decode(o, mask.shape, idx);
        if (idx[a] != idx[b]) diag = false;
        if (idx[a] == idx[b]) anti = false;
    }
    if (diag) return PairKind::Diagonal;
    if (anti) return PairKind::AntiDiagonal;
    return PairKind::None;
}

bool squeeze_pass(TensorNetwork &tn, SimplifyStats &st) {
    bool changed = false;
    for (const auto &[l, d] : std::map<Label, std::size_t>(tn.dims())) {
        if (d != 1 || tn.is_open(l)) continue;
        bool used = false;
        for (std::size_t b = 0; b < tn.base_count() && !used; ++b) {
            used = find_label(tn.base(b).labels, l) >= 0;
        }
        if (!used) continue;
        tn.fix_label(l, 0);
        ++st.squeezed;
        changed = true;
    }
    return changed;
}

bool trace_pass(TensorNetwork &tn, SimplifyStats &st) {
    bool changed = false;
    std::map<Label, std::vector<int>> owners;
    for (std::size_t b = 0; b < tn.base_count(); ++b) {
        for (Label l : tn.base(b).labels) owners[l].push_back(static_cast<int>(b));
    }
    for (const auto &[l, bs] : owners) {
        if (bs.size() == 1 && !tn.is_open(l)) {
            tn.sum_out(bs[0], l);
            ++st.traced;
            changed = true;
        }
    }
    return changed;
}

bool diagonal_pass(TensorNetwork &tn, SimplifyStats &st) {
    bool changed = false;
    bool again = true;
    while (again) {
        again = false;
        for (int id : tn.nodes()) {
            const auto &node = tn.node(id);
            if (node.base < 0 || node.labels.size() < 2) continue;
            const auto mask = support_mask(tn, node.base);
            const auto labels = node.labels;
            for (int a = 0; a < static_cast<int>(labels.size()) && !again; ++a) {
                for (int b = a + 1; b < static_cast<int>(labels.size()) && !again; ++b) {
                    const auto kind = classify_pair(mask, a, b);
                    if (kind == PairKind::None) continue;
                    Label keep = labels[a], drop = labels[b];
                    if (tn.is_open(drop)) std::swap(keep, drop);
                    if (tn.is_open(drop)) continue;
                    if (kind == PairKind::AntiDiagonal) {
                        tn.flip_label(drop);
                        ++st.anti_diagonal;
                    } else {
                        ++st.diagonal;
                    }
                    tn.rename_label(drop, keep);
                    again = changed = true;
                }
            }
            if (again) break;
        }
    }
    return changed;
}

std::size_t labels_size(const TensorNetwork &tn, const std::vector<Label> &ls) {
    std::size_t s = 1;
    for (Label l : ls) s *= tn.dim(l);
    return s;
}

bool rank_pass(TensorNetwork &tn, SimplifyStats &st) {
    bool changed = false;
    while (true) {
        const auto inc = tn.incidence();
        struct Cand {
            std::size_t rank, size;
            int a, b;
        };
        std::optional<Cand> best;
        std::set<std::pair<int, int>> seen;
        for (const auto &[l, nodes] : inc) {
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                for (std::size_t j = i + 1; j < nodes.size(); ++j) {
                    const int a = std::min(nodes[i], nodes[j]);
                    const int b = std::max(nodes[i], nodes[j]);
                    if (!seen.insert({a, b}).second) continue;
                    const auto &la = tn.node(a).labels, &lb = tn.node(b).labels;
                    std::vector<Label> out;
                    auto consider = [&](Label x) {
                        if (std::find(out.begin(), out.end(), x) != out.end()) return;
                        if (tn.is_open(x)) {
                            out.push_back(x);
                            return;
                        }
                        for (int v : inc.at(x)) {
                            if (v != a && v != b) {
                                out.push_back(x);
                                return;
                            }
                        }
                    };
                    for (Label x : la) consider(x);
                    for (Label x : lb) consider(x);
                    if (out.size() > std::max(la.size(), lb.size())) continue;
                    Cand c{out.size(), labels_size(tn, la) + labels_size(tn, lb), a, b};
                    if (!best || std::tie(c.rank, c.size, c.a, c.b) <
                                     std::tie(best->rank, best->size, best->a, best->b)) {
                        best = c;
                    }
                }
            }
        }
        if (!best) break;
        tn.merge(best->a, best->b);
        ++st.merged;
        changed = true;
    }
    return changed;
}

} // namespace

TensorNetwork simplify(TensorNetwork tn, bool enabled, SimplifyStats *stats) {
    SimplifyStats st;
    if (enabled) {
        bool changed = true;
        while (changed) {
            changed = false;
            changed |= squeeze_pass(tn, st);
            changed |= trace_pass(tn, st);
            changed |= diagonal_pass(tn, st);
            changed |= rank_pass(tn, st);
        }
    }
    if (stats) *stats = st;
    return tn;
}

Hypergraph to_hypergraph(const TensorNetwork &tn) {
    Hypergraph h;
    h.n_vertices = static_cast<int>(tn.nodes().size());
    h.vertex_edges.resize(h.n_vertices);
    std::map<int, int> vertex_of;
    for (int v = 0; v < h.n_vertices; ++v) {
        const int id = tn.nodes()[v];
        vertex_of[id] = v;
        h.vertex_nodes.push_back(id);
        const auto &node = tn.node(id);
        if (node.base >= 0) {
            const auto &b = tn.base(node.base);
            h.vertex_names.push_back(b.name.empty() ? std::string(to_string(b.provenance))
                                                    : b.name);
        } else {
            h.vertex_names.push_back("merged" + std::to_string(id));
        }
    }
    std::map<Label, std::vector<int>> pins;
    for (int v = 0; v < h.n_vertices; ++v) {
        for (Label l : tn.node(h.vertex_nodes[v]).labels) pins[l].push_back(v);
    }
    for (Label l : tn.open_labels()) pins[l];
    for (auto &[l, ps] : pins) {
        Hyperedge e;
        e.label = l;
        e.dim = tn.dim(l);
        e.weight = std::log2(static_cast<double>(e.dim));
        e.pins = ps;
        e.open = tn.is_open(l);
        const int id = static_cast<int>(h.edges.size());
        for (int v : ps) h.vertex_edges[v].push_back(id);
        h.edges.push_back(std::move(e));
    }
    return h;
}

std::string to_dot(const Hypergraph &h) {
    std::ostringstream os;
    os << "graph tn {\n  node [shape=circle];\n";
    for (int v = 0; v < h.n_vertices; ++v) {
        os << "  v" << v << " [label=\"" << h.vertex_names[v] << "\"];\n";
    }
    for (std::size_t e = 0; e < h.edges.size(); ++e) {
        const auto &edge = h.edges[e];
        const bool junction = edge.pins.size() > 2 ||
                              (edge.open && edge.pins.size() > 1);
        if (edge.open) {
            os << "  o" << e << " [shape=plaintext,label=\"" << edge.label << "\"];\n";
        }
        if (junction) {
            os << "  e" << e << " [shape=point];\n";
            for (int v : edge.pins) os << "  v" << v << " -- e" << e << ";\n";
            if (edge.open) os << "  e" << e << " -- o" << e << ";\n";
        } else if (edge.pins.size() == 2) {
            os << "  v" << edge.pins[0] << " -- v" << edge.pins[1]
               << " [label=\"" << edge.label << "\"];\n";
        } else if (edge.pins.size() == 1 && edge.open) {
            os << "  v" << edge.pins[0] << " -- o" << e << ";\n";
        }
    }
    os << "}\n";
    return os.str();
}

} // namespace qtn::tn
