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
 * Tensor networks over labeled edges, conversion from circuits, structural
 * simplification and the hypergraph view used by the path optimizer.
 *
 * Every original tensor is kept as a BaseTensor: its payload (constant data
 * or a gate matrix recomputed from bound angles) followed by a list of
 * linear index operations recorded by simplification. Network nodes are
 * either one base tensor or a pending pairwise merge of two nodes, so the
 * network stays differentiable with respect to gate angles.
 */
#pragma once

#include "qtn/circuit/circuit.hpp"
#include "qtn/tensor/dense_tensor.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qtn::tn {

enum class Provenance { State, Gate, Observable, Conjugate, Intermediate };

std::string_view to_string(Provenance p);

struct LeafOp {
    enum class Kind {
        Fix,      ///< drop `axis`, keeping entry `value`
        Flip,     ///< reverse the index order of `axis`
        Diagonal, ///< drop `other`, keeping entries where it equals `axis`
        SumOut,   ///< sum over `axis`
    };
    Kind kind;
    int axis = 0;
    int other = 0;
    std::size_t value = 0;
};

/// Applies ops in order; each op's axes refer to the tensor as it is at
/// that point.
DenseTensor apply_ops(DenseTensor t, const std::vector<LeafOp> &ops);

struct BaseTensor {
    Provenance provenance = Provenance::Gate;
    std::string name;
    /// Constant payload; null when the payload is a parametric gate.
    std::shared_ptr<const DenseTensor> data;
    /// Parametric gate (index into the circuit and its kind).
    std::optional<std::size_t> gate;
    GateKind kind = GateKind::I;
    bool conj = false;
    std::vector<std::size_t> base_shape;
    std::vector<Label> base_labels;
    std::vector<LeafOp> ops;
    std::vector<Label> labels; ///< after ops

    [[nodiscard]] bool parametric() const { return gate.has_value(); }
};

struct TensorNode {
    int base = -1;  ///< base tensor index, or -1 for a merge
    int left = -1;  ///< merged child node ids
    int right = -1;
    std::vector<Label> labels;
};

class TensorNetwork {
  public:
    void set_dim(Label l, std::size_t d) { dims_[l] = d; }
    [[nodiscard]] std::size_t dim(Label l) const { return dims_.at(l); }
    [[nodiscard]] const std::map<Label, std::size_t> &dims() const {
        return dims_;
    }
    Label new_label(std::size_t d);

    /// Adds a node holding a constant tensor. Returns the node id.
    int add_tensor(std::shared_ptr<const DenseTensor> data,
                   std::vector<Label> labels, Provenance p,
                   std::string name = {}, bool conj = false);
    int add_tensor(DenseTensor data, std::vector<Label> labels, Provenance p,
                   std::string name = {});
    /// Adds a node whose payload is the matrix of `gate` at bind time.
    int add_gate(std::size_t gate, GateKind kind, std::size_t arity,
                 std::vector<Label> labels, Provenance p, std::string name,
                 bool conj);

    void set_open(std::vector<Label> open) { open_ = std::move(open); }
    [[nodiscard]] const std::vector<Label> &open_labels() const { return open_; }
    [[nodiscard]] bool is_open(Label l) const;

    /// Current nodes in creation order.
    [[nodiscard]] const std::vector<int> &nodes() const { return active_; }
    [[nodiscard]] const TensorNode &node(int id) const { return pool_.at(id); }
    [[nodiscard]] const BaseTensor &base(int i) const { return bases_.at(i); }
    [[nodiscard]] std::size_t base_count() const { return bases_.size(); }
    /// Base tensors reachable from node `id`.
    [[nodiscard]] std::vector<int> bases_of(int id) const;

    /// Active nodes incident to each label.
    [[nodiscard]] std::map<Label, std::vector<int>> incidence() const;

    [[nodiscard]] bool has_parametric(int node) const;

    /// Materializes a base tensor. `angles` is needed for parametric bases;
    /// `derivative` selects d/d(angle j) of the gate payload instead.
    [[nodiscard]] DenseTensor base_tensor(int base, const BoundAngles *angles,
                                          std::optional<int> derivative = {}) const;
    /// Materializes a node (contracting merges recursively).
    [[nodiscard]] DenseTensor node_tensor(int id,
                                          const BoundAngles *angles) const;

    // Mutations used by simplification (labels are global).
    void rename_label(Label from, Label to);
    void flip_label(Label l);
    void fix_label(Label l, std::size_t value);
    void sum_out(int base, Label l);
    /// Replaces nodes a and b by their pending merge.
    int merge(int a, int b);
    /// Recomputes merge-node labels after relabelings.
    void refresh_labels();

  private:
    std::map<Label, std::size_t> dims_;
    Label next_label_ = 0;
    std::vector<BaseTensor> bases_;
    std::vector<TensorNode> pool_;
    std::vector<int> active_;
    std::vector<Label> open_;

    std::vector<Label> merged_labels(int left, int right,
                                     const std::map<Label, int> &total) const;
    std::map<Label, int> base_label_counts() const;
    std::map<Label, int> subtree_label_counts(int id) const;
};

/// Builds the network of measurement `m`. Expectations give the closed
/// ket/observable/bra network; probabilities over k qubits leave k open
/// edges, each shared by the last ket and bra tensor of its qubit.
TensorNetwork circuit_to_network(const Circuit &circuit, std::size_t m);

struct SimplifyStats {
    int squeezed = 0;
    int traced = 0;
    int diagonal = 0;
    int anti_diagonal = 0;
    int merged = 0;
};

/// Squeeze, trace, (anti-)diagonal reduction and rank simplification,
/// repeated to a fixed point. Value-preserving; open edges survive.
TensorNetwork simplify(TensorNetwork tn, bool enabled = true,
                       SimplifyStats *stats = nullptr);

struct Hyperedge {
    Label label;
    std::size_t dim;
    double weight; ///< log2(dim)
    std::vector<int> pins; ///< vertex ids
    bool open;
};

struct Hypergraph {
    int n_vertices = 0;
    std::vector<Hyperedge> edges;
    std::vector<std::vector<int>> vertex_edges;
    std::vector<std::string> vertex_names;
    std::vector<int> vertex_nodes; ///< network node id of each vertex
};

/// Vertices follow the network's node order; edges are sorted by label.
Hypergraph to_hypergraph(const TensorNetwork &tn);

/// Graphviz text; hyperedges with 3+ pins are drawn as junction points.
std::string to_dot(const Hypergraph &h);

} // namespace qtn::tn
