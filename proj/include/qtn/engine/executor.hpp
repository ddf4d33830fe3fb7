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
 * Numerical execution of a contraction tree over a tensor network, with
 * index slicing and a reverse sweep for gradients w.r.t. gate angles.
 *
 * The tree's leaves are network nodes; nodes that simplification merged
 * are expanded into their pairwise recipes, so every step is one pairwise
 * contraction or one base tensor. Steps that depend neither on angles nor
 * on sliced indices are contracted once and cached.
 */
#pragma once

#include "qtn/path/contraction_tree.hpp"
#include "qtn/path/slicer.hpp"
#include "qtn/tensor/dense_tensor.hpp"
#include "qtn/tensor/network.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace qtn::engine {

using tn::DenseTensor;
using tn::Label;

struct ExecutorOptions {
    /// Largest |lhs| + |rhs| + |out| of one pair, in elements.
    double memory_budget = 3.0 * 268435456.0;
    bool contract_parallel = false;
    int workers = 1;
};

/// Forward values of one evaluation, kept for backward().
struct AdjointTape {
    BoundAngles angles;
    std::vector<DenseTensor> run_values;                ///< slice-independent steps
    std::vector<std::vector<DenseTensor>> slice_values; ///< per slice
};

struct Execution {
    DenseTensor value; ///< axes in the network's open-label order
    std::optional<AdjointTape> tape;
};

class ContractionExecutor {
  public:
    /// `plan` may be null (no slicing). Throws OutOfMemoryBudget when a
    /// pair would exceed the budget.
    ContractionExecutor(tn::TensorNetwork net, const tn::Hypergraph &h,
                        const path::ContractionTree &tree, const path::SlicingPlan *plan,
                        ExecutorOptions opt = {});

    [[nodiscard]] Execution execute(const BoundAngles *angles, bool want_tape) const;

    /// d Re(sum(root_adjoint * value)) / d angle, for every bound angle.
    /// `root_adjoint` has the shape of execute().value.
    [[nodiscard]] std::vector<double> backward(const AdjointTape *tape,
                                               const DenseTensor &root_adjoint) const;

    /// Value and one gradient row per root adjoint, slice by slice without
    /// keeping a tape.
    struct ValueAndGrad {
        DenseTensor value;
        std::vector<std::vector<double>> grads;
    };
    [[nodiscard]] ValueAndGrad value_and_grad(const BoundAngles &angles,
                                              const std::vector<DenseTensor> &root_adjoints) const;

    [[nodiscard]] double n_slices() const { return n_slices_; }
    [[nodiscard]] std::size_t n_steps() const { return steps_.size(); }
    [[nodiscard]] std::size_t n_cached() const;
    /// Largest |lhs| + |rhs| + |out| over all pairs.
    [[nodiscard]] double peak_pair_elements() const { return peak_pair_; }
    /// Largest single tensor, in elements.
    [[nodiscard]] double peak_tensor_elements() const { return peak_tensor_; }
    [[nodiscard]] const tn::TensorNetwork &network() const { return net_; }

  private:
    struct Step {
        int left = -1;
        int right = -1;
        int base = -1;
        std::vector<Label> labels;
        std::vector<std::size_t> shape;
        /// (axis, sliced position) of base axes to fix, by descending axis.
        std::vector<std::pair<int, int>> fixes;
        std::vector<std::size_t> base_shape; ///< before fixing
        bool parametric = false;
        bool sliced = false;
        std::shared_ptr<const tn::PairPlan> pair;
        std::shared_ptr<const tn::PairPlan> adj_left;
        std::shared_ptr<const tn::PairPlan> adj_right;
    };
    struct RunState;
    struct SliceState;

    tn::TensorNetwork net_;
    std::vector<Step> steps_;
    int root_ = -1;
    std::vector<Label> sliced_labels_;
    std::vector<std::size_t> sliced_dims_;
    double n_slices_ = 1;
    std::vector<int> out_perm_;
    std::vector<std::shared_ptr<const DenseTensor>> cache_;
    ExecutorOptions opt_;
    double peak_pair_ = 0;
    double peak_tensor_ = 0;

    int add_node(int node_id);
    int add_pair(int left, int right, std::vector<Label> labels);

    void forward_run(const BoundAngles *angles, RunState &rs) const;
    void forward_slice(const RunState &rs, std::size_t slice, SliceState &ss, bool keep) const;
    [[nodiscard]] const DenseTensor &value_of(const RunState &rs, const SliceState *ss,
                                              int step) const;
    void backward_slice(const RunState &rs, const SliceState &ss, std::size_t slice,
                        const DenseTensor &root_adj, RunState &acc) const;
    void backward_run(const RunState &rs, RunState &acc, const BoundAngles &angles,
                      std::vector<double> &grad) const;
    [[nodiscard]] DenseTensor root_to_output(const DenseTensor &root) const;
    [[nodiscard]] DenseTensor output_to_root(const DenseTensor &adj) const;
};

} // namespace qtn::engine
