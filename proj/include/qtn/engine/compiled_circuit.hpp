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
 * A circuit bound to an execution mode. Tensor-network compilation runs
 * network construction, simplification, path search and slicing once; every
 * evaluation reuses the stored plan.
 */
#pragma once

#include "qtn/circuit/circuit.hpp"
#include "qtn/circuit/result.hpp"
#include "qtn/engine/executor.hpp"
#include "qtn/path/partitioner.hpp"
#include "qtn/path/slicer.hpp"
#include "qtn/statevector/state_vector.hpp"
#include "qtn/tensor/network.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace qtn {

enum class ExecutionMode { StateVector, TensorNetwork };
enum class GradMethod { Adjoint, ParamShift, FiniteDiff, None };

std::string_view to_string(ExecutionMode m);
std::string_view to_string(GradMethod g);
std::optional<ExecutionMode> mode_from_name(std::string_view s);
std::optional<GradMethod> grad_method_from_name(std::string_view s);

struct TnOptions {
    path::PartitionerConfig path;
    path::SlicingConfig slicing;
    engine::ExecutorOptions executor;
    bool simplify = true; ///< tn_simplify
};

/// Compiled form of one measurement's network.
struct TnProgram {
    std::size_t measurement = 0;
    int nodes_before_simplify = 0;
    tn::SimplifyStats simplify_stats;
    tn::Hypergraph hypergraph;
    path::ContractionTree tree;
    path::SlicingPlan plan;
    std::shared_ptr<const engine::ContractionExecutor> executor;
    double search_ms = 0;

    [[nodiscard]] nlohmann::json stats() const;
};

class CompiledCircuit {
  public:
    /// Throws UnsupportedMeasurementForMode (state output in TN mode),
    /// TooManyQubits (SV mode), PathSearchTimeout. `tn` must be empty in
    /// state-vector mode; TN mode uses defaults when it is empty.
    static CompiledCircuit compile(Circuit circuit, ExecutionMode mode,
                                   GradMethod grad = GradMethod::Adjoint,
                                   std::optional<TnOptions> tn = std::nullopt);

    /// One result per measurement. Throws ParamLengthMismatch.
    [[nodiscard]] std::vector<MeasurementResult> evaluate(std::span<const double> params) const;
    /// Same, from already bound gate angles.
    [[nodiscard]] std::vector<MeasurementResult> evaluate_angles(const BoundAngles &angles) const;

    struct AngleGradient {
        std::vector<MeasurementResult> results;
        Jacobian angles; ///< measurements x bound angles
    };
    /// Results plus d(expectation)/d(angle) from one forward and one reverse
    /// sweep. Counts as one evaluation. Throws NonExpectationMeasurement.
    [[nodiscard]] AngleGradient adjoint_angles(const BoundAngles &angles) const;

    [[nodiscard]] const Circuit &circuit() const { return impl_->circuit; }
    [[nodiscard]] ExecutionMode mode() const { return impl_->mode; }
    [[nodiscard]] GradMethod grad_method() const { return impl_->grad; }
    [[nodiscard]] std::uint64_t evaluations() const { return impl_->evaluations.load(); }
    [[nodiscard]] std::uint64_t path_searches() const { return impl_->path_searches.load(); }

    [[nodiscard]] const sv::StateVectorEngine *sv_engine() const { return impl_->sv.get(); }
    [[nodiscard]] const std::vector<TnProgram> &tn_programs() const { return impl_->tn; }

  private:
    struct Impl {
        explicit Impl(Circuit c) : circuit(std::move(c)) {}
        Circuit circuit;
        ExecutionMode mode = ExecutionMode::StateVector;
        GradMethod grad = GradMethod::Adjoint;
        std::unique_ptr<sv::StateVectorEngine> sv;
        std::vector<TnProgram> tn;
        mutable std::atomic<std::uint64_t> evaluations{0};
        std::atomic<std::uint64_t> path_searches{0};
    };
    std::shared_ptr<Impl> impl_;
};

} // namespace qtn
