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
#include "qtn/engine/compiled_circuit.hpp"

#include "qtn/error.hpp"

#include <chrono>

namespace qtn {

std::string_view to_string(ExecutionMode m) {
    return m == ExecutionMode::StateVector ? "statevector" : "tensor-network";
}

std::string_view to_string(GradMethod g) {
    switch (g) {
    case GradMethod::Adjoint:
        return "adjoint";
    case GradMethod::ParamShift:
        return "param-shift";
    case GradMethod::FiniteDiff:
        return "finite-diff";
    case GradMethod::None:
        return "none";
    }
    return "none";
}

std::optional<ExecutionMode> mode_from_name(std::string_view s) {
    if (s == "sv" || s == "statevector") return ExecutionMode::StateVector;
    if (s == "tn" || s == "tensor-network" || s == "tensornetwork") {
        return ExecutionMode::TensorNetwork;
    }
    return std::nullopt;
}

std::optional<GradMethod> grad_method_from_name(std::string_view s) {
    if (s == "adjoint" || s == "backprop") return GradMethod::Adjoint;
    if (s == "param-shift" || s == "parameter-shift") return GradMethod::ParamShift;
    if (s == "finite-diff" || s == "fd") return GradMethod::FiniteDiff;
    if (s == "none") return GradMethod::None;
    return std::nullopt;
}

nlohmann::json TnProgram::stats() const {
    return {{"measurement", measurement},
            {"nodes_before_simplify", nodes_before_simplify},
            {"nodes", hypergraph.n_vertices},
            {"width", tree.width()},
            {"total_flops", tree.total_flops()},
            {"sliced_width", plan.tree.width()},
            {"n_slices", plan.n_slices},
            {"slice_flops", plan.slice_flops},
            {"overhead_ratio", plan.overhead_ratio},
            {"sliced_labels", plan.to_json(hypergraph)["sliced_labels"]},
            {"peak_tensor_elements", executor ? executor->peak_tensor_elements() : 0.0}};
}

CompiledCircuit CompiledCircuit::compile(Circuit circuit, ExecutionMode mode, GradMethod grad,
                                         std::optional<TnOptions> tn) {
    CompiledCircuit cc;
    cc.impl_ = std::make_shared<Impl>(std::move(circuit));
    auto &impl = *cc.impl_;
    impl.mode = mode;
    impl.grad = grad;
    if (mode == ExecutionMode::StateVector) {
        if (tn) {
            throw Error(ErrorCode::InvalidArgument,
                        "tensor-network options given for state-vector mode");
        }
        sv::check_qubit_limit(impl.circuit.n_qubits());
        impl.sv = std::make_unique<sv::StateVectorEngine>(impl.circuit);
        return cc;
    }
    const TnOptions opt = tn.value_or(TnOptions{});
    for (std::size_t m = 0; m < impl.circuit.measurements().size(); ++m) {
        TnProgram prog;
        prog.measurement = m;
        auto raw = tn::circuit_to_network(impl.circuit, m);
        prog.nodes_before_simplify = static_cast<int>(raw.nodes().size());
        auto net = tn::simplify(std::move(raw), opt.simplify, &prog.simplify_stats);
        prog.hypergraph = tn::to_hypergraph(net);
        const auto t0 = std::chrono::steady_clock::now();
        auto res = path::two_phase_search(prog.hypergraph, opt.path, opt.slicing);
        impl.path_searches.fetch_add(1);
        prog.search_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
        prog.tree = std::move(res.tree);
        prog.plan = std::move(res.plan);
        auto exec_opt = opt.executor;
        exec_opt.contract_parallel = exec_opt.contract_parallel || opt.slicing.contract_parallel;
        prog.executor = std::make_shared<const engine::ContractionExecutor>(
            std::move(net), prog.hypergraph, prog.tree,
            prog.plan.empty() ? nullptr : &prog.plan, exec_opt);
        impl.tn.push_back(std::move(prog));
    }
    return cc;
}

std::vector<MeasurementResult> CompiledCircuit::evaluate(std::span<const double> params) const {
    return evaluate_angles(impl_->circuit.bind(params));
}

std::vector<MeasurementResult> CompiledCircuit::evaluate_angles(const BoundAngles &angles) const {
    impl_->evaluations.fetch_add(1);
    if (impl_->mode == ExecutionMode::StateVector) {
        return impl_->sv->run(angles, false).results;
    }
    std::vector<MeasurementResult> out;
    for (const auto &prog : impl_->tn) {
        const auto &meas = impl_->circuit.measurements()[prog.measurement];
        const auto v = prog.executor->execute(&angles, false).value;
        MeasurementResult r;
        r.kind = meas.kind;
        r.values.reserve(v.values.size());
        // the imaginary residue of real outputs is dropped
        for (const auto &x : v.values) r.values.push_back(x.real());
        out.push_back(std::move(r));
    }
    return out;
}

CompiledCircuit::AngleGradient CompiledCircuit::adjoint_angles(const BoundAngles &angles) const {
    const auto &meas = impl_->circuit.measurements();
    for (std::size_t m = 0; m < meas.size(); ++m) {
        if (meas[m].kind != MeasurementKind::Expectation) {
            throw Error(ErrorCode::NonExpectationMeasurement,
                        "measurement " + std::to_string(m) + " is not an expectation");
        }
    }
    impl_->evaluations.fetch_add(1);
    AngleGradient out;
    if (impl_->mode == ExecutionMode::StateVector) {
        auto run = impl_->sv->run(angles, true);
        out.angles = impl_->sv->angle_jacobian(angles, *run.tape);
        out.results = std::move(run.results);
        return out;
    }
    out.angles = Jacobian(meas.size(), angles.values.size());
    for (const auto &prog : impl_->tn) {
        const auto vg = prog.executor->value_and_grad(angles, {tn::DenseTensor({}, {cplx{1.0, 0.0}})});
        MeasurementResult r;
        r.kind = MeasurementKind::Expectation;
        r.values = {vg.value.values.at(0).real()};
        out.results.push_back(std::move(r));
        for (std::size_t a = 0; a < vg.grads[0].size(); ++a) {
            out.angles(prog.measurement, a) = vg.grads[0][a];
        }
    }
    return out;
}

} // namespace qtn
