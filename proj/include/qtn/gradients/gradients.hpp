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
 * Jacobians of a compiled circuit's expectation values with respect to its
 * input parameters. Rows are measurements, columns parameter slots.
 */
#pragma once

#include "qtn/circuit/result.hpp"
#include "qtn/engine/compiled_circuit.hpp"

#include <map>
#include <numbers>
#include <span>

namespace qtn {

struct ShiftRule {
    double shift = std::numbers::pi / 2; ///< s
    double k = 0.5;
};

struct GradientConfig {
    GradMethod method = GradMethod::Adjoint;
    ShiftRule rule;
    std::map<GateKind, ShiftRule> rule_overrides;
    double fd_step = 1e-5; ///< central difference half-width
    unsigned workers = 1;  ///< for the shifted / perturbed evaluations

    /// Throws InvalidArgument.
    void validate() const;
};

Jacobian grad_param_shift(const CompiledCircuit &cc, std::span<const double> params,
                          const GradientConfig &cfg = {});
Jacobian grad_finite_diff(const CompiledCircuit &cc, std::span<const double> params,
                          const GradientConfig &cfg = {});
Jacobian grad_adjoint(const CompiledCircuit &cc, std::span<const double> params);

/// Dispatch on cfg.method (GradMethod::None throws InvalidArgument).
Jacobian jacobian(const CompiledCircuit &cc, std::span<const double> params,
                  const GradientConfig &cfg);

/// Results and Jacobian together. The adjoint method reuses its forward pass
/// for the values; the others add one plain evaluation.
struct ValueAndJacobian {
    std::vector<MeasurementResult> results;
    Jacobian jacobian;
};
ValueAndJacobian value_and_jacobian(const CompiledCircuit &cc, std::span<const double> params,
                                    const GradientConfig &cfg);

/// Folds a Jacobian over bound angles into one over parameter slots.
Jacobian chain_to_params(const Circuit &circuit, const Jacobian &angle_jac);

} // namespace qtn
