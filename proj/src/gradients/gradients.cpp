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
#include "qtn/gradients/gradients.hpp"

#include "qtn/error.hpp"
#include "qtn/util/thread_pool.hpp"

#include <cmath>

namespace qtn {

namespace {

void require_expectations(const Circuit &c) {
    for (std::size_t m = 0; m < c.measurements().size(); ++m) {
        if (c.measurements()[m].kind != MeasurementKind::Expectation) {
            throw Error(ErrorCode::NonExpectationMeasurement,
                        "measurement " + std::to_string(m) + " is not an expectation");
        }
    }
}

std::vector<double> scalars(const std::vector<MeasurementResult> &r) {
    std::vector<double> out;
    out.reserve(r.size());
    for (const auto &x : r) out.push_back(x.scalar());
    return out;
}

} // namespace

void GradientConfig::validate() const {
    auto check_rule = [](const ShiftRule &r) {
        if (!(r.shift > 0) || !std::isfinite(r.shift) || !std::isfinite(r.k)) {
            throw Error(ErrorCode::InvalidArgument, "shift must be > 0 and k finite");
        }
    };
    check_rule(rule);
    for (const auto &[kind, r] : rule_overrides) check_rule(r);
    if (!(fd_step > 0) || !std::isfinite(fd_step)) {
        throw Error(ErrorCode::InvalidArgument, "fd_step must be > 0");
    }
    if (workers < 1) throw Error(ErrorCode::InvalidArgument, "workers must be >= 1");
}

Jacobian chain_to_params(const Circuit &circuit, const Jacobian &angle_jac) {
    Jacobian out(angle_jac.rows, circuit.param_count());
    for (const auto &use : circuit.param_uses()) {
        for (std::size_t m = 0; m < angle_jac.rows; ++m) {
            out(m, use.slot) += use.scale * angle_jac(m, use.angle_index);
        }
    }
    return out;
}

// The rule is applied per ParamUse on the bound angle it drives, then chained
// through the use's scale. For a slot used once at scale 1 this is exactly
// the textbook shift of the input parameter.
Jacobian grad_param_shift(const CompiledCircuit &cc, std::span<const double> params,
                          const GradientConfig &cfg) {
    cfg.validate();
    const auto &c = cc.circuit();
    require_expectations(c);
    const auto base = c.bind(params);
    const auto &uses = c.param_uses();
    std::vector<ShiftRule> rules(uses.size());
    for (std::size_t u = 0; u < uses.size(); ++u) {
        const auto kind = c.gates()[uses[u].gate].kind;
        if (gate_info(kind).generator_eigenvalues == 4) {
            throw Error(ErrorCode::FourTermGateUnsupported,
                        std::string(gate_info(kind).name) +
                            " has a four-eigenvalue generator; use adjoint or finite differences");
        }
        const auto it = cfg.rule_overrides.find(kind);
        rules[u] = it == cfg.rule_overrides.end() ? cfg.rule : it->second;
    }
    const std::size_t n_meas = c.measurements().size();
    std::vector<std::vector<double>> diff(uses.size());
    util::parallel_for(uses.size(), cfg.workers, [&](std::size_t u) {
        auto plus = base;
        auto minus = base;
        plus.values[uses[u].angle_index] += rules[u].shift;
        minus.values[uses[u].angle_index] -= rules[u].shift;
        const auto fp = scalars(cc.evaluate_angles(plus));
        const auto fm = scalars(cc.evaluate_angles(minus));
        diff[u].resize(n_meas);
        for (std::size_t m = 0; m < n_meas; ++m) diff[u][m] = rules[u].k * (fp[m] - fm[m]);
    });
    // reduce in use order so the result does not depend on scheduling
    Jacobian out(n_meas, c.param_count());
    for (std::size_t u = 0; u < uses.size(); ++u) {
        for (std::size_t m = 0; m < n_meas; ++m) out(m, uses[u].slot) += uses[u].scale * diff[u][m];
    }
    return out;
}

Jacobian grad_finite_diff(const CompiledCircuit &cc, std::span<const double> params,
                          const GradientConfig &cfg) {
    cfg.validate();
    const auto &c = cc.circuit();
    require_expectations(c);
    if (params.size() != c.param_count()) {
        (void)c.bind(params); // throws ParamLengthMismatch
    }
    const std::size_t n_meas = c.measurements().size();
    const std::size_t P = params.size();
    const double h = cfg.fd_step;
    Jacobian out(n_meas, P);
    util::parallel_for(P, cfg.workers, [&](std::size_t j) {
        std::vector<double> p(params.begin(), params.end());
        p[j] = params[j] + h;
        const auto fp = scalars(cc.evaluate(p));
        p[j] = params[j] - h;
        const auto fm = scalars(cc.evaluate(p));
        for (std::size_t m = 0; m < n_meas; ++m) out(m, j) = (fp[m] - fm[m]) / (2 * h);
    });
    return out;
}

Jacobian grad_adjoint(const CompiledCircuit &cc, std::span<const double> params) {
    const auto &c = cc.circuit();
    return chain_to_params(c, cc.adjoint_angles(c.bind(params)).angles);
}

Jacobian jacobian(const CompiledCircuit &cc, std::span<const double> params,
                  const GradientConfig &cfg) {
    switch (cfg.method) {
    case GradMethod::Adjoint:
        return grad_adjoint(cc, params);
    case GradMethod::ParamShift:
        return grad_param_shift(cc, params, cfg);
    case GradMethod::FiniteDiff:
        return grad_finite_diff(cc, params, cfg);
    case GradMethod::None:
        break;
    }
    throw Error(ErrorCode::InvalidArgument, "no gradient method selected");
}

ValueAndJacobian value_and_jacobian(const CompiledCircuit &cc, std::span<const double> params,
                                    const GradientConfig &cfg) {
    if (cfg.method == GradMethod::Adjoint) {
        const auto &c = cc.circuit();
        auto ag = cc.adjoint_angles(c.bind(params));
        return {std::move(ag.results), chain_to_params(c, ag.angles)};
    }
    auto results = cc.evaluate(params);
    return {std::move(results), jacobian(cc, params, cfg)};
}

} // namespace qtn
