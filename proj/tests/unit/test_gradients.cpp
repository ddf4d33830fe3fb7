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
#include "qtn/gradients/gradients.hpp"

#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace qtn;

namespace {

Circuit rx_circuit() {
    return Circuit::build(1, {make_gate(GateKind::RX, {0}, {ParamRef{0}})}, {expval({"Z"})}, 1);
}

Circuit fig2_circuit() {
    return Circuit::build(2,
                          {make_gate(GateKind::X, {0}), make_gate(GateKind::RY, {1}, {ParamRef{0}}),
                           make_gate(GateKind::CNOT, {0, 1})},
                          {expval({"IZ"})}, 1);
}

double max_gap(const Jacobian &a, const Jacobian &b) {
    REQUIRE(a.rows == b.rows);
    REQUIRE(a.cols == b.cols);
    double g = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) g = std::max(g, std::abs(a.data[i] - b.data[i]));
    return g;
}

GradientConfig with(GradMethod m) {
    GradientConfig cfg;
    cfg.method = m;
    return cfg;
}

} // namespace

TEST_CASE("RX closed form under every method") {
    for (auto mode : {ExecutionMode::StateVector, ExecutionMode::TensorNetwork}) {
        const auto cc = CompiledCircuit::compile(rx_circuit(), mode);
        for (double theta : {0.7, 0.0}) {
            const std::vector<double> p{theta};
            const double want = -std::sin(theta);
            CHECK(std::abs(grad_param_shift(cc, p)(0, 0) - want) < 1e-12);
            CHECK(std::abs(grad_adjoint(cc, p)(0, 0) - want) < 1e-12);
            CHECK(std::abs(grad_finite_diff(cc, p)(0, 0) - want) < 1e-6);
        }
    }
}

TEST_CASE("worked example derivative is sin(theta)") {
    for (auto mode : {ExecutionMode::StateVector, ExecutionMode::TensorNetwork}) {
        const auto cc = CompiledCircuit::compile(fig2_circuit(), mode);
        const std::vector<double> p{1.1};
        CHECK(std::abs(grad_param_shift(cc, p)(0, 0) - std::sin(1.1)) < 1e-12);
        CHECK(std::abs(grad_adjoint(cc, p)(0, 0) - std::sin(1.1)) < 1e-12);
        CHECK(std::abs(cc.evaluate(p)[0].scalar() + std::cos(1.1)) < 1e-12);
    }
}

TEST_CASE("three methods agree on random circuits") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        qtn::testing::RandomCircuitOptions opt;
        opt.n_qubits = 1 + trial % 5;
        opt.depth = 12;
        opt.controlled_rotations = false;
        opt.shared_slots = trial % 2 == 1;
        opt.n_expvals = 2;
        auto rc = qtn::testing::random_circuit(rng, opt);
        const auto mode = trial % 3 == 0 ? ExecutionMode::TensorNetwork : ExecutionMode::StateVector;
        const auto cc = CompiledCircuit::compile(rc.circuit, mode);
        const auto ps = grad_param_shift(cc, rc.params);
        CHECK(max_gap(grad_adjoint(cc, rc.params), ps) < 1e-10);
        CHECK(max_gap(grad_finite_diff(cc, rc.params), ps) < 1e-5);
    }
}

TEST_CASE("ten-qubit forty-gate circuit: adjoint matches param-shift") {
    std::mt19937_64 rng(5);
    qtn::testing::RandomCircuitOptions opt;
    opt.n_qubits = 10;
    opt.depth = 40;
    opt.controlled_rotations = false;
    auto rc = qtn::testing::random_circuit(rng, opt);
    REQUIRE(rc.params.size() > 10);
    const auto cc = CompiledCircuit::compile(rc.circuit, ExecutionMode::StateVector);
    CHECK(max_gap(grad_adjoint(cc, rc.params), grad_param_shift(cc, rc.params)) < 1e-10);
}

TEST_CASE("evaluation budget") {
    std::mt19937_64 rng(3);
    qtn::testing::RandomCircuitOptions opt;
    opt.n_qubits = 3;
    opt.depth = 10;
    opt.controlled_rotations = false;
    auto rc = qtn::testing::random_circuit(rng, opt);
    const std::size_t P = rc.params.size();
    REQUIRE(P == rc.circuit.param_uses().size());

    const auto cc = CompiledCircuit::compile(rc.circuit, ExecutionMode::StateVector);
    (void)grad_param_shift(cc, rc.params);
    CHECK(cc.evaluations() == 2 * P);
    (void)grad_finite_diff(cc, rc.params);
    CHECK(cc.evaluations() == 4 * P);
    (void)grad_adjoint(cc, rc.params);
    CHECK(cc.evaluations() == 4 * P + 1);
}

TEST_CASE("linearity through a scaled observable") {
    std::mt19937_64 rng(21);
    qtn::testing::RandomCircuitOptions opt;
    opt.n_qubits = 3;
    opt.depth = 10;
    opt.controlled_rotations = false;
    auto rc = qtn::testing::random_circuit(rng, opt);
    auto meas = rc.circuit.measurements();
    const double c = -2.5;
    meas[0].observable.coeff *= c;
    const auto scaled = Circuit::build(3, rc.circuit.gates(), meas, rc.circuit.param_count());
    for (auto m : {GradMethod::Adjoint, GradMethod::ParamShift, GradMethod::FiniteDiff}) {
        const auto a = jacobian(CompiledCircuit::compile(rc.circuit, ExecutionMode::StateVector),
                                rc.params, with(m));
        const auto b = jacobian(CompiledCircuit::compile(scaled, ExecutionMode::StateVector),
                                rc.params, with(m));
        for (std::size_t j = 0; j < a.cols; ++j) CHECK(std::abs(c * a(0, j) - b(0, j)) < 1e-9);
    }
}

TEST_CASE("unused slots and constant circuits give zero columns") {
    const auto c = Circuit::build(1, {make_gate(GateKind::RY, {0}, {ParamRef{1}})}, {expval({"Z"})}, 3);
    const auto cc = CompiledCircuit::compile(c, ExecutionMode::StateVector);
    const std::vector<double> p{0.3, 0.4, 0.5};
    for (auto m : {GradMethod::Adjoint, GradMethod::ParamShift, GradMethod::FiniteDiff}) {
        const auto j = jacobian(cc, p, with(m));
        CHECK(j(0, 0) == 0.0);
        CHECK(j(0, 2) == 0.0);
        CHECK(std::abs(j(0, 1) + std::sin(0.4)) < 1e-6);
    }
    const auto constant = CompiledCircuit::compile(
        Circuit::build(1, {make_gate(GateKind::H, {0})}, {expval({"X"})}, 0), ExecutionMode::StateVector);
    CHECK(grad_finite_diff(constant, {}).cols == 0);
    CHECK(grad_adjoint(constant, {}).rows == 1);
}

TEST_CASE("shared slots with scales chain correctly") {
    // RY(2t) then RY(-0.5 t): <Z> = cos(1.5 t)
    const auto c = Circuit::build(1,
                                  {make_gate(GateKind::RY, {0}, {ParamRef{0, 2.0}}),
                                   make_gate(GateKind::RY, {0}, {ParamRef{0, -0.5}})},
                                  {expval({"Z"})}, 1);
    const auto cc = CompiledCircuit::compile(c, ExecutionMode::StateVector);
    const std::vector<double> p{0.8};
    const double want = -1.5 * std::sin(1.5 * 0.8);
    CHECK(std::abs(grad_param_shift(cc, p)(0, 0) - want) < 1e-12);
    CHECK(std::abs(grad_adjoint(cc, p)(0, 0) - want) < 1e-12);
}

TEST_CASE("errors") {
    const auto crx = Circuit::build(2, {make_gate(GateKind::CRX, {0, 1}, {ParamRef{0}})},
                                    {expval({"ZZ"})}, 1);
    const auto cc = CompiledCircuit::compile(crx, ExecutionMode::StateVector);
    const std::vector<double> p{0.2};
    CHECK_THROWS_MATCHES(grad_param_shift(cc, p), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &e) {
                             return e.code() == ErrorCode::FourTermGateUnsupported;
                         }));
    // adjoint and finite differences still handle it
    CHECK(max_gap(grad_adjoint(cc, p), grad_finite_diff(cc, p)) < 1e-6);

    const auto pr = Circuit::build(1, {make_gate(GateKind::RX, {0}, {ParamRef{0}})}, {probs({0})}, 1);
    const auto ccp = CompiledCircuit::compile(pr, ExecutionMode::StateVector);
    for (auto m : {GradMethod::Adjoint, GradMethod::ParamShift, GradMethod::FiniteDiff}) {
        CHECK_THROWS_MATCHES(jacobian(ccp, p, with(m)), Error,
                             Catch::Matchers::Predicate<Error>([](const Error &e) {
                                 return e.code() == ErrorCode::NonExpectationMeasurement;
                             }));
    }
    GradientConfig bad;
    bad.rule.shift = 0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = {};
    bad.fd_step = -1;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("worker count does not change the Jacobian") {
    std::mt19937_64 rng(8);
    qtn::testing::RandomCircuitOptions opt;
    opt.n_qubits = 4;
    opt.depth = 16;
    opt.controlled_rotations = false;
    opt.shared_slots = true;
    auto rc = qtn::testing::random_circuit(rng, opt);
    const auto cc = CompiledCircuit::compile(rc.circuit, ExecutionMode::StateVector);
    auto cfg = with(GradMethod::ParamShift);
    const auto serial = jacobian(cc, rc.params, cfg);
    cfg.workers = 4;
    CHECK(jacobian(cc, rc.params, cfg).data == serial.data);
    cfg.method = GradMethod::FiniteDiff;
    const auto fd4 = jacobian(cc, rc.params, cfg);
    cfg.workers = 1;
    CHECK(jacobian(cc, rc.params, cfg).data == fd4.data);
}
