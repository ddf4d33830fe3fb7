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
#include "qtn/path/partitioner.hpp"
#include "qtn/path/slicer.hpp"
#include "qtn/statevector/state_vector.hpp"
#include "qtn/tensor/network.hpp"

#include "corpus.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace qtn;
using namespace qtn::tn;
using engine::ContractionExecutor;

namespace {

struct Compiled {
    TensorNetwork net;
    Hypergraph h;
    path::ContractionTree tree;
};

Compiled compile(const Circuit &c, std::size_t m) {
    Compiled out;
    out.net = simplify(circuit_to_network(c, m));
    out.h = to_hypergraph(out.net);
    path::PartitionerConfig cfg;
    cfg.max_repeats = 16;
    out.tree = path::search(out.h, cfg).tree;
    return out;
}

Circuit fig2_circuit() {
    return Circuit::build(2,
                          {make_gate(GateKind::X, {0}),
                           make_gate(GateKind::RY, {1}, {ParamRef{0}}),
                           make_gate(GateKind::CNOT, {0, 1})},
                          {expval({"IZ"})}, 1);
}

DenseTensor scalar_one() { return DenseTensor::scalar(1.0); }

} // namespace

TEST_CASE("worked example value and derivative") {
    const auto c = fig2_circuit();
    const auto k = compile(c, 0);
    ContractionExecutor ex(k.net, k.h, k.tree, nullptr);
    for (double theta : {1.3, 1.1, -0.4}) {
        const std::vector<double> p{theta};
        const auto angles = c.bind(p);
        const auto run = ex.execute(&angles, true);
        CHECK(std::abs(run.value.values[0] - cplx(-std::cos(theta))) < 1e-12);
        const auto g = ex.backward(&*run.tape, scalar_one());
        REQUIRE(g.size() == 1);
        CHECK(std::abs(g[0] - std::sin(theta)) < 1e-12);
        const auto vg = ex.value_and_grad(angles, {scalar_one()});
        CHECK(std::abs(vg.grads[0][0] - std::sin(theta)) < 1e-12);
    }
    CHECK_THROWS_AS(ex.backward(nullptr, scalar_one()), Error);
    try {
        (void)ex.backward(nullptr, scalar_one());
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::TapeMissing);
    }
}

TEST_CASE("executor matches the state vector on random circuits") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 12; ++t) {
        testing::RandomCircuitOptions opt;
        opt.n_qubits = 3 + t % 10;
        opt.depth = 20;
        opt.n_expvals = 2;
        opt.with_probs = true;
        auto rc = testing::random_circuit(rng, opt);
        const auto angles = rc.circuit.bind(rc.params);
        sv::StateVectorEngine sve(rc.circuit);
        const auto ref = sve.run(angles, false).results;
        for (std::size_t m = 0; m < rc.circuit.measurements().size(); ++m) {
            const auto k = compile(rc.circuit, m);
            ContractionExecutor ex(k.net, k.h, k.tree, nullptr);
            const auto v = ex.execute(&angles, false).value;
            REQUIRE(v.values.size() == ref[m].values.size());
            for (std::size_t i = 0; i < v.values.size(); ++i) {
                CHECK(std::abs(v.values[i] - cplx(ref[m].values[i])) < 1e-8);
            }
        }
    }
}

TEST_CASE("executor gradient matches the adjoint state-vector Jacobian") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 10; ++t) {
        testing::RandomCircuitOptions opt;
        opt.n_qubits = 2 + t % 7;
        opt.depth = 16;
        opt.n_expvals = 1;
        auto rc = testing::random_circuit(rng, opt);
        const auto angles = rc.circuit.bind(rc.params);
        const auto jac = sv::StateVectorEngine(rc.circuit).angle_jacobian(angles);
        const auto k = compile(rc.circuit, 0);
        ContractionExecutor ex(k.net, k.h, k.tree, nullptr);
        const auto vg = ex.value_and_grad(angles, {scalar_one()});
        REQUIRE(vg.grads[0].size() == jac.cols);
        for (std::size_t a = 0; a < jac.cols; ++a) {
            CHECK(std::abs(vg.grads[0][a] - jac(0, a)) < 1e-10);
        }
        const auto run = ex.execute(&angles, true);
        const auto g = ex.backward(&*run.tape, scalar_one());
        for (std::size_t a = 0; a < jac.cols; ++a) CHECK(std::abs(g[a] - jac(0, a)) < 1e-10);
    }
}

TEST_CASE("sliced execution: value, gradient and determinism") {
    std::mt19937_64 rng(44);
    int done = 0;
    for (int t = 0; done < 8; ++t) {
        testing::RandomCircuitOptions opt;
        opt.n_qubits = 6;
        opt.depth = 24;
        opt.with_probs = t % 2 == 0;
        auto rc = testing::random_circuit(rng, opt);
        const auto angles = rc.circuit.bind(rc.params);
        const std::size_t m = rc.circuit.measurements().size() - 1;
        const auto k = compile(rc.circuit, m);
        ContractionExecutor plain(k.net, k.h, k.tree, nullptr);
        path::SlicingConfig cfg;
        cfg.target_size = std::max(4.0, std::exp2(std::ceil(k.tree.width()) - 2));
        cfg.target_num_slices = 4;
        if (k.h.n_vertices < 4) continue;
        path::SlicingPlan plan;
        try {
            plan = path::greedy_slice(k.h, k.tree, cfg, 1);
        } catch (const Error &e) {
            // open output indices alone exceed the target
            REQUIRE(e.code() == ErrorCode::Unsliceable);
            continue;
        }
        REQUIRE(plan.n_slices >= 4);
        ++done;
        ContractionExecutor sliced(k.net, k.h, k.tree, &plan);
        engine::ExecutorOptions par;
        par.contract_parallel = true;
        par.workers = 3;
        ContractionExecutor parallel(k.net, k.h, k.tree, &plan, par);

        const auto a = plain.execute(&angles, false).value;
        const auto b = sliced.execute(&angles, false).value;
        const auto c1 = parallel.execute(&angles, false).value;
        const auto c2 = parallel.execute(&angles, false).value;
        CHECK(testing::max_abs_diff(a.values, b.values) < 1e-12);
        CHECK(testing::max_abs_diff(a.values, c1.values) < 1e-12);
        CHECK(c1.values == c2.values);

        // gradient of the first output entry
        DenseTensor adj(a.shape);
        adj.values[0] = 1.0;
        const auto ga = plain.value_and_grad(angles, {adj}).grads[0];
        const auto gb = sliced.value_and_grad(angles, {adj}).grads[0];
        const auto gc = parallel.value_and_grad(angles, {adj}).grads[0];
        const auto run = sliced.execute(&angles, true);
        const auto gd = sliced.backward(&*run.tape, adj);
        for (std::size_t i = 0; i < ga.size(); ++i) {
            CHECK(std::abs(ga[i] - gb[i]) < 1e-10);
            CHECK(std::abs(ga[i] - gc[i]) < 1e-10);
            CHECK(std::abs(ga[i] - gd[i]) < 1e-10);
        }
        // tape from an unsliced run does not fit a sliced executor
        const auto plain_run = plain.execute(&angles, true);
        CHECK_THROWS_AS(sliced.backward(&*plain_run.tape, adj), Error);
    }
}

TEST_CASE("constant subtrees are cached and unused angles get zero gradient") {
    // the RX on qubit 1 is outside the light cone of Z0 but still in the network
    const auto c = Circuit::build(
        2,
        {make_gate(GateKind::H, {0}), make_gate(GateKind::RZ, {0}, {ParamRef{0}}),
         make_gate(GateKind::H, {1}), make_gate(GateKind::T, {1}),
         make_gate(GateKind::RX, {1}, {ParamRef{1}})},
        {expval({"XI"})}, 3);
    const auto k = compile(c, 0);
    ContractionExecutor ex(k.net, k.h, k.tree, nullptr);
    const std::vector<double> p{0.7, 0.3, 9.0};
    const auto angles = c.bind(p);
    const auto vg = ex.value_and_grad(angles, {scalar_one()});
    CHECK(std::abs(vg.value.values[0] - cplx(std::cos(0.7))) < 1e-12);
    CHECK(std::abs(vg.grads[0][0] + std::sin(0.7)) < 1e-12);
    CHECK(std::abs(vg.grads[0][1]) < 1e-12);
}

TEST_CASE("memory budget is enforced before allocation") {
    std::mt19937_64 rng(5);
    const auto net = testing::random_hyper_network(rng, 8);
    const auto h = to_hypergraph(net);
    const auto tree = path::greedy_baseline(h);
    engine::ExecutorOptions opt;
    opt.memory_budget = 4;
    try {
        ContractionExecutor ex(net, h, tree, nullptr, opt);
        FAIL("expected OutOfMemoryBudget");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::OutOfMemoryBudget);
    }
    ContractionExecutor ok(net, h, tree, nullptr);
    CHECK(ok.peak_pair_elements() <= 3 * std::exp2(tree.width()));
}
