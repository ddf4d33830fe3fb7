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
#include "qtn/circuit/json_io.hpp"
#include "qtn/error.hpp"

#include "test_support.hpp"

#include <catch_amalgamated.hpp>

using namespace qtn;

TEST_CASE("bell circuit serializes to the documented shape") {
    auto c = Circuit::build(
        2, {make_gate(GateKind::H, {0}), make_gate(GateKind::CNOT, {0, 1})},
        {probs({0, 1})}, 0);
    const auto j = circuit_to_json(c);
    CHECK(j["version"] == 1);
    CHECK(j["gates"][0]["kind"] == "H");
    CHECK(j["gates"][1]["qubits"] == nlohmann::json::array({0, 1}));
    CHECK(parse_circuit(serialize_circuit(c)) == c);
}

TEST_CASE("repeated qubits are a schema violation") {
    const char *doc = R"({"version":1,"n_qubits":2,
        "gates":[{"kind":"CNOT","qubits":[0,0]}],
        "measurements":[{"kind":"probs","qubits":[0]}]})";
    try {
        parse_circuit(doc);
        FAIL("expected SchemaViolation");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::SchemaViolation);
        CHECK(std::string(e.what()).find("/gates/0/qubits") != std::string::npos);
    }
    const auto errs = validate_circuit_json(nlohmann::json::parse(doc));
    REQUIRE(errs.size() == 1);
}

TEST_CASE("malformed documents") {
    CHECK_THROWS_AS(parse_circuit("{not json"), Error);
    CHECK_THROWS_AS(parse_circuit(R"({"version":2,"n_qubits":1,"gates":[],"measurements":[{"kind":"state"}]})"),
                    Error);
    CHECK_THROWS_AS(parse_circuit(R"({"version":1,"n_qubits":1,"gates":[{"kind":"FOO","qubits":[0]}],"measurements":[{"kind":"state"}]})"),
                    Error);
    CHECK(validate_circuit_json(nlohmann::json::parse(
              R"({"version":1,"n_qubits":1,"gates":[],"measurements":[{"kind":"expval","pauli":"Z"}]})"))
              .empty());
}

TEST_CASE("rotation circuit with three parameter slots round-trips") {
    auto c = Circuit::build(
        2,
        {make_gate(GateKind::H, {0}), make_gate(GateKind::CNOT, {0, 1}),
         make_gate(GateKind::Rot, {1}, {ParamRef{0}, ParamRef{1}, ParamRef{2}})},
        {state()}, 3);
    const auto back = parse_circuit(serialize_circuit(c));
    CHECK(back == c);
    CHECK(back.param_uses().size() == 3);
}

TEST_CASE("init_state, unitary blocks and scaled refs round-trip") {
    const double r = std::sqrt(0.5);
    auto c = Circuit::build(
        1,
        {make_unitary({0}, {r, r, r, -r}),
         make_gate(GateKind::RZ, {0}, {ParamRef{0, -1.0}})},
        {expval({"X", 0.5})}, 1, std::vector<cplx>{{0, r}, r});
    CHECK(parse_circuit(serialize_circuit(c)) == c);
}

TEST_CASE("round trip on random circuits") {
    std::mt19937_64 rng(123);
    for (int t = 0; t < 1000; ++t) {
        testing::RandomCircuitOptions opt;
        opt.n_qubits = 2 + t % 7;
        opt.depth = t % 31;
        opt.shared_slots = t % 3 == 0;
        opt.n_expvals = 1 + t % 2;
        opt.with_probs = t % 4 == 0;
        const auto rc = testing::random_circuit(rng, opt);
        REQUIRE(parse_circuit(serialize_circuit(rc.circuit)) == rc.circuit);
    }
}
