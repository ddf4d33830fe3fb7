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
 * Circuit exchange format (schema version 1):
 *
 *     {"version": 1, "n_qubits": int, "n_params": int?,
 *      "init_state": [[re, im], ...]?,
 *      "gates": [{"kind": str, "qubits": [int],
 *                 "params": [{"slot": int, "scale": float?} | float],
 *                 "matrix": [[re, im], ...]?}],
 *      "measurements": [{"kind": "expval", "pauli": "ZI..", "coeff": float?}
 *                       | {"kind": "probs", "qubits": [int]}
 *                       | {"kind": "state"}]}
 *
 * `n_params` defaults to one past the largest referenced slot. `matrix` is
 * only read for "Unitary" gates.
 */
#pragma once

#include "qtn/circuit/circuit.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

namespace qtn {

nlohmann::json circuit_to_json(const Circuit &circuit);

/// Throws Error(SchemaViolation) naming the offending JSON pointer.
Circuit circuit_from_json(const nlohmann::json &doc);

std::string serialize_circuit(const Circuit &circuit);
Circuit parse_circuit(std::string_view text);

/// Schema problems without throwing, as (pointer, message) pairs.
std::vector<std::pair<std::string, std::string>>
validate_circuit_json(const nlohmann::json &doc);

} // namespace qtn
