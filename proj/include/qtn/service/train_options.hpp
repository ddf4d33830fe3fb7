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
 * Training-run options as JSON (HTTP bodies) on top of the per-task defaults.
 * Keys: n_qubits (or n), depth, ansatz, optimizer, learning_rate (or lr),
 * final_learning_rate, iterations (or epochs), grad_method, mode, seed,
 * init_scale, hamiltonian (Pauli-sum text), workers, and for mbl:
 * qnn_depth, n_train, n_test, t_d, g, block_time.
 */
#pragma once

#include "qtn/vqa/tasks.hpp"

#include <nlohmann/json.hpp>

namespace qtn::service {

/// Throws SchemaViolation, UnknownTask, HamiltonianParseError.
vqa::TrainConfig train_config_from_json(std::string_view task, const nlohmann::json &options);

} // namespace qtn::service
