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
 * Run configuration shared by the CLI and the HTTP service. The file form
 * is TOML with the option names of the Python front end:
 *
 *     mode = "tn"                # "sv" | "tn"
 *     grad_method = "adjoint"    # "adjoint" | "param-shift" | "finite-diff" | "none"
 *     seed = 0
 *     output = "report.json"
 *     tn_simplify = true
 *
 *     [hyper_opts]
 *     max_time = 120
 *     max_repeats = 128
 *     search_parallel = 8
 *
 *     [hyper_opts.slicing_opts]  # a top-level [slicing_opts] table also works
 *     target_size = 268435456
 *     repeats = 512
 *     target_num_slices = 4      # omit for none
 *     contract_parallel = true
 *
 * The JSON form uses the same keys and nesting.
 */
#pragma once

#include "qtn/engine/compiled_circuit.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qtn::service {

struct RunConfig {
    ExecutionMode mode = ExecutionMode::StateVector;
    GradMethod grad = GradMethod::Adjoint;
    TnOptions tn;
    std::uint64_t seed = 0;
    std::optional<std::string> output;

    /// Overrides the fields present in `doc`. Throws SchemaViolation.
    void apply_json(const nlohmann::json &doc);
    /// Throws SchemaViolation (syntax errors, wrong types, unknown keys).
    void apply_toml(std::string_view text);
    void apply_toml_file(const std::string &path);

    /// Tensor-network options with the seed applied.
    [[nodiscard]] TnOptions tn_options() const;

    [[nodiscard]] nlohmann::json to_json() const;
};

} // namespace qtn::service
