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
 * Report builders behind `qtn simulate`, `qtn paths` and the HTTP API.
 */
#pragma once

#include "qtn/circuit/circuit.hpp"
#include "qtn/circuit/result.hpp"
#include "qtn/service/run_config.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>
#include <vector>

namespace qtn::service {

nlohmann::json result_to_json(const MeasurementResult &r);

/// One line per measurement, values separated by spaces.
std::string format_results(const std::vector<MeasurementResult> &results);

/// {"results", "mode", "wall_ms", "path_stats"?}; in addition, "expval",
/// "probs" and "state" shortcuts hold the first result of each kind.
nlohmann::json simulate_report(const Circuit &circuit, std::span<const double> params,
                               const RunConfig &cfg);

/// Cost of both modes without contracting anything, plus a recommendation.
nlohmann::json paths_report(const Circuit &circuit, const RunConfig &cfg);

/// FNV-1a of the report with timing fields (*_ms) removed.
std::string report_hash(const nlohmann::json &report);

} // namespace qtn::service
