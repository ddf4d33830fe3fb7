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
 * Circuit templates (ansatz layers).
 *
 * Parameter counts:
 *   FullyConnected     2 n (n-1) depth   (ring variant: 2 n depth, n > 2)
 *   HardwareEfficient  2 n (depth + 1)
 *   RandomLayer        number of rotations drawn; fixed by the seed
 */
#pragma once

#include "qtn/circuit/circuit.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace qtn::vqa {

enum class TemplateKind { RandomLayer, FullyConnected, HardwareEfficient };

std::string_view to_string(TemplateKind k);
std::optional<TemplateKind> template_kind_from_name(std::string_view s);

struct TemplateSpec {
    TemplateKind kind = TemplateKind::HardwareEfficient;
    int n_qubits = 1;
    int depth = 1;
    std::uint64_t seed = 0; ///< RandomLayer only
    /// FullyConnected: entangle only (i, i+1 mod n) instead of every ordered pair.
    bool ring = false;

    /// Throws InvalidArgument.
    void validate() const;
};

std::size_t template_param_count(const TemplateSpec &spec);

/// Gates whose angles read params[first_slot + i], i < template_param_count.
std::vector<GateInstance> expand_template(const TemplateSpec &spec, std::size_t first_slot = 0);

/// Same gates with the angles bound to literals. Throws ParamCountMismatch.
std::vector<GateInstance> expand_template(const TemplateSpec &spec,
                                          std::span<const double> params);

} // namespace qtn::vqa
