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
#include "qtn/vqa/templates.hpp"

#include "qtn/error.hpp"

#include <random>

namespace qtn::vqa {

std::string_view to_string(TemplateKind k) {
    switch (k) {
    case TemplateKind::RandomLayer:
        return "random";
    case TemplateKind::FullyConnected:
        return "fully-connected";
    case TemplateKind::HardwareEfficient:
        return "hardware-efficient";
    }
    return "";
}

std::optional<TemplateKind> template_kind_from_name(std::string_view s) {
    if (s == "random" || s == "random-layer") return TemplateKind::RandomLayer;
    if (s == "fully-connected" || s == "fc") return TemplateKind::FullyConnected;
    if (s == "hardware-efficient" || s == "hwe") return TemplateKind::HardwareEfficient;
    return std::nullopt;
}

void TemplateSpec::validate() const {
    if (n_qubits < 1) throw Error(ErrorCode::InvalidArgument, "template needs n_qubits >= 1");
    if (depth < 0) throw Error(ErrorCode::InvalidArgument, "template depth must be >= 0");
}

namespace {

class Emitter {
  public:
    explicit Emitter(std::size_t first) : next_(first) {}

    void rot(GateKind k, int q) { gates.push_back(make_gate(k, {q}, {ParamRef{next_++}})); }
    void cnot(int a, int b) { gates.push_back(make_gate(GateKind::CNOT, {a, b})); }
    [[nodiscard]] std::size_t used(std::size_t first) const { return next_ - first; }

    std::vector<GateInstance> gates;

  private:
    std::size_t next_;
};

std::vector<std::pair<int, int>> fc_pairs(const TemplateSpec &s) {
    std::vector<std::pair<int, int>> out;
    const int n = s.n_qubits;
    if (n < 2) return out;
    if (s.ring) {
        const int m = n == 2 ? 1 : n;
        for (int i = 0; i < m; ++i) out.emplace_back(i, (i + 1) % n);
        return out;
    }
    for (int i = 0; i < n; ++i) {
        for (int d = 1; d < n; ++d) out.emplace_back(i, (i + d) % n);
    }
    return out;
}

Emitter expand(const TemplateSpec &spec, std::size_t first) {
    spec.validate();
    Emitter e(first);
    const int n = spec.n_qubits;
    switch (spec.kind) {
    case TemplateKind::HardwareEfficient:
        for (int l = 0; l <= spec.depth; ++l) {
            if (l > 0) {
                for (int q = 0; q + 1 < n; ++q) e.cnot(q, q + 1);
                if (n > 2) e.cnot(n - 1, 0);
            }
            for (int q = 0; q < n; ++q) e.rot(GateKind::RY, q);
            for (int q = 0; q < n; ++q) e.rot(GateKind::RZ, q);
        }
        break;
    case TemplateKind::FullyConnected: {
        const auto pairs = fc_pairs(spec);
        for (int l = 0; l < spec.depth; ++l) {
            for (auto [i, j] : pairs) {
                e.cnot(i, j);
                e.rot(GateKind::RY, j);
                e.rot(GateKind::RZ, j);
            }
        }
        break;
    }
    case TemplateKind::RandomLayer: {
        std::mt19937_64 rng(spec.seed);
        const int choices = n >= 2 ? 4 : 3;
        std::uniform_int_distribution<int> pick(0, choices - 1);
        std::uniform_int_distribution<int> wire(0, n - 1);
        const GateKind rots[] = {GateKind::RX, GateKind::RY, GateKind::RZ};
        for (int l = 0; l < spec.depth; ++l) {
            for (int g = 0; g < n; ++g) {
                const int c = pick(rng);
                const int a = wire(rng);
                if (c < 3) {
                    e.rot(rots[c], a);
                } else {
                    int b = wire(rng);
                    while (b == a) b = wire(rng);
                    e.cnot(a, b);
                }
            }
        }
        break;
    }
    }
    return e;
}

} // namespace

std::size_t template_param_count(const TemplateSpec &spec) {
    const std::size_t n = spec.n_qubits;
    const std::size_t d = spec.depth;
    switch (spec.kind) {
    case TemplateKind::HardwareEfficient:
        spec.validate();
        return 2 * n * (d + 1);
    case TemplateKind::FullyConnected:
        spec.validate();
        return 2 * fc_pairs(spec).size() * d;
    case TemplateKind::RandomLayer:
        break;
    }
    return expand(spec, 0).used(0);
}

std::vector<GateInstance> expand_template(const TemplateSpec &spec, std::size_t first_slot) {
    return expand(spec, first_slot).gates;
}

std::vector<GateInstance> expand_template(const TemplateSpec &spec,
                                          std::span<const double> params) {
    auto gates = expand_template(spec, 0);
    const auto want = template_param_count(spec);
    if (params.size() != want) {
        throw Error(ErrorCode::ParamCountMismatch,
                    std::string(to_string(spec.kind)) + " template expects " + std::to_string(want) +
                        " parameters, got " + std::to_string(params.size()));
    }
    for (auto &g : gates) {
        for (auto &p : g.params) {
            p = params[std::get<ParamRef>(p).slot];
        }
    }
    return gates;
}

} // namespace qtn::vqa
