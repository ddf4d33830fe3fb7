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
#include "qtn/circuit/circuit.hpp"

#include "qtn/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qtn {

namespace {

constexpr double kNormTolerance = 1e-12;

std::string gate_label(std::size_t index, const GateInstance &g) {
    return "gate " + std::to_string(index) + " (" +
           std::string(gate_info(g.kind).name) + ")";
}

void validate_qubits(const std::vector<int> &qubits, int n_qubits,
                     const std::string &where) {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (qubits[i] < 0 || qubits[i] >= n_qubits) {
            throw Error(ErrorCode::QubitOutOfRange,
                        where + ": qubit " + std::to_string(qubits[i]) +
                            " not in [0, " + std::to_string(n_qubits) + ")");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (qubits[i] == qubits[j]) {
                throw Error(ErrorCode::InvalidArgument,
                            where + ": repeated qubit " +
                                std::to_string(qubits[i]));
            }
        }
    }
}

} // namespace

bool GateInstance::is_parametric() const {
    return std::any_of(params.begin(), params.end(), [](const GateParam &p) {
        return std::holds_alternative<ParamRef>(p);
    });
}

bool operator==(const GateInstance &a, const GateInstance &b) {
    if (a.kind != b.kind || a.qubits != b.qubits || a.params != b.params) {
        return false;
    }
    if (static_cast<bool>(a.matrix) != static_cast<bool>(b.matrix)) {
        return false;
    }
    return !a.matrix || *a.matrix == *b.matrix;
}

GateInstance make_gate(GateKind kind, std::vector<int> qubits,
                       std::vector<GateParam> params) {
    GateInstance g;
    g.kind = kind;
    g.qubits = std::move(qubits);
    g.params = std::move(params);
    return g;
}

GateInstance make_unitary(std::vector<int> qubits, std::vector<cplx> matrix) {
    GateInstance g;
    g.kind = GateKind::Unitary;
    g.qubits = std::move(qubits);
    g.matrix = std::make_shared<const std::vector<cplx>>(std::move(matrix));
    return g;
}

Measurement expval(PauliString observable) {
    Measurement m;
    m.kind = MeasurementKind::Expectation;
    m.observable = std::move(observable);
    return m;
}

Measurement probs(std::vector<int> qubits) {
    Measurement m;
    m.kind = MeasurementKind::Probabilities;
    m.qubits = std::move(qubits);
    return m;
}

Measurement state() {
    Measurement m;
    m.kind = MeasurementKind::State;
    return m;
}

Circuit Circuit::build(int n_qubits, std::vector<GateInstance> gates,
                       std::vector<Measurement> measurements,
                       std::size_t param_count,
                       std::optional<std::vector<cplx>> init_state) {
    if (n_qubits < 1) {
        throw Error(ErrorCode::InvalidArgument, "n_qubits must be >= 1");
    }
    if (measurements.empty()) {
        throw Error(ErrorCode::EmptyMeasurement,
                    "a circuit needs at least one measurement");
    }

    Circuit c;
    c.n_qubits_ = n_qubits;
    c.param_count_ = param_count;

    std::size_t angle_cursor = 0;
    c.angle_offset_.reserve(gates.size() + 1);
    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
        const auto &g = gates[gi];
        const auto &info = gate_info(g.kind);
        const auto where = gate_label(gi, g);
        if (g.kind == GateKind::Unitary) {
            if (g.qubits.empty() || !g.matrix) {
                throw Error(ErrorCode::InvalidArgument,
                            where + ": needs qubits and a matrix");
            }
            const std::size_t dim = std::size_t{1} << g.qubits.size();
            if (g.matrix->size() != dim * dim) {
                throw Error(ErrorCode::InvalidArgument,
                            where + ": matrix must be " + std::to_string(dim) +
                                "x" + std::to_string(dim));
            }
        } else if (static_cast<int>(g.qubits.size()) != info.arity) {
            throw Error(ErrorCode::InvalidArgument,
                        where + ": expects " + std::to_string(info.arity) +
                            " qubit(s)");
        }
        if (static_cast<int>(g.params.size()) != info.param_count) {
            throw Error(ErrorCode::ParamCountMismatch,
                        where + ": expects " +
                            std::to_string(info.param_count) + " parameter(s)");
        }
        validate_qubits(g.qubits, n_qubits, where);

        c.angle_offset_.push_back(angle_cursor);
        for (std::size_t j = 0; j < g.params.size(); ++j) {
            if (const auto *ref = std::get_if<ParamRef>(&g.params[j])) {
                if (ref->slot >= param_count) {
                    throw Error(ErrorCode::ParamLengthMismatch,
                                where + ": slot " + std::to_string(ref->slot) +
                                    " >= parameter count " +
                                    std::to_string(param_count));
                }
                c.param_uses_.push_back(
                    {gi, angle_cursor + j, ref->slot, ref->scale});
            }
        }
        angle_cursor += g.params.size();
    }
    c.angle_offset_.push_back(angle_cursor);

    for (std::size_t mi = 0; mi < measurements.size(); ++mi) {
        const auto &m = measurements[mi];
        const auto where = "measurement " + std::to_string(mi);
        switch (m.kind) {
        case MeasurementKind::Expectation:
            if (static_cast<int>(m.observable.ops.size()) != n_qubits ||
                m.observable.ops.find_first_not_of("IXYZ") !=
                    std::string::npos) {
                throw Error(ErrorCode::InvalidArgument,
                            where + ": Pauli string must have " +
                                std::to_string(n_qubits) +
                                " characters from IXYZ");
            }
            if (!std::isfinite(m.observable.coeff)) {
                throw Error(ErrorCode::InvalidArgument,
                            where + ": coefficient must be finite");
            }
            break;
        case MeasurementKind::Probabilities:
            if (m.qubits.empty()) {
                throw Error(ErrorCode::InvalidArgument,
                            where + ": probabilities need qubits");
            }
            validate_qubits(m.qubits, n_qubits, where);
            break;
        case MeasurementKind::State:
            break;
        }
    }

    if (init_state) {
        if (n_qubits >= 63 ||
            init_state->size() != (std::size_t{1} << n_qubits)) {
            throw Error(ErrorCode::BadInitStateLength,
                        "init_state length must be 2^" +
                            std::to_string(n_qubits));
        }
        double norm2 = 0.0;
        for (const auto &a : *init_state) {
            norm2 += std::norm(a);
        }
        if (std::abs(std::sqrt(norm2) - 1.0) > kNormTolerance) {
            throw Error(ErrorCode::NonUnitNorm,
                        "init_state must have unit norm");
        }
    }

    c.gates_ = std::move(gates);
    c.measurements_ = std::move(measurements);
    c.init_state_ = std::move(init_state);
    return c;
}

BoundAngles Circuit::bind(std::span<const double> params) const {
    if (params.size() != param_count_) {
        throw Error(ErrorCode::ParamLengthMismatch,
                    "expected " + std::to_string(param_count_) +
                        " parameters, got " + std::to_string(params.size()));
    }
    BoundAngles out;
    out.offset = angle_offset_;
    out.values.reserve(angle_offset_.back());
    for (const auto &g : gates_) {
        for (const auto &p : g.params) {
            if (const auto *ref = std::get_if<ParamRef>(&p)) {
                out.values.push_back(ref->scale * params[ref->slot]);
            } else {
                out.values.push_back(std::get<double>(p));
            }
        }
    }
    return out;
}

std::size_t Circuit::output_size(std::size_t m) const {
    const auto &meas = measurements_.at(m);
    switch (meas.kind) {
    case MeasurementKind::Expectation:
        return 1;
    case MeasurementKind::Probabilities:
        return std::size_t{1} << meas.qubits.size();
    case MeasurementKind::State:
        return std::size_t{2} << n_qubits_;
    }
    return 0;
}

bool operator==(const Circuit &a, const Circuit &b) {
    return a.n_qubits_ == b.n_qubits_ && a.gates_ == b.gates_ &&
           a.measurements_ == b.measurements_ &&
           a.param_count_ == b.param_count_ && a.init_state_ == b.init_state_;
}

} // namespace qtn
