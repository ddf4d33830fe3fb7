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
#include "qtn/statevector/state_vector.hpp"

#include "qtn/error.hpp"
#include "qtn/simd/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace qtn::sv {

namespace {

/// Basis offsets of every assignment of `qubits`, first qubit most significant.
std::vector<std::size_t> block_offsets(const StateVector &psi,
                                       std::span<const int> qubits) {
    const std::size_t k = qubits.size();
    std::vector<std::size_t> off(std::size_t{1} << k, 0);
    for (std::size_t a = 0; a < off.size(); ++a) {
        for (std::size_t j = 0; j < k; ++j) {
            if ((a >> (k - 1 - j)) & 1U) {
                off[a] |= psi.qubit_bit(qubits[j]);
            }
        }
    }
    return off;
}

struct PauliMasks {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    int y_count = 0;
};

PauliMasks pauli_masks(const StateVector &psi, const PauliString &p) {
    PauliMasks m;
    for (int q = 0; q < static_cast<int>(p.ops.size()); ++q) {
        const auto bit = psi.qubit_bit(q);
        switch (p.ops[q]) {
        case 'X': m.x |= bit; break;
        case 'Y': m.x |= bit; m.z |= bit; ++m.y_count; break;
        case 'Z': m.z |= bit; break;
        default: break;
        }
    }
    return m;
}

} // namespace

void check_qubit_limit(int n_qubits) {
    if (n_qubits > kMaxQubits) {
        throw Error(ErrorCode::TooManyQubits,
                    "state-vector mode supports at most " +
                        std::to_string(kMaxQubits) + " qubits (got " +
                        std::to_string(n_qubits) +
                        "); use tensor-network mode");
    }
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    check_qubit_limit(n_qubits);
    amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<cplx> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    check_qubit_limit(n_qubits);
    if (amps_.size() != (std::size_t{1} << n_qubits)) {
        throw Error(ErrorCode::BadInitStateLength,
                    "state length must be 2^" + std::to_string(n_qubits));
    }
}

double StateVector::norm() const {
    return std::sqrt(simd::kernels().norm2(amps_.data(), amps_.size()));
}

void apply_matrix(StateVector &psi, std::span<const int> qubits,
                  std::span<const cplx> matrix) {
    const auto &k = simd::kernels();
    auto data = psi.data();
    if (qubits.size() == 1) {
        k.apply_1q(data.data(), data.size(), psi.qubit_bit(qubits[0]),
                   matrix.data());
        return;
    }
    if (qubits.size() == 2) {
        k.apply_2q(data.data(), data.size(), psi.qubit_bit(qubits[0]),
                   psi.qubit_bit(qubits[1]), matrix.data());
        return;
    }
    const auto off = block_offsets(psi, qubits);
    const std::size_t block = off.size();
    std::size_t mask = 0;
    for (int q : qubits) {
        mask |= psi.qubit_bit(q);
    }
    std::vector<cplx> in(block);
    for (std::size_t base = 0; base < data.size(); ++base) {
        if (base & mask) {
            continue;
        }
        for (std::size_t a = 0; a < block; ++a) {
            in[a] = data[base | off[a]];
        }
        for (std::size_t r = 0; r < block; ++r) {
            cplx acc{0.0, 0.0};
            const cplx *row = matrix.data() + r * block;
            for (std::size_t c = 0; c < block; ++c) {
                acc += row[c] * in[c];
            }
            data[base | off[r]] = acc;
        }
    }
}

void apply_gate(StateVector &psi, const GateInstance &gate,
                std::span<const double> angles) {
    if (gate.kind == GateKind::Unitary) {
        apply_matrix(psi, gate.qubits, *gate.matrix);
        return;
    }
    if (gate.kind == GateKind::I) {
        return;
    }
    const auto m = gate_matrix(gate.kind, angles);
    apply_matrix(psi, gate.qubits, m);
}

void apply_pauli(StateVector &psi, const PauliString &pauli) {
    const auto masks = pauli_masks(psi, pauli);
    auto data = psi.data();
    // P|j> = i^{y} (-1)^{popcount(j & z)} |j ^ x>
    static const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const cplx yphase = kIPow[masks.y_count % 4] * pauli.coeff;
    std::vector<cplx> out(data.size());
    for (std::size_t j = 0; j < data.size(); ++j) {
        const bool odd = std::popcount(j & masks.z) & 1;
        out[j ^ masks.x] = (odd ? -yphase : yphase) * data[j];
    }
    std::copy(out.begin(), out.end(), data.begin());
}

double expectation(const StateVector &psi, const PauliString &pauli) {
    const auto masks = pauli_masks(psi, pauli);
    const auto amps = psi.amplitudes();
    return pauli.coeff * simd::kernels().pauli_expval(amps.data(), amps.size(),
                                                      masks.x, masks.z,
                                                      masks.y_count);
}

std::vector<double> probabilities(const StateVector &psi,
                                  std::span<const int> qubits) {
    const std::size_t k = qubits.size();
    std::vector<double> out(std::size_t{1} << k, 0.0);
    const auto amps = psi.amplitudes();
    const int n = psi.n_qubits();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < k; ++j) {
            idx = (idx << 1) | ((i >> (n - 1 - qubits[j])) & 1U);
        }
        out[idx] += std::norm(amps[i]);
    }
    return out;
}

MeasurementResult measure(const StateVector &psi, const Measurement &m) {
    MeasurementResult r;
    r.kind = m.kind;
    switch (m.kind) {
    case MeasurementKind::Expectation:
        r.values = {expectation(psi, m.observable)};
        break;
    case MeasurementKind::Probabilities:
        r.values = probabilities(psi, m.qubits);
        break;
    case MeasurementKind::State: {
        const auto amps = psi.amplitudes();
        r.amplitudes.assign(amps.begin(), amps.end());
        r.values.reserve(2 * amps.size());
        for (const auto &a : amps) {
            r.values.push_back(a.real());
            r.values.push_back(a.imag());
        }
        break;
    }
    }
    return r;
}

StateVectorEngine::StateVectorEngine(const Circuit &circuit)
    : circuit_(&circuit) {
    check_qubit_limit(circuit.n_qubits());
    const auto bound = circuit.bind(std::vector<double>(circuit.param_count()));
    const auto &gates = circuit.gates();
    constant_matrices_.resize(gates.size());
    for (std::size_t g = 0; g < gates.size(); ++g) {
        if (gates[g].is_parametric()) {
            continue;
        }
        if (gates[g].kind == GateKind::Unitary) {
            constant_matrices_[g] = *gates[g].matrix;
        } else {
            constant_matrices_[g] = gate_matrix(gates[g].kind, bound.of(g));
        }
    }
}

std::vector<cplx> StateVectorEngine::matrix_for(std::size_t gate,
                                                const BoundAngles &angles) const {
    if (constant_matrices_[gate]) {
        return *constant_matrices_[gate];
    }
    return gate_matrix(circuit_->gates()[gate].kind, angles.of(gate));
}

StateVector StateVectorEngine::initial_state() const {
    if (circuit_->init_state()) {
        return StateVector(circuit_->n_qubits(), *circuit_->init_state());
    }
    return StateVector(circuit_->n_qubits());
}

RunOutput StateVectorEngine::run(const BoundAngles &angles,
                                 bool want_tape) const {
    RunOutput out;
    auto psi = initial_state();
    const auto &gates = circuit_->gates();
    if (want_tape) {
        out.tape.emplace();
        out.tape->states.reserve(gates.size());
    }
    for (std::size_t g = 0; g < gates.size(); ++g) {
        if (gates[g].kind != GateKind::I) {
            const auto *cm = constant_matrices_[g] ? &*constant_matrices_[g]
                                                   : nullptr;
            if (cm) {
                apply_matrix(psi, gates[g].qubits, *cm);
            } else {
                apply_matrix(psi, gates[g].qubits,
                             gate_matrix(gates[g].kind, angles.of(g)));
            }
        }
        if (want_tape) {
            out.tape->states.push_back(psi);
        }
    }
    out.results.reserve(circuit_->measurements().size());
    for (const auto &m : circuit_->measurements()) {
        out.results.push_back(measure(psi, m));
    }
    return out;
}

Jacobian StateVectorEngine::angle_jacobian(const BoundAngles &angles) const {
    const auto fwd = run(angles, true);
    return angle_jacobian(angles, *fwd.tape);
}

Jacobian StateVectorEngine::angle_jacobian(const BoundAngles &angles,
                                           const EvaluationTape &tape) const {
    const auto &gates = circuit_->gates();
    if (tape.states.size() != gates.size()) {
        throw Error(ErrorCode::TapeMissing,
                    "tape does not match the circuit's gate count");
    }
    std::vector<std::size_t> rows;
    for (std::size_t m = 0; m < circuit_->measurements().size(); ++m) {
        if (circuit_->measurements()[m].kind != MeasurementKind::Expectation) {
            throw Error(ErrorCode::NonExpectationMeasurement,
                        "adjoint differentiation needs expectation values");
        }
        rows.push_back(m);
    }
    Jacobian jac(rows.size(), angles.values.size());
    if (gates.empty()) {
        return jac;
    }
    const auto psi0 = initial_state();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto lambda = tape.states.back();
        apply_pauli(lambda, circuit_->measurements()[rows[r]].observable);
        for (std::size_t gi = gates.size(); gi-- > 0;) {
            const auto &g = gates[gi];
            const StateVector &before = gi == 0 ? psi0 : tape.states[gi - 1];
            if (g.is_parametric()) {
                const auto a = angles.of(gi);
                for (std::size_t j = 0; j < a.size(); ++j) {
                    const auto dm = gate_matrix_derivative(
                        g.kind, a, static_cast<int>(j));
                    StateVector mu = before;
                    apply_matrix(mu, g.qubits, dm);
                    const auto l = lambda.amplitudes();
                    const auto u = mu.amplitudes();
                    double acc = 0.0;
                    for (std::size_t i = 0; i < l.size(); ++i) {
                        acc += l[i].real() * u[i].real() +
                               l[i].imag() * u[i].imag();
                    }
                    jac(r, angles.offset[gi] + j) = 2.0 * acc;
                }
            }
            if (gi > 0 && g.kind != GateKind::I) {
                const auto m = matrix_for(gi, angles);
                apply_matrix(lambda, g.qubits, dagger(m));
            }
        }
    }
    return jac;
}

} // namespace qtn::sv
