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
 * Full-amplitude simulation. Gates are applied as in-place strided updates
 * through the SIMD kernel table, never as 2^n x 2^n matrices.
 */
#pragma once

#include "qtn/circuit/circuit.hpp"
#include "qtn/circuit/result.hpp"

#include <optional>
#include <span>
#include <vector>

namespace qtn::sv {

/// Largest register this mode accepts (2^26 amplitudes = 1 GiB).
inline constexpr int kMaxQubits = 26;

class StateVector {
  public:
    /// |0...0>
    explicit StateVector(int n_qubits);
    StateVector(int n_qubits, std::vector<cplx> amplitudes);

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t size() const { return amps_.size(); }
    [[nodiscard]] std::span<const cplx> amplitudes() const { return amps_; }
    [[nodiscard]] std::span<cplx> data() { return amps_; }
    [[nodiscard]] double norm() const;

    /// Bit mask of qubit q in a basis index (qubit 0 is the MSB).
    [[nodiscard]] std::size_t qubit_bit(int q) const {
        return std::size_t{1} << (n_qubits_ - 1 - q);
    }

  private:
    int n_qubits_;
    std::vector<cplx> amps_;
};

/// Throws TooManyQubits past kMaxQubits.
void check_qubit_limit(int n_qubits);

/// Applies a 2^k x 2^k row-major matrix on `qubits` (first = MSB of the
/// matrix index).
void apply_matrix(StateVector &psi, std::span<const int> qubits,
                  std::span<const cplx> matrix);

void apply_gate(StateVector &psi, const GateInstance &gate,
                std::span<const double> angles);

/// psi <- P psi for a Pauli string (coefficient included).
void apply_pauli(StateVector &psi, const PauliString &pauli);

double expectation(const StateVector &psi, const PauliString &pauli);

/// Marginal distribution over `qubits`; the first listed qubit is the most
/// significant bit of the output index.
std::vector<double> probabilities(const StateVector &psi,
                                  std::span<const int> qubits);

MeasurementResult measure(const StateVector &psi, const Measurement &m);

/// Post-gate states of one forward pass (one entry per gate).
struct EvaluationTape {
    std::vector<StateVector> states;
};

struct RunOutput {
    std::vector<MeasurementResult> results;
    std::optional<EvaluationTape> tape;
};

/// Executes circuits against cached gate matrices. Constant gates (no
/// ParamRef) are folded into matrices once, at construction.
class StateVectorEngine {
  public:
    explicit StateVectorEngine(const Circuit &circuit);

    [[nodiscard]] StateVector initial_state() const;
    [[nodiscard]] RunOutput run(const BoundAngles &angles,
                                bool want_tape) const;

    /// d(expectation m) / d(angle a) for every expectation measurement (rows,
    /// in measurement order) and every bound angle (cols), by one forward
    /// pass with tape plus one reverse sweep per measurement.
    [[nodiscard]] Jacobian angle_jacobian(const BoundAngles &angles) const;

    /// Reverse sweep over a recorded tape.
    [[nodiscard]] Jacobian angle_jacobian(const BoundAngles &angles,
                                          const EvaluationTape &tape) const;

  private:
    const Circuit *circuit_;
    std::vector<std::optional<std::vector<cplx>>> constant_matrices_;

    [[nodiscard]] std::vector<cplx> matrix_for(std::size_t gate,
                                               const BoundAngles &angles) const;
};

} // namespace qtn::sv
