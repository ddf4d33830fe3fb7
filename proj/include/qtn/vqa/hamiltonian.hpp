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
 * Pauli-sum Hamiltonians. Text format: one term per line, "coeff PAULIS"
 * (e.g. "-0.4804 ZIII"); blank lines and lines starting with '#' are
 * skipped. Every term must have the same length.
 */
#pragma once

#include "qtn/circuit/circuit.hpp"

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

namespace qtn::vqa {

struct PauliSum {
    int n_qubits = 0;
    std::vector<PauliString> terms;
};

/// Throws HamiltonianParseError with the 1-based line number.
PauliSum parse_pauli_sum(std::string_view text);
PauliSum load_pauli_sum(const std::string &path);

/// Dense 2^n x 2^n matrix (qubit 0 is the most significant bit).
Eigen::MatrixXcd dense_matrix(const PauliSum &h);

/// Smallest eigenvalue by dense diagonalization.
double ground_energy(const PauliSum &h);

/// Largest n accepted by the dense routines.
inline constexpr int kMaxDenseQubits = 12;

} // namespace qtn::vqa
