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
 * Gate catalogue: names, arities, matrices and analytic parameter
 * derivatives. Matrices are row-major over the gate's qubits with the first
 * listed qubit as the most significant bit. Rotations follow
 * R_P(t) = exp(-i t P / 2).
 */
#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace qtn {

using cplx = std::complex<double>;

enum class GateKind : unsigned char {
    I,
    X,
    Y,
    Z,
    H,
    S,
    T,
    RX,
    RY,
    RZ,
    Rot,
    PhaseShift,
    CNOT,
    CZ,
    SWAP,
    CRX,
    CRY,
    CRZ,
    /// Constant dense k-qubit matrix supplied by the caller (e.g. an analog
    /// evolution block). Not part of the composer palette.
    Unitary,
};

struct GateInfo {
    GateKind kind;
    std::string_view name;
    int arity;      ///< qubit count; 0 for Unitary (given by the instance)
    int param_count;
    int generator_eigenvalues; ///< 0, 2 or 4
};

const GateInfo &gate_info(GateKind kind);
std::optional<GateKind> gate_kind_from_name(std::string_view name);

/// Every named gate (excludes Unitary).
std::span<const GateKind> gate_palette();

/// Row-major 2^k x 2^k matrix.
std::vector<cplx> gate_matrix(GateKind kind, std::span<const double> angles);

/// d matrix / d angles[which].
std::vector<cplx> gate_matrix_derivative(GateKind kind,
                                         std::span<const double> angles,
                                         int which);

/// Structural sparsity of the gate tensor, axes ordered (out_0..out_{k-1},
/// in_0..in_{k-1}). A pair (a, b) listed as diagonal means the tensor
/// vanishes whenever index a != index b, for every parameter value.
struct GateStructure {
    std::vector<std::pair<int, int>> diagonal;
    std::vector<std::pair<int, int>> anti_diagonal;
};
GateStructure gate_structure(GateKind kind);

/// Dense matrix product of two square row-major matrices of equal dimension.
std::vector<cplx> matmul(std::span<const cplx> a, std::span<const cplx> b);

/// Conjugate transpose of a square row-major matrix.
std::vector<cplx> dagger(std::span<const cplx> m);

} // namespace qtn
