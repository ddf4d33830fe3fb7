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
 * Data-parallel inner loops. Every kernel has a scalar reference version and,
 * when the CPU supports it, an AVX2/FMA variant. `kernels()` picks the best
 * table once at startup; `QTN_FORCE_SCALAR=1` pins the scalar table.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace qtn::simd {

using cplx = std::complex<double>;

/// Applies a 2x2 matrix (row-major) to every amplitude pair (i, i|stride)
/// with bit `stride` clear in i. `dim` is the state length, stride a power of two.
using Apply1qFn = void (*)(cplx *psi, std::size_t dim, std::size_t stride,
                           const cplx *m);

/// Applies a 4x4 matrix to quadruples indexed by two bits. `stride_hi` is
/// the bit of the first (most significant in the matrix) qubit.
using Apply2qFn = void (*)(cplx *psi, std::size_t dim, std::size_t stride_hi,
                           std::size_t stride_lo, const cplx *m);

/// Batched row-major complex GEMM: C[b] = op(A[b]) * op(B[b]) with A[b] of
/// shape (m, k), B[b] of shape (k, n), C[b] of shape (m, n). C is overwritten.
/// op() conjugates the operand when the matching flag is set.
using CgemmFn = void (*)(std::size_t batch, std::size_t m, std::size_t n,
                         std::size_t k, const cplx *a, bool conj_a,
                         const cplx *b, bool conj_b, cplx *c);

/// <psi| P |psi> for a Pauli string encoded as x/z bit masks over basis
/// indices (Y sets both bits). `y_count` is the number of Y factors.
using PauliExpvalFn = double (*)(const cplx *psi, std::size_t dim,
                                 std::uint64_t x_mask, std::uint64_t z_mask,
                                 int y_count);

/// Sum of |psi_i|^2.
using Norm2Fn = double (*)(const cplx *psi, std::size_t dim);

struct KernelTable {
    std::string_view name;
    Apply1qFn apply_1q;
    Apply2qFn apply_2q;
    CgemmFn cgemm;
    PauliExpvalFn pauli_expval;
    Norm2Fn norm2;
};

const KernelTable &scalar_kernels();

/// Null when the AVX2 variants were not compiled in or the CPU lacks AVX2/FMA.
const KernelTable *avx2_kernels();

/// The table used by the engines.
const KernelTable &kernels();

} // namespace qtn::simd
