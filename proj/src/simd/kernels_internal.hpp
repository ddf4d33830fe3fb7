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
#pragma once

#include "qtn/simd/kernels.hpp"

namespace qtn::simd::detail {

void apply_1q_scalar(cplx *psi, std::size_t dim, std::size_t stride,
                     const cplx *m);
void apply_2q_scalar(cplx *psi, std::size_t dim, std::size_t stride_hi,
                     std::size_t stride_lo, const cplx *m);
void cgemm_scalar(std::size_t batch, std::size_t m, std::size_t n,
                  std::size_t k, const cplx *a, bool conj_a, const cplx *b,
                  bool conj_b, cplx *c);
double pauli_expval_scalar(const cplx *psi, std::size_t dim,
                           std::uint64_t x_mask, std::uint64_t z_mask,
                           int y_count);
double norm2_scalar(const cplx *psi, std::size_t dim);

#if defined(QTN_HAVE_AVX2)
void apply_1q_avx2(cplx *psi, std::size_t dim, std::size_t stride,
                   const cplx *m);
void apply_2q_avx2(cplx *psi, std::size_t dim, std::size_t stride_hi,
                   std::size_t stride_lo, const cplx *m);
void cgemm_avx2(std::size_t batch, std::size_t m, std::size_t n,
                std::size_t k, const cplx *a, bool conj_a, const cplx *b,
                bool conj_b, cplx *c);
double pauli_expval_avx2(const cplx *psi, std::size_t dim,
                         std::uint64_t x_mask, std::uint64_t z_mask,
                         int y_count);
double norm2_avx2(const cplx *psi, std::size_t dim);
#endif

} // namespace qtn::simd::detail
