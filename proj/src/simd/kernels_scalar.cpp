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
#include "kernels_internal.hpp"

#include <bit>

namespace qtn::simd::detail {

namespace {

// Explicit real arithmetic: std::complex operator* carries NaN/Inf recovery
// branches that we do not want in the inner loops.
inline void cmul_acc(double ar, double ai, double br, double bi, double &cr,
                     double &ci) {
    cr += ar * br - ai * bi;
    ci += ar * bi + ai * br;
}

} // namespace

void apply_1q_scalar(cplx *psi, std::size_t dim, std::size_t stride,
                     const cplx *m) {
    const double m00r = m[0].real(), m00i = m[0].imag();
    const double m01r = m[1].real(), m01i = m[1].imag();
    const double m10r = m[2].real(), m10i = m[2].imag();
    const double m11r = m[3].real(), m11i = m[3].imag();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const double a0r = psi[i].real(), a0i = psi[i].imag();
            const double a1r = psi[i + stride].real();
            const double a1i = psi[i + stride].imag();
            double r0 = 0, i0 = 0, r1 = 0, i1 = 0;
            cmul_acc(m00r, m00i, a0r, a0i, r0, i0);
            cmul_acc(m01r, m01i, a1r, a1i, r0, i0);
            cmul_acc(m10r, m10i, a0r, a0i, r1, i1);
            cmul_acc(m11r, m11i, a1r, a1i, r1, i1);
            psi[i] = {r0, i0};
            psi[i + stride] = {r1, i1};
        }
    }
}

void apply_2q_scalar(cplx *psi, std::size_t dim, std::size_t stride_hi,
                     std::size_t stride_lo, const cplx *m) {
    const std::size_t mask = stride_hi | stride_lo;
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & mask) != 0) {
            continue;
        }
        const std::size_t idx[4] = {i, i | stride_lo, i | stride_hi,
                                    i | stride_hi | stride_lo};
        double vr[4], vi[4];
        for (int r = 0; r < 4; ++r) {
            vr[r] = psi[idx[r]].real();
            vi[r] = psi[idx[r]].imag();
        }
        for (int r = 0; r < 4; ++r) {
            double accr = 0, acci = 0;
            for (int c = 0; c < 4; ++c) {
                cmul_acc(m[4 * r + c].real(), m[4 * r + c].imag(), vr[c],
                         vi[c], accr, acci);
            }
            psi[idx[r]] = {accr, acci};
        }
    }
}

void cgemm_scalar(std::size_t batch, std::size_t m, std::size_t n,
                  std::size_t k, const cplx *a, bool conj_a, const cplx *b,
                  bool conj_b, cplx *c) {
    const double sa = conj_a ? -1.0 : 1.0;
    const double sb = conj_b ? -1.0 : 1.0;
    for (std::size_t bt = 0; bt < batch; ++bt) {
        const cplx *ab = a + bt * m * k;
        const cplx *bb = b + bt * k * n;
        cplx *cb = c + bt * m * n;
        for (std::size_t i = 0; i < m * n; ++i) {
            cb[i] = {0.0, 0.0};
        }
        for (std::size_t i = 0; i < m; ++i) {
            auto *crow = reinterpret_cast<double *>(cb + i * n);
            for (std::size_t p = 0; p < k; ++p) {
                const double ar = ab[i * k + p].real();
                const double ai = sa * ab[i * k + p].imag();
                const cplx *brow = bb + p * n;
                for (std::size_t j = 0; j < n; ++j) {
                    const double br = brow[j].real();
                    const double bi = sb * brow[j].imag();
                    crow[2 * j] += ar * br - ai * bi;
                    crow[2 * j + 1] += ar * bi + ai * br;
                }
            }
        }
    }
}

double pauli_expval_scalar(const cplx *psi, std::size_t dim,
                           std::uint64_t x_mask, std::uint64_t z_mask,
                           int y_count) {
    // (P psi)_i = phase(i ^ x) psi_{i ^ x}, phase(j) = i^y (-1)^{|j & z|}.
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t j = i ^ x_mask;
        const double sign = (std::popcount(j & z_mask) & 1U) ? -1.0 : 1.0;
        const double pr = psi[j].real() * sign;
        const double pi = psi[j].imag() * sign;
        // conj(psi_i) * (pr + i pi)
        re += psi[i].real() * pr + psi[i].imag() * pi;
        im += psi[i].real() * pi - psi[i].imag() * pr;
    }
    switch (y_count & 3) {
    case 0:
        return re;
    case 1:
        return -im;
    case 2:
        return -re;
    default:
        return im;
    }
}

double norm2_scalar(const cplx *psi, std::size_t dim) {
    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        acc += psi[i].real() * psi[i].real() + psi[i].imag() * psi[i].imag();
    }
    return acc;
}

} // namespace qtn::simd::detail
