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
// Compiled with -mavx2 -mfma. Only reached through the dispatch table after a
// runtime CPU check.
#include "kernels_internal.hpp"

#include <bit>
#include <immintrin.h>

namespace qtn::simd::detail {

namespace {

// Two complex doubles per register: [re0, im0, re1, im1].
inline __m256d load2(const cplx *p) {
    return _mm256_loadu_pd(reinterpret_cast<const double *>(p));
}
inline void store2(cplx *p, __m256d v) {
    _mm256_storeu_pd(reinterpret_cast<double *>(p), v);
}

// (re + i im) * v for a broadcast scalar.
inline __m256d cmul_bcast(__m256d re, __m256d im, __m256d v) {
    const __m256d swapped = _mm256_permute_pd(v, 0x5);
    return _mm256_fmaddsub_pd(re, v, _mm256_mul_pd(im, swapped));
}

// Lane-wise complex product a * b.
inline __m256d cmul(__m256d a, __m256d b) {
    const __m256d a_re = _mm256_movedup_pd(a);
    const __m256d a_im = _mm256_permute_pd(a, 0xF);
    return _mm256_fmaddsub_pd(a_re, b,
                              _mm256_mul_pd(a_im, _mm256_permute_pd(b, 0x5)));
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

struct Bcast {
    __m256d re;
    __m256d im;
    explicit Bcast(cplx z)
        : re(_mm256_set1_pd(z.real())), im(_mm256_set1_pd(z.imag())) {}
};

inline std::size_t insert_zero_bit(std::size_t x, std::size_t bit) {
    const std::size_t low = x & (bit - 1);
    return ((x ^ low) << 1) | low;
}

} // namespace

void apply_1q_avx2(cplx *psi, std::size_t dim, std::size_t stride,
                   const cplx *m) {
    if (dim < 2) {
        return;
    }
    if (stride == 1) {
        // Pairs live in one register: out = col0 * [a0,a0] + col1 * [a1,a1].
        const __m256d col0 = _mm256_setr_pd(m[0].real(), m[0].imag(),
                                            m[2].real(), m[2].imag());
        const __m256d col1 = _mm256_setr_pd(m[1].real(), m[1].imag(),
                                            m[3].real(), m[3].imag());
        for (std::size_t i = 0; i < dim; i += 2) {
            const __m256d v = load2(psi + i);
            const __m256d lo = _mm256_permute2f128_pd(v, v, 0x00);
            const __m256d hi = _mm256_permute2f128_pd(v, v, 0x11);
            store2(psi + i, _mm256_add_pd(cmul(col0, lo), cmul(col1, hi)));
        }
        return;
    }
    const Bcast m00(m[0]), m01(m[1]), m10(m[2]), m11(m[3]);
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; i += 2) {
            const __m256d a0 = load2(psi + i);
            const __m256d a1 = load2(psi + i + stride);
            const __m256d r0 = _mm256_add_pd(cmul_bcast(m00.re, m00.im, a0),
                                             cmul_bcast(m01.re, m01.im, a1));
            const __m256d r1 = _mm256_add_pd(cmul_bcast(m10.re, m10.im, a0),
                                             cmul_bcast(m11.re, m11.im, a1));
            store2(psi + i, r0);
            store2(psi + i + stride, r1);
        }
    }
}

void apply_2q_avx2(cplx *psi, std::size_t dim, std::size_t stride_hi,
                   std::size_t stride_lo, const cplx *m) {
    const std::size_t small = stride_hi < stride_lo ? stride_hi : stride_lo;
    const std::size_t large = stride_hi < stride_lo ? stride_lo : stride_hi;
    if (small == 1 || dim < 8) {
        apply_2q_scalar(psi, dim, stride_hi, stride_lo, m);
        return;
    }
    Bcast mat[16] = {
        Bcast(m[0]),  Bcast(m[1]),  Bcast(m[2]),  Bcast(m[3]),
        Bcast(m[4]),  Bcast(m[5]),  Bcast(m[6]),  Bcast(m[7]),
        Bcast(m[8]),  Bcast(m[9]),  Bcast(m[10]), Bcast(m[11]),
        Bcast(m[12]), Bcast(m[13]), Bcast(m[14]), Bcast(m[15]),
    };
    const std::size_t quads = dim / 4;
    for (std::size_t t = 0; t < quads; t += 2) {
        const std::size_t i = insert_zero_bit(insert_zero_bit(t, small), large);
        const std::size_t idx[4] = {i, i | stride_lo, i | stride_hi,
                                    i | stride_hi | stride_lo};
        const __m256d v[4] = {load2(psi + idx[0]), load2(psi + idx[1]),
                              load2(psi + idx[2]), load2(psi + idx[3])};
        for (int r = 0; r < 4; ++r) {
            __m256d acc = cmul_bcast(mat[4 * r].re, mat[4 * r].im, v[0]);
            for (int c = 1; c < 4; ++c) {
                acc = _mm256_add_pd(
                    acc, cmul_bcast(mat[4 * r + c].re, mat[4 * r + c].im, v[c]));
            }
            store2(psi + idx[r], acc);
        }
    }
}

void cgemm_avx2(std::size_t batch, std::size_t m, std::size_t n,
                std::size_t k, const cplx *a, bool conj_a, const cplx *b,
                bool conj_b, cplx *c) {
    const __m256d conj_mask =
        conj_b ? _mm256_setr_pd(0.0, -0.0, 0.0, -0.0) : _mm256_setzero_pd();
    const double sa = conj_a ? -1.0 : 1.0;
    const std::size_t n8 = n - n % 8;
    const std::size_t n2 = n - n % 2;
    for (std::size_t bt = 0; bt < batch; ++bt) {
        const cplx *ab = a + bt * m * k;
        const cplx *bb = b + bt * k * n;
        cplx *cb = c + bt * m * n;
        for (std::size_t i = 0; i < m; ++i) {
            const cplx *arow = ab + i * k;
            cplx *crow = cb + i * n;
            std::size_t j = 0;
            for (; j < n8; j += 8) {
                __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
                __m256d acc2 = _mm256_setzero_pd(), acc3 = _mm256_setzero_pd();
                for (std::size_t p = 0; p < k; ++p) {
                    const __m256d re = _mm256_set1_pd(arow[p].real());
                    const __m256d im = _mm256_set1_pd(sa * arow[p].imag());
                    const cplx *brow = bb + p * n + j;
                    acc0 = _mm256_add_pd(acc0, cmul_bcast(re, im, _mm256_xor_pd(load2(brow), conj_mask)));
                    acc1 = _mm256_add_pd(acc1, cmul_bcast(re, im, _mm256_xor_pd(load2(brow + 2), conj_mask)));
                    acc2 = _mm256_add_pd(acc2, cmul_bcast(re, im, _mm256_xor_pd(load2(brow + 4), conj_mask)));
                    acc3 = _mm256_add_pd(acc3, cmul_bcast(re, im, _mm256_xor_pd(load2(brow + 6), conj_mask)));
                }
                store2(crow + j, acc0);
                store2(crow + j + 2, acc1);
                store2(crow + j + 4, acc2);
                store2(crow + j + 6, acc3);
            }
            for (; j < n2; j += 2) {
                __m256d acc = _mm256_setzero_pd();
                for (std::size_t p = 0; p < k; ++p) {
                    const __m256d re = _mm256_set1_pd(arow[p].real());
                    const __m256d im = _mm256_set1_pd(sa * arow[p].imag());
                    acc = _mm256_add_pd(
                        acc, cmul_bcast(re, im,
                                        _mm256_xor_pd(load2(bb + p * n + j),
                                                      conj_mask)));
                }
                store2(crow + j, acc);
            }
            if (j < n) {
                const double sb = conj_b ? -1.0 : 1.0;
                double cr = 0.0, ci = 0.0;
                for (std::size_t p = 0; p < k; ++p) {
                    const double ar = arow[p].real();
                    const double ai = sa * arow[p].imag();
                    const double br = bb[p * n + j].real();
                    const double bi = sb * bb[p * n + j].imag();
                    cr += ar * br - ai * bi;
                    ci += ar * bi + ai * br;
                }
                crow[j] = {cr, ci};
            }
        }
    }
}

double pauli_expval_avx2(const cplx *psi, std::size_t dim,
                         std::uint64_t x_mask, std::uint64_t z_mask,
                         int y_count) {
    if (dim < 2) {
        return pauli_expval_scalar(psi, dim, x_mask, z_mask, y_count);
    }
    const bool swap_pair = (x_mask & 1U) != 0;
    const __m256d im_sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    for (std::size_t i = 0; i < dim; i += 2) {
        const std::size_t j0 = i ^ x_mask;
        const std::size_t j1 = (i + 1) ^ x_mask;
        const double s0 = (std::popcount(j0 & z_mask) & 1U) ? -1.0 : 1.0;
        const double s1 = (std::popcount(j1 & z_mask) & 1U) ? -1.0 : 1.0;
        __m256d pj = load2(psi + (j0 & ~std::size_t{1}));
        if (swap_pair) {
            pj = _mm256_permute2f128_pd(pj, pj, 0x01);
        }
        pj = _mm256_mul_pd(pj, _mm256_setr_pd(s0, s0, s1, s1));
        const __m256d pi = load2(psi + i);
        // re: Re(conj(a) b) = ar br + ai bi ; im: ar bi - ai br
        acc_re = _mm256_fmadd_pd(pi, pj, acc_re);
        acc_im = _mm256_fmadd_pd(_mm256_mul_pd(pi, im_sign),
                                 _mm256_permute_pd(pj, 0x5), acc_im);
    }
    const double re = hsum(acc_re);
    const double im = hsum(acc_im);
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

double norm2_avx2(const cplx *psi, std::size_t dim) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= dim; i += 2) {
        const __m256d v = load2(psi + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double total = hsum(acc);
    for (; i < dim; ++i) {
        total += std::norm(psi[i]);
    }
    return total;
}

} // namespace qtn::simd::detail
