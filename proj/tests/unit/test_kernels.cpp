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
#include "qtn/simd/kernels.hpp"

#include <catch_amalgamated.hpp>

#include <bit>
#include <random>
#include <vector>

using qtn::simd::cplx;
using qtn::simd::KernelTable;

namespace {

std::vector<cplx> random_vec(std::mt19937_64 &rng, std::size_t n) {
    std::normal_distribution<double> d;
    std::vector<cplx> v(n);
    for (auto &x : v) x = {d(rng), d(rng)};
    return v;
}

double max_diff(const std::vector<cplx> &a, const std::vector<cplx> &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("scalar and AVX2 kernels agree") {
    const KernelTable &s = qtn::simd::scalar_kernels();
    const KernelTable *v = qtn::simd::avx2_kernels();
    if (v == nullptr) {
        SKIP("AVX2 kernels unavailable on this CPU/build");
    }
    std::mt19937_64 rng(1);

    SECTION("apply_1q") {
        for (int n = 1; n <= 8; ++n) {
            const std::size_t dim = std::size_t{1} << n;
            for (int q = 0; q < n; ++q) {
                auto a = random_vec(rng, dim);
                auto b = a;
                const auto m = random_vec(rng, 4);
                s.apply_1q(a.data(), dim, std::size_t{1} << q, m.data());
                v->apply_1q(b.data(), dim, std::size_t{1} << q, m.data());
                CHECK(max_diff(a, b) < 1e-13);
            }
        }
    }
    SECTION("apply_2q") {
        for (int n = 2; n <= 7; ++n) {
            const std::size_t dim = std::size_t{1} << n;
            for (int hi = 0; hi < n; ++hi) {
                for (int lo = 0; lo < n; ++lo) {
                    if (hi == lo) continue;
                    auto a = random_vec(rng, dim);
                    auto b = a;
                    const auto m = random_vec(rng, 16);
                    s.apply_2q(a.data(), dim, std::size_t{1} << hi,
                               std::size_t{1} << lo, m.data());
                    v->apply_2q(b.data(), dim, std::size_t{1} << hi,
                                std::size_t{1} << lo, m.data());
                    CHECK(max_diff(a, b) < 1e-13);
                }
            }
        }
    }
    SECTION("cgemm") {
        std::uniform_int_distribution<std::size_t> sz(1, 19);
        for (int t = 0; t < 200; ++t) {
            const std::size_t batch = sz(rng) % 3 + 1, m = sz(rng), n = sz(rng),
                              k = sz(rng);
            const bool ca = t & 1, cb = t & 2;
            const auto a = random_vec(rng, batch * m * k);
            const auto b = random_vec(rng, batch * k * n);
            std::vector<cplx> c1(batch * m * n, 7.0), c2(batch * m * n, -3.0);
            s.cgemm(batch, m, n, k, a.data(), ca, b.data(), cb, c1.data());
            v->cgemm(batch, m, n, k, a.data(), ca, b.data(), cb, c2.data());
            CHECK(max_diff(c1, c2) < 1e-12);
        }
    }
    SECTION("pauli_expval and norm2") {
        for (int n = 1; n <= 8; ++n) {
            const std::size_t dim = std::size_t{1} << n;
            const auto psi = random_vec(rng, dim);
            for (int t = 0; t < 20; ++t) {
                const std::uint64_t x = rng() & (dim - 1);
                const std::uint64_t z = rng() & (dim - 1);
                const int y = std::popcount(x & z);
                CHECK(std::abs(s.pauli_expval(psi.data(), dim, x, z, y) -
                               v->pauli_expval(psi.data(), dim, x, z, y)) <
                      1e-11);
            }
            CHECK(std::abs(s.norm2(psi.data(), dim) - v->norm2(psi.data(), dim)) <
                  1e-11);
        }
    }
}

TEST_CASE("scalar cgemm against naive product") {
    std::mt19937_64 rng(2);
    const auto &s = qtn::simd::scalar_kernels();
    const std::size_t m = 3, n = 4, k = 5;
    const auto a = random_vec(rng, m * k), b = random_vec(rng, k * n);
    std::vector<cplx> c(m * n);
    s.cgemm(1, m, n, k, a.data(), true, b.data(), false, c.data());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) acc += std::conj(a[i * k + p]) * b[p * n + j];
            CHECK(std::abs(acc - c[i * n + j]) < 1e-13);
        }
}
