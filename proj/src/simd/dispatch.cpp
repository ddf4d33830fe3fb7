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

#include <cstdlib>
#include <string_view>

namespace qtn::simd {

namespace {

bool force_scalar() {
    const char *env = std::getenv("QTN_FORCE_SCALAR");
    return env != nullptr && std::string_view(env) != "0" &&
           std::string_view(env) != "";
}

bool cpu_has_avx2() {
#if defined(QTN_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

} // namespace

const KernelTable &scalar_kernels() {
    static const KernelTable table{
        "scalar",
        &detail::apply_1q_scalar,
        &detail::apply_2q_scalar,
        &detail::cgemm_scalar,
        &detail::pauli_expval_scalar,
        &detail::norm2_scalar,
    };
    return table;
}

const KernelTable *avx2_kernels() {
#if defined(QTN_HAVE_AVX2)
    static const KernelTable table{
        "avx2",
        &detail::apply_1q_avx2,
        &detail::apply_2q_avx2,
        &detail::cgemm_avx2,
        &detail::pauli_expval_avx2,
        &detail::norm2_avx2,
    };
    static const bool usable = cpu_has_avx2();
    return usable ? &table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable &kernels() {
    static const KernelTable &selected = []() -> const KernelTable & {
        if (!force_scalar()) {
            if (const KernelTable *avx = avx2_kernels()) {
                return *avx;
            }
        }
        return scalar_kernels();
    }();
    return selected;
}

} // namespace qtn::simd
