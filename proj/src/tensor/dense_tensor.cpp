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
#include "qtn/tensor/dense_tensor.hpp"

#include "qtn/error.hpp"
#include "qtn/simd/kernels.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace qtn::tn {

namespace {

std::vector<std::size_t> strides_of(std::span<const std::size_t> shape) {
    std::vector<std::size_t> s(shape.size(), 1);
    for (std::size_t i = shape.size(); i-- > 1;) {
        s[i - 1] = s[i] * shape[i];
    }
    return s;
}

int position(std::span<const Label> labels, Label l) {
    const auto it = std::find(labels.begin(), labels.end(), l);
    return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

bool is_identity(std::span<const int> perm) {
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (perm[i] != static_cast<int>(i)) return false;
    }
    return true;
}

[[noreturn]] void shape_error(const std::string &msg) {
    throw Error(ErrorCode::ShapeMismatch, msg);
}

void check_unique(std::span<const Label> labels, const char *what) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (labels[i] == labels[j]) {
                shape_error(std::string(what) + " repeats label " +
                            std::to_string(labels[i]));
            }
        }
    }
}

} // namespace

std::size_t shape_size(std::span<const std::size_t> shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                           std::multiplies<>());
}

DenseTensor::DenseTensor(std::vector<std::size_t> s)
    : shape(std::move(s)), values(shape_size(shape), cplx{0.0, 0.0}) {}

DenseTensor::DenseTensor(std::vector<std::size_t> s, std::vector<cplx> v)
    : shape(std::move(s)), values(std::move(v)) {
    if (values.size() != shape_size(shape)) {
        shape_error("value count " + std::to_string(values.size()) +
                    " does not match shape");
    }
}

DenseTensor DenseTensor::scalar(cplx v) { return DenseTensor({}, {v}); }

DenseTensor conjugate(const DenseTensor &t) {
    DenseTensor out = t;
    for (auto &v : out.values) v = std::conj(v);
    return out;
}

DenseTensor permute(const DenseTensor &t, std::span<const int> perm,
                    bool conj) {
    const std::size_t r = t.rank();
    if (perm.size() != r) {
        shape_error("permutation rank mismatch");
    }
    if (is_identity(perm)) {
        return conj ? conjugate(t) : t;
    }
    const auto in_strides = strides_of(t.shape);
    std::vector<std::size_t> out_shape(r), step(r);
    for (std::size_t i = 0; i < r; ++i) {
        out_shape[i] = t.shape[perm[i]];
        step[i] = in_strides[perm[i]];
    }
    DenseTensor out(out_shape);
    const std::size_t inner = out_shape[r - 1];
    const std::size_t inner_step = step[r - 1];
    std::vector<std::size_t> counter(r, 0);
    std::size_t src = 0;
    cplx *dst = out.values.data();
    const cplx *in = t.values.data();
    const std::size_t outer = out.size() / inner;
    for (std::size_t o = 0; o < outer; ++o) {
        if (conj) {
            for (std::size_t i = 0; i < inner; ++i) {
                *dst++ = std::conj(in[src + i * inner_step]);
            }
        } else {
            for (std::size_t i = 0; i < inner; ++i) {
                *dst++ = in[src + i * inner_step];
            }
        }
        // advance the odometer over axes 0..r-2
        for (std::size_t ax = r - 1; ax-- > 0;) {
            src += step[ax];
            if (++counter[ax] < out_shape[ax]) break;
            src -= step[ax] * out_shape[ax];
            counter[ax] = 0;
        }
    }
    return out;
}

PairPlan::PairPlan(const PairSpec &spec, std::span<const std::size_t> sa,
                   std::span<const std::size_t> sb)
    : conj_a_(spec.conj_lhs), conj_b_(spec.conj_rhs) {
    if (spec.lhs.size() != sa.size() || spec.rhs.size() != sb.size()) {
        shape_error("label count does not match operand rank");
    }
    check_unique(spec.lhs, "lhs");
    check_unique(spec.rhs, "rhs");
    check_unique(spec.out, "out");
    lhs_size_ = shape_size(sa);
    rhs_size_ = shape_size(sb);

    std::vector<int> batch_a, batch_b, left, right, con_a, con_b;
    std::vector<Label> gemm_out;
    for (Label l : spec.out) {
        const int pa = position(spec.lhs, l), pb = position(spec.rhs, l);
        if (pa >= 0 && pb >= 0) {
            if (sa[pa] != sb[pb]) shape_error("dimension mismatch on label " + std::to_string(l));
            batch_a.push_back(pa);
            batch_b.push_back(pb);
            batch_ *= sa[pa];
        } else if (pa < 0 && pb < 0) {
            shape_error("output label " + std::to_string(l) + " not in operands");
        }
    }
    for (Label l : spec.out) {
        const int pa = position(spec.lhs, l), pb = position(spec.rhs, l);
        if (pa >= 0 && pb < 0) {
            left.push_back(pa);
            m_ *= sa[pa];
        }
    }
    for (Label l : spec.out) {
        const int pa = position(spec.lhs, l), pb = position(spec.rhs, l);
        if (pb >= 0 && pa < 0) {
            right.push_back(pb);
            n_ *= sb[pb];
        }
    }
    for (std::size_t i = 0; i < spec.lhs.size(); ++i) {
        const Label l = spec.lhs[i];
        if (position(spec.out, l) >= 0) continue;
        const int pb = position(spec.rhs, l);
        if (pb < 0) {
            shape_error("label " + std::to_string(l) +
                        " appears only in lhs and not in the output");
        }
        if (sa[i] != sb[pb]) shape_error("dimension mismatch on label " + std::to_string(l));
        con_a.push_back(static_cast<int>(i));
        con_b.push_back(pb);
        k_ *= sa[i];
    }
    for (std::size_t i = 0; i < spec.rhs.size(); ++i) {
        const Label l = spec.rhs[i];
        if (position(spec.out, l) < 0 && position(spec.lhs, l) < 0) {
            shape_error("label " + std::to_string(l) +
                        " appears only in rhs and not in the output");
        }
    }

    perm_a_ = batch_a;
    perm_a_.insert(perm_a_.end(), left.begin(), left.end());
    perm_a_.insert(perm_a_.end(), con_a.begin(), con_a.end());
    perm_b_ = batch_b;
    perm_b_.insert(perm_b_.end(), con_b.begin(), con_b.end());
    perm_b_.insert(perm_b_.end(), right.begin(), right.end());

    // gemm output axis labels: batch, left, right
    for (int pa : batch_a) gemm_out.push_back(spec.lhs[pa]);
    for (int pa : left) gemm_out.push_back(spec.lhs[pa]);
    for (int pb : right) gemm_out.push_back(spec.rhs[pb]);
    for (Label l : gemm_out) {
        const int pa = position(spec.lhs, l);
        gemm_shape_.push_back(pa >= 0 ? sa[pa] : sb[position(spec.rhs, l)]);
    }
    perm_c_.resize(spec.out.size());
    out_shape_.resize(spec.out.size());
    for (std::size_t i = 0; i < spec.out.size(); ++i) {
        perm_c_[i] = position(gemm_out, spec.out[i]);
        out_shape_[i] = gemm_shape_[perm_c_[i]];
    }
    id_a_ = is_identity(perm_a_);
    id_b_ = is_identity(perm_b_);
    id_c_ = is_identity(perm_c_);
}

DenseTensor PairPlan::execute(const DenseTensor &a, const DenseTensor &b) const {
    if (a.size() != lhs_size_ || b.size() != rhs_size_) {
        shape_error("operand sizes do not match the plan");
    }
    // conjugation is folded into the GEMM; permutes copy verbatim
    DenseTensor pa_store, pb_store;
    const DenseTensor *pa = &a, *pb = &b;
    if (!id_a_) {
        pa_store = permute(a, perm_a_);
        pa = &pa_store;
    }
    if (!id_b_) {
        pb_store = permute(b, perm_b_);
        pb = &pb_store;
    }
    DenseTensor c(gemm_shape_);
    simd::kernels().cgemm(batch_, m_, n_, k_, pa->values.data(), conj_a_,
                          pb->values.data(), conj_b_, c.values.data());
    if (id_c_) {
        return c;
    }
    return permute(c, perm_c_);
}

DenseTensor contract_pair(const DenseTensor &a, const DenseTensor &b,
                          const PairSpec &spec) {
    return PairPlan(spec, a.shape, b.shape).execute(a, b);
}

DenseTensor contract_pair_naive(const DenseTensor &a, const DenseTensor &b,
                                const PairSpec &spec,
                                std::uint64_t *flop_count) {
    // Validate through the plan (same error semantics).
    const PairPlan plan(spec, a.shape, b.shape);
    std::vector<Label> summed;
    for (Label l : spec.lhs) {
        if (position(spec.out, l) < 0) summed.push_back(l);
    }
    std::vector<Label> all = spec.out;
    all.insert(all.end(), summed.begin(), summed.end());
    std::vector<std::size_t> dims;
    for (Label l : all) {
        const int pa = position(spec.lhs, l);
        dims.push_back(pa >= 0 ? a.shape[pa] : b.shape[position(spec.rhs, l)]);
    }
    const auto sa = strides_of(a.shape), sb = strides_of(b.shape);
    std::vector<std::size_t> ca(all.size(), 0), cb(all.size(), 0);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const int pa = position(spec.lhs, all[i]);
        const int pb = position(spec.rhs, all[i]);
        if (pa >= 0) ca[i] = sa[pa];
        if (pb >= 0) cb[i] = sb[pb];
    }
    const std::size_t n_out = spec.out.size();
    DenseTensor out(plan.out_shape());
    std::uint64_t flops = 0;
    std::vector<std::size_t> idx(all.size(), 0);
    for (std::size_t o = 0; o < out.size(); ++o) {
        // decode output multi-index
        std::size_t rem = o;
        for (std::size_t i = n_out; i-- > 0;) {
            idx[i] = rem % dims[i];
            rem /= dims[i];
        }
        std::size_t q = 1;
        for (std::size_t i = n_out; i < all.size(); ++i) q *= dims[i];
        cplx acc{0.0, 0.0};
        for (std::size_t s = 0; s < q; ++s) {
            std::size_t r2 = s;
            for (std::size_t i = all.size(); i-- > n_out;) {
                idx[i] = r2 % dims[i];
                r2 /= dims[i];
            }
            std::size_t oa = 0, ob = 0;
            for (std::size_t i = 0; i < all.size(); ++i) {
                oa += idx[i] * ca[i];
                ob += idx[i] * cb[i];
            }
            cplx x = a.values[oa], y = b.values[ob];
            if (spec.conj_lhs) x = std::conj(x);
            if (spec.conj_rhs) y = std::conj(y);
            if (s == 0) {
                acc = x * y;
                flops += 1;
            } else {
                acc += x * y;
                flops += 2;
            }
        }
        out.values[o] = acc;
    }
    if (flop_count) *flop_count += flops;
    return out;
}

cplx inner_product(const DenseTensor &a, const DenseTensor &b) {
    if (a.size() != b.size()) shape_error("inner product of unequal sizes");
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += a.values[i] * b.values[i];
    return acc;
}

} // namespace qtn::tn
