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
 * Dense complex tensors and labeled pairwise contraction. A contraction is
 * lowered to permute -> batched GEMM -> permute.
 */
#pragma once

#include "qtn/circuit/gates.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qtn::tn {

/// Edge identifier inside a tensor network.
using Label = int;

struct DenseTensor {
    std::vector<std::size_t> shape;
    std::vector<cplx> values;

    DenseTensor() : values{cplx{0.0, 0.0}} {}
    explicit DenseTensor(std::vector<std::size_t> shape);
    DenseTensor(std::vector<std::size_t> shape, std::vector<cplx> values);

    static DenseTensor scalar(cplx v);

    [[nodiscard]] std::size_t rank() const { return shape.size(); }
    [[nodiscard]] std::size_t size() const { return values.size(); }

    friend bool operator==(const DenseTensor &, const DenseTensor &) = default;
};

std::size_t shape_size(std::span<const std::size_t> shape);

/// Output axis i takes input axis perm[i]. Conjugates while copying if asked.
DenseTensor permute(const DenseTensor &t, std::span<const int> perm,
                    bool conj = false);

/// Element-wise conjugate.
DenseTensor conjugate(const DenseTensor &t);

/// One pairwise contraction. Labels shared by lhs and rhs are summed unless
/// listed in `out` (then they are batch labels of a hyperedge). Every label
/// of `out` must occur in lhs or rhs; labels of one operand missing from
/// `out` must occur in the other.
struct PairSpec {
    std::vector<Label> lhs;
    std::vector<Label> rhs;
    std::vector<Label> out;
    bool conj_lhs = false;
    bool conj_rhs = false;
};

/// GEMM lowering of a PairSpec for fixed operand shapes.
class PairPlan {
  public:
    PairPlan(const PairSpec &spec, std::span<const std::size_t> lhs_shape,
             std::span<const std::size_t> rhs_shape);

    [[nodiscard]] DenseTensor execute(const DenseTensor &a,
                                      const DenseTensor &b) const;

    [[nodiscard]] const std::vector<std::size_t> &out_shape() const {
        return out_shape_;
    }
    /// Product of output dimensions (batch included).
    [[nodiscard]] std::uint64_t p() const { return batch_ * m_ * n_; }
    /// Product of contracted dimensions.
    [[nodiscard]] std::uint64_t q() const { return k_; }
    [[nodiscard]] double flops() const {
        return static_cast<double>(p()) * (2.0 * static_cast<double>(q()) - 1.0);
    }

  private:
    bool conj_a_;
    bool conj_b_;
    std::vector<int> perm_a_; ///< to [batch, left, contracted]
    std::vector<int> perm_b_; ///< to [batch, contracted, right]
    std::vector<int> perm_c_; ///< [batch, left, right] to out
    bool id_a_ = false, id_b_ = false, id_c_ = false;
    std::vector<std::size_t> out_shape_;
    std::vector<std::size_t> gemm_shape_;
    std::size_t batch_ = 1, m_ = 1, n_ = 1, k_ = 1;
    std::size_t lhs_size_ = 1, rhs_size_ = 1;
};

DenseTensor contract_pair(const DenseTensor &a, const DenseTensor &b,
                          const PairSpec &spec);

/// Index-loop reference that counts every scalar multiply and add into
/// `flop_count` (a sum of q terms costs q multiplies and q-1 adds).
DenseTensor contract_pair_naive(const DenseTensor &a, const DenseTensor &b,
                                const PairSpec &spec,
                                std::uint64_t *flop_count = nullptr);

/// Sum over all entries of a (x) b (same shape, no conjugation).
cplx inner_product(const DenseTensor &a, const DenseTensor &b);

} // namespace qtn::tn
