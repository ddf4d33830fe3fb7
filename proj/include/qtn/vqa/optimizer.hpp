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

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace qtn::vqa {

enum class OptimizerKind { GradientDescent, Adam };

std::optional<OptimizerKind> optimizer_from_name(std::string_view s);
std::string_view to_string(OptimizerKind k);

/// First-order optimizer state. Adam uses bias-corrected moments.
class Optimizer {
  public:
    explicit Optimizer(OptimizerKind kind, double lr, double beta1 = 0.9, double beta2 = 0.999,
                       double eps = 1e-8);

    /// params -= update(grad). Throws InvalidArgument if the length changes.
    void step(std::span<double> params, std::span<const double> grad);

    [[nodiscard]] OptimizerKind kind() const { return kind_; }
    [[nodiscard]] double learning_rate() const { return lr_; }
    void set_learning_rate(double lr) { lr_ = lr; }
    [[nodiscard]] std::size_t steps() const { return t_; }

  private:
    OptimizerKind kind_;
    double lr_, beta1_, beta2_, eps_;
    std::size_t t_ = 0;
    std::vector<double> m_, v_;
};

} // namespace qtn::vqa
