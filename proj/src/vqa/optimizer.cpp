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
#include "qtn/vqa/optimizer.hpp"

#include "qtn/error.hpp"

#include <cmath>

namespace qtn::vqa {

std::optional<OptimizerKind> optimizer_from_name(std::string_view s) {
    if (s == "gd" || s == "sgd" || s == "gradient-descent") return OptimizerKind::GradientDescent;
    if (s == "adam") return OptimizerKind::Adam;
    return std::nullopt;
}

std::string_view to_string(OptimizerKind k) {
    return k == OptimizerKind::Adam ? "adam" : "gd";
}

Optimizer::Optimizer(OptimizerKind kind, double lr, double beta1, double beta2, double eps)
    : kind_(kind), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    if (!(lr > 0) || !std::isfinite(lr)) throw Error(ErrorCode::InvalidArgument, "learning rate must be > 0");
}

void Optimizer::step(std::span<double> params, std::span<const double> grad) {
    if (grad.size() != params.size() || (t_ > 0 && m_.size() != params.size())) {
        throw Error(ErrorCode::InvalidArgument, "parameter vector length changed");
    }
    ++t_;
    if (kind_ == OptimizerKind::GradientDescent) {
        if (m_.empty()) m_.resize(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr_ * grad[i];
        return;
    }
    if (m_.empty()) {
        m_.assign(params.size(), 0.0);
        v_.assign(params.size(), 0.0);
    }
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1 - beta1_) * grad[i];
        v_[i] = beta2_ * v_[i] + (1 - beta2_) * grad[i] * grad[i];
        params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
    }
}

} // namespace qtn::vqa
