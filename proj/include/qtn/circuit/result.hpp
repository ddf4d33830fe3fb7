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

#include "qtn/circuit/circuit.hpp"

#include <vector>

namespace qtn {

/// Output of one measurement. Expectations carry a single value,
/// probabilities 2^k values, the state its amplitudes.
struct MeasurementResult {
    MeasurementKind kind = MeasurementKind::Expectation;
    std::vector<double> values;
    std::vector<cplx> amplitudes;

    [[nodiscard]] double scalar() const { return values.at(0); }

    friend bool operator==(const MeasurementResult &,
                           const MeasurementResult &) = default;
};

/// Row-major dense Jacobian of the real outputs w.r.t. the inputs.
struct Jacobian {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Jacobian() = default;
    Jacobian(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    double &operator()(std::size_t r, std::size_t c) {
        return data[r * cols + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        return data[r * cols + c];
    }
};

} // namespace qtn
