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
#include "qtn/vqa/encoding.hpp"

#include "qtn/error.hpp"

#include <cmath>

namespace qtn::vqa {

std::vector<double> basis_features(std::uint64_t value, int n_qubits) {
    std::vector<double> out(n_qubits);
    for (int q = 0; q < n_qubits; ++q) out[q] = static_cast<double>((value >> (n_qubits - 1 - q)) & 1u);
    return out;
}

CircuitPrefix encode(const EncodingSpec &spec, std::span<const double> features) {
    if (spec.n_qubits < 1) throw Error(ErrorCode::InvalidArgument, "encoding needs n_qubits >= 1");
    const std::size_t n = spec.n_qubits;
    const std::size_t dim = std::size_t{1} << n;
    const bool length_ok = spec.kind == EncodingKind::Amplitude
                               ? features.size() == spec.feature_length && spec.feature_length <= dim
                               : features.size() == n && spec.feature_length == n;
    if (!length_ok) {
        throw Error(ErrorCode::FeatureLengthMismatch,
                    "got " + std::to_string(features.size()) + " features for " +
                        std::to_string(n) + " qubits");
    }
    CircuitPrefix out;
    switch (spec.kind) {
    case EncodingKind::Basis:
        for (std::size_t q = 0; q < n; ++q) {
            if (features[q] != 0.0 && features[q] != 1.0) {
                throw Error(ErrorCode::InvalidArgument, "basis features must be 0 or 1");
            }
            if (features[q] == 1.0) out.gates.push_back(make_gate(GateKind::X, {static_cast<int>(q)}));
        }
        break;
    case EncodingKind::Amplitude: {
        double norm2 = 0;
        for (double x : features) norm2 += x * x;
        if (!(norm2 > 0) || !std::isfinite(norm2)) {
            throw Error(ErrorCode::ZeroVector, "amplitude encoding of a zero vector");
        }
        const double inv = 1.0 / std::sqrt(norm2);
        std::vector<cplx> psi(dim);
        for (std::size_t i = 0; i < features.size(); ++i) psi[i] = features[i] * inv;
        out.init_state = std::move(psi);
        break;
    }
    case EncodingKind::Angle:
        for (std::size_t q = 0; q < n; ++q) {
            const int w = static_cast<int>(q);
            out.gates.push_back(make_gate(GateKind::H, {w}));
            out.gates.push_back(make_gate(GateKind::RX, {w}, {features[q]}));
        }
        break;
    }
    return out;
}

} // namespace qtn::vqa
