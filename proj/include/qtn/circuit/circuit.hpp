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
 * Immutable circuit representation: gate list, measurements, optional
 * initial state and the flat parameter vector layout.
 *
 * Basis convention: qubit 0 is the most significant bit, so the basis index
 * of |q0 q1 ... q_{n-1}> is sum_i q_i 2^(n-1-i).
 */
#pragma once

#include "qtn/circuit/gates.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace qtn {

/// Reference into the flat input parameter vector. The gate sees
/// `scale * params[slot]`.
struct ParamRef {
    std::size_t slot = 0;
    double scale = 1.0;
    bool trainable = true;

    friend bool operator==(const ParamRef &, const ParamRef &) = default;
};

/// A gate angle is either bound to an input slot or a literal (radians).
using GateParam = std::variant<ParamRef, double>;

struct GateInstance {
    GateKind kind = GateKind::I;
    std::vector<int> qubits;
    std::vector<GateParam> params;
    /// Only for GateKind::Unitary: row-major 2^k x 2^k matrix.
    std::shared_ptr<const std::vector<cplx>> matrix;

    [[nodiscard]] bool is_parametric() const;

    friend bool operator==(const GateInstance &a, const GateInstance &b);
};

GateInstance make_gate(GateKind kind, std::vector<int> qubits,
                       std::vector<GateParam> params = {});
GateInstance make_unitary(std::vector<int> qubits, std::vector<cplx> matrix);

/// Tensor product of single-qubit Paulis with a real coefficient. `ops` has
/// one character from "IXYZ" per circuit qubit.
struct PauliString {
    std::string ops;
    double coeff = 1.0;

    friend bool operator==(const PauliString &, const PauliString &) = default;
};

enum class MeasurementKind { Expectation, Probabilities, State };

struct Measurement {
    MeasurementKind kind = MeasurementKind::Expectation;
    PauliString observable;  ///< Expectation only
    std::vector<int> qubits; ///< Probabilities only

    friend bool operator==(const Measurement &, const Measurement &) = default;
};

Measurement expval(PauliString observable);
Measurement probs(std::vector<int> qubits);
Measurement state();

/// Flattened gate angles for one evaluation: `values[offset[g] + j]` is the
/// j-th angle of gate g.
struct BoundAngles {
    std::vector<double> values;
    std::vector<std::size_t> offset;

    [[nodiscard]] std::span<const double> of(std::size_t gate) const {
        return std::span<const double>(values).subspan(
            offset[gate], offset[gate + 1] - offset[gate]);
    }
};

/// One ParamRef occurrence: angle `angle_index` (into BoundAngles::values)
/// equals `scale * params[slot]`.
struct ParamUse {
    std::size_t gate;
    std::size_t angle_index;
    std::size_t slot;
    double scale;
};

class Circuit {
  public:
    /// Validates and freezes a circuit. `param_count` is the length of the
    /// flat parameter vector expected by evaluate(); every ParamRef slot must
    /// be smaller.
    static Circuit build(int n_qubits, std::vector<GateInstance> gates,
                         std::vector<Measurement> measurements,
                         std::size_t param_count,
                         std::optional<std::vector<cplx>> init_state = {});

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] const std::vector<GateInstance> &gates() const {
        return gates_;
    }
    [[nodiscard]] const std::vector<Measurement> &measurements() const {
        return measurements_;
    }
    [[nodiscard]] std::size_t param_count() const { return param_count_; }
    [[nodiscard]] const std::optional<std::vector<cplx>> &init_state() const {
        return init_state_;
    }

    /// Resolves every gate angle for the given input vector.
    [[nodiscard]] BoundAngles bind(std::span<const double> params) const;
    [[nodiscard]] const std::vector<ParamUse> &param_uses() const {
        return param_uses_;
    }

    /// Number of real outputs produced by measurement m (1, 2^k, or 2*2^n
    /// for the state as interleaved re/im).
    [[nodiscard]] std::size_t output_size(std::size_t m) const;

    friend bool operator==(const Circuit &a, const Circuit &b);

  private:
    Circuit() = default;

    int n_qubits_ = 0;
    std::vector<GateInstance> gates_;
    std::vector<Measurement> measurements_;
    std::size_t param_count_ = 0;
    std::optional<std::vector<cplx>> init_state_;
    std::vector<ParamUse> param_uses_;
    std::vector<std::size_t> angle_offset_;
};

} // namespace qtn
