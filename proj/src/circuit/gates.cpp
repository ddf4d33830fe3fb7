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
#include "qtn/circuit/gates.hpp"

#include "qtn/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace qtn {

namespace {

constexpr std::array<GateInfo, 19> kGateTable{{
    {GateKind::I, "I", 1, 0, 0},
    {GateKind::X, "X", 1, 0, 0},
    {GateKind::Y, "Y", 1, 0, 0},
    {GateKind::Z, "Z", 1, 0, 0},
    {GateKind::H, "H", 1, 0, 0},
    {GateKind::S, "S", 1, 0, 0},
    {GateKind::T, "T", 1, 0, 0},
    {GateKind::RX, "RX", 1, 1, 2},
    {GateKind::RY, "RY", 1, 1, 2},
    {GateKind::RZ, "RZ", 1, 1, 2},
    {GateKind::Rot, "Rot", 1, 3, 2},
    {GateKind::PhaseShift, "PhaseShift", 1, 1, 2},
    {GateKind::CNOT, "CNOT", 2, 0, 0},
    {GateKind::CZ, "CZ", 2, 0, 0},
    {GateKind::SWAP, "SWAP", 2, 0, 0},
    {GateKind::CRX, "CRX", 2, 1, 4},
    {GateKind::CRY, "CRY", 2, 1, 4},
    {GateKind::CRZ, "CRZ", 2, 1, 4},
    {GateKind::Unitary, "Unitary", 0, 0, 0},
}};

constexpr std::array<GateKind, 18> kPalette{
    GateKind::I,   GateKind::X,          GateKind::Y,    GateKind::Z,
    GateKind::H,   GateKind::S,          GateKind::T,    GateKind::RX,
    GateKind::RY,  GateKind::RZ,         GateKind::Rot,  GateKind::PhaseShift,
    GateKind::CNOT, GateKind::CZ,        GateKind::SWAP, GateKind::CRX,
    GateKind::CRY, GateKind::CRZ,
};

constexpr cplx kI{0.0, 1.0};

std::vector<cplx> rx(double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    return {c, -kI * s, -kI * s, c};
}
std::vector<cplx> ry(double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    return {c, -s, s, c};
}
std::vector<cplx> rz(double t) {
    return {std::exp(-kI * (t / 2)), 0.0, 0.0, std::exp(kI * (t / 2))};
}
std::vector<cplx> drx(double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    return {-s / 2, -kI * (c / 2), -kI * (c / 2), -s / 2};
}
std::vector<cplx> dry(double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    return {-s / 2, -c / 2, c / 2, -s / 2};
}
std::vector<cplx> drz(double t) {
    return {-kI / 2.0 * std::exp(-kI * (t / 2)), 0.0, 0.0,
            kI / 2.0 * std::exp(kI * (t / 2))};
}

// |0><0| (x) I + |1><1| (x) U
std::vector<cplx> controlled(const std::vector<cplx> &u, bool derivative) {
    std::vector<cplx> m(16, 0.0);
    if (!derivative) {
        m[0] = 1.0;
        m[5] = 1.0;
    }
    m[10] = u[0];
    m[11] = u[1];
    m[14] = u[2];
    m[15] = u[3];
    return m;
}

void require_angles(GateKind kind, std::span<const double> angles) {
    const auto &info = gate_info(kind);
    if (static_cast<int>(angles.size()) != info.param_count) {
        throw Error(ErrorCode::ParamCountMismatch,
                    std::string(info.name) + " expects " +
                        std::to_string(info.param_count) + " angle(s), got " +
                        std::to_string(angles.size()));
    }
}

} // namespace

const GateInfo &gate_info(GateKind kind) {
    return kGateTable.at(static_cast<std::size_t>(kind));
}

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
    for (const auto &info : kGateTable) {
        if (info.name == name) {
            return info.kind;
        }
    }
    return std::nullopt;
}

std::span<const GateKind> gate_palette() { return kPalette; }

std::vector<cplx> matmul(std::span<const cplx> a, std::span<const cplx> b) {
    const auto dim = static_cast<std::size_t>(
        std::llround(std::sqrt(static_cast<double>(a.size()))));
    std::vector<cplx> out(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
            for (std::size_t j = 0; j < dim; ++j) {
                out[i * dim + j] += a[i * dim + k] * b[k * dim + j];
            }
        }
    }
    return out;
}

std::vector<cplx> dagger(std::span<const cplx> m) {
    const auto dim = static_cast<std::size_t>(
        std::llround(std::sqrt(static_cast<double>(m.size()))));
    std::vector<cplx> out(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            out[j * dim + i] = std::conj(m[i * dim + j]);
        }
    }
    return out;
}

std::vector<cplx> gate_matrix(GateKind kind, std::span<const double> angles) {
    require_angles(kind, angles);
    const double r2 = std::numbers::sqrt2 / 2;
    switch (kind) {
    case GateKind::I:
        return {1.0, 0.0, 0.0, 1.0};
    case GateKind::X:
        return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Y:
        return {0.0, -kI, kI, 0.0};
    case GateKind::Z:
        return {1.0, 0.0, 0.0, -1.0};
    case GateKind::H:
        return {r2, r2, r2, -r2};
    case GateKind::S:
        return {1.0, 0.0, 0.0, kI};
    case GateKind::T:
        return {1.0, 0.0, 0.0, std::exp(kI * (std::numbers::pi / 4))};
    case GateKind::RX:
        return rx(angles[0]);
    case GateKind::RY:
        return ry(angles[0]);
    case GateKind::RZ:
        return rz(angles[0]);
    case GateKind::Rot: {
        // Rot(phi, theta, omega) = RZ(omega) RY(theta) RZ(phi)
        return matmul(rz(angles[2]), matmul(ry(angles[1]), rz(angles[0])));
    }
    case GateKind::PhaseShift:
        return {1.0, 0.0, 0.0, std::exp(kI * angles[0])};
    case GateKind::CNOT:
        return controlled({0.0, 1.0, 1.0, 0.0}, false);
    case GateKind::CZ:
        return controlled({1.0, 0.0, 0.0, -1.0}, false);
    case GateKind::SWAP: {
        std::vector<cplx> m(16, 0.0);
        m[0] = m[6] = m[9] = m[15] = 1.0;
        return m;
    }
    case GateKind::CRX:
        return controlled(rx(angles[0]), false);
    case GateKind::CRY:
        return controlled(ry(angles[0]), false);
    case GateKind::CRZ:
        return controlled(rz(angles[0]), false);
    case GateKind::Unitary:
        break;
    }
    throw Error(ErrorCode::InvalidArgument,
                "Unitary gates carry their own matrix");
}

std::vector<cplx> gate_matrix_derivative(GateKind kind,
                                         std::span<const double> angles,
                                         int which) {
    require_angles(kind, angles);
    if (which < 0 || which >= gate_info(kind).param_count) {
        throw Error(ErrorCode::InvalidArgument,
                    "derivative index out of range for " +
                        std::string(gate_info(kind).name));
    }
    switch (kind) {
    case GateKind::RX:
        return drx(angles[0]);
    case GateKind::RY:
        return dry(angles[0]);
    case GateKind::RZ:
        return drz(angles[0]);
    case GateKind::Rot: {
        const auto a = which == 2 ? drz(angles[2]) : rz(angles[2]);
        const auto b = which == 1 ? dry(angles[1]) : ry(angles[1]);
        const auto c = which == 0 ? drz(angles[0]) : rz(angles[0]);
        return matmul(a, matmul(b, c));
    }
    case GateKind::PhaseShift:
        return {0.0, 0.0, 0.0, kI * std::exp(kI * angles[0])};
    case GateKind::CRX:
        return controlled(drx(angles[0]), true);
    case GateKind::CRY:
        return controlled(dry(angles[0]), true);
    case GateKind::CRZ:
        return controlled(drz(angles[0]), true);
    default:
        break;
    }
    throw Error(ErrorCode::InvalidArgument,
                std::string(gate_info(kind).name) + " has no parameters");
}

GateStructure gate_structure(GateKind kind) {
    // 1q axes: (out=0, in=1); 2q axes: (out0=0, out1=1, in0=2, in1=3)
    switch (kind) {
    case GateKind::I:
    case GateKind::Z:
    case GateKind::S:
    case GateKind::T:
    case GateKind::RZ:
    case GateKind::PhaseShift:
        return {{{0, 1}}, {}};
    case GateKind::X:
    case GateKind::Y:
        return {{}, {{0, 1}}};
    case GateKind::CNOT:
    case GateKind::CRX:
    case GateKind::CRY:
        return {{{0, 2}}, {}};
    case GateKind::CZ:
    case GateKind::CRZ:
        return {{{0, 2}, {1, 3}}, {}};
    case GateKind::SWAP:
        return {{{0, 3}, {1, 2}}, {}};
    default:
        return {};
    }
}

} // namespace qtn
