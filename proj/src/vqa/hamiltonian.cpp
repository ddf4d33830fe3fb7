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
#include "qtn/vqa/hamiltonian.hpp"

#include "qtn/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qtn::vqa {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string &msg) {
    throw Error(ErrorCode::HamiltonianParseError, "line " + std::to_string(line) + ": " + msg);
}

} // namespace

PauliSum parse_pauli_sum(std::string_view text) {
    PauliSum out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string coeff_tok, ops, extra;
        if (!(ls >> coeff_tok) || coeff_tok[0] == '#') continue;
        if (!(ls >> ops)) parse_error(lineno, "expected \"coeff PAULIS\"");
        if (ls >> extra) parse_error(lineno, "trailing text '" + extra + "'");
        double c = 0;
        const auto *end = coeff_tok.data() + coeff_tok.size();
        const auto res = std::from_chars(coeff_tok.data(), end, c);
        if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(c)) {
            parse_error(lineno, "bad coefficient '" + coeff_tok + "'");
        }
        if (ops.find_first_not_of("IXYZ") != std::string::npos) {
            parse_error(lineno, "Pauli string must use IXYZ");
        }
        if (out.terms.empty()) {
            out.n_qubits = static_cast<int>(ops.size());
        } else if (static_cast<int>(ops.size()) != out.n_qubits) {
            parse_error(lineno, "term length " + std::to_string(ops.size()) + " != " +
                                    std::to_string(out.n_qubits));
        }
        out.terms.push_back(PauliString{ops, c});
    }
    if (out.terms.empty()) parse_error(lineno, "no terms");
    return out;
}

PauliSum load_pauli_sum(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::HamiltonianParseError, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_pauli_sum(ss.str());
}

Eigen::MatrixXcd dense_matrix(const PauliSum &h) {
    if (h.n_qubits > kMaxDenseQubits) {
        throw Error(ErrorCode::TooManyQubitsForExactEvolution,
                    std::to_string(h.n_qubits) + " qubits exceed the dense limit");
    }
    const std::size_t dim = std::size_t{1} << h.n_qubits;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto &t : h.terms) {
        // P|col> = phase |col ^ flip>
        std::size_t flip = 0;
        for (int q = 0; q < h.n_qubits; ++q) {
            if (t.ops[q] == 'X' || t.ops[q] == 'Y') flip |= std::size_t{1} << (h.n_qubits - 1 - q);
        }
        for (std::size_t col = 0; col < dim; ++col) {
            cplx phase = t.coeff;
            for (int q = 0; q < h.n_qubits; ++q) {
                const bool one = (col >> (h.n_qubits - 1 - q)) & 1u;
                switch (t.ops[q]) {
                case 'Z':
                    if (one) phase = -phase;
                    break;
                case 'Y':
                    phase *= one ? cplx{0, -1} : cplx{0, 1};
                    break;
                default:
                    break;
                }
            }
            m(col ^ flip, col) += phase;
        }
    }
    return m;
}

double ground_energy(const PauliSum &h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_matrix(h), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

} // namespace qtn::vqa
