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
#include "qtn/service/train_options.hpp"

#include "qtn/error.hpp"

namespace qtn::service {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string &key, const std::string &msg) {
    throw Error(ErrorCode::SchemaViolation, "/options/" + key + ": " + msg);
}

double num(const json &v, const std::string &k) {
    if (!v.is_number()) bad(k, "expected a number");
    return v.get<double>();
}

int integer(const json &v, const std::string &k) {
    if (!v.is_number_integer()) bad(k, "expected an integer");
    return v.get<int>();
}

std::string str(const json &v, const std::string &k) {
    if (!v.is_string()) bad(k, "expected a string");
    return v.get<std::string>();
}

} // namespace

vqa::TrainConfig train_config_from_json(std::string_view task, const json &options) {
    auto c = vqa::default_train_config(vqa::task_from_name(task));
    if (options.is_null()) return c;
    if (!options.is_object()) throw Error(ErrorCode::SchemaViolation, "/options: expected an object");
    for (const auto &[k, v] : options.items()) {
        if (k == "n_qubits" || k == "n") {
            c.n_qubits = integer(v, k);
            if (c.n_qubits < 1) bad(k, "must be >= 1");
        } else if (k == "depth") {
            c.ansatz.depth = integer(v, k);
        } else if (k == "ansatz") {
            const auto kind = vqa::template_kind_from_name(str(v, k));
            if (!kind) bad(k, "unknown template");
            c.ansatz.kind = *kind;
        } else if (k == "optimizer") {
            const auto o = vqa::optimizer_from_name(str(v, k));
            if (!o) bad(k, "unknown optimizer");
            c.optimizer = *o;
        } else if (k == "learning_rate" || k == "lr") {
            c.learning_rate = num(v, k);
        } else if (k == "final_learning_rate") {
            if (v.is_null()) {
                c.final_learning_rate.reset();
            } else {
                c.final_learning_rate = num(v, k);
            }
        } else if (k == "iterations" || k == "epochs") {
            c.iterations = integer(v, k);
        } else if (k == "grad_method") {
            const auto g = grad_method_from_name(str(v, k));
            if (!g) bad(k, "unknown gradient method");
            c.grad = *g;
        } else if (k == "mode") {
            const auto m = mode_from_name(str(v, k));
            if (!m) bad(k, "unknown mode");
            c.mode = *m;
        } else if (k == "seed") {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
                bad(k, "expected a non-negative integer");
            }
            c.seed = v.get<std::uint64_t>();
        } else if (k == "init_scale") {
            c.init_scale = num(v, k);
        } else if (k == "hamiltonian") {
            c.hamiltonian = vqa::parse_pauli_sum(str(v, k));
        } else if (k == "workers") {
            c.workers = static_cast<unsigned>(std::max(1, integer(v, k)));
        } else if (k == "qnn_depth") {
            c.mbl.qnn_depth = integer(v, k);
        } else if (k == "n_train") {
            c.mbl.n_train = integer(v, k);
        } else if (k == "n_test") {
            c.mbl.n_test = integer(v, k);
        } else if (k == "t_d") {
            c.mbl.t_d = num(v, k);
        } else if (k == "g") {
            c.mbl.g = num(v, k);
        } else if (k == "block_time") {
            c.mbl.block_time = num(v, k);
        } else {
            bad(k, "unknown option");
        }
    }
    if (c.task == vqa::TaskKind::VQE && c.hamiltonian && !options.contains("n_qubits") &&
        !options.contains("n")) {
        c.n_qubits = c.hamiltonian->n_qubits;
    }
    return c;
}

} // namespace qtn::service
