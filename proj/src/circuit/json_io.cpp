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
#include "qtn/circuit/json_io.hpp"

#include "qtn/error.hpp"

#include <algorithm>

namespace qtn {

using nlohmann::json;

namespace {

class SchemaError : public std::exception {
  public:
    SchemaError(std::string pointer, std::string message)
        : pointer_(std::move(pointer)), message_(std::move(message)) {}
    const char *what() const noexcept override { return message_.c_str(); }
    const std::string &pointer() const { return pointer_; }
    const std::string &message() const { return message_; }

  private:
    std::string pointer_;
    std::string message_;
};

[[noreturn]] void fail(const std::string &ptr, const std::string &msg) {
    throw SchemaError(ptr.empty() ? "/" : ptr, msg);
}

const json &field(const json &obj, const std::string &ptr,
                  const char *name) {
    if (!obj.is_object()) {
        fail(ptr, "expected an object");
    }
    auto it = obj.find(name);
    if (it == obj.end()) {
        fail(ptr + "/" + name, "missing required field");
    }
    return *it;
}

long long as_int(const json &v, const std::string &ptr) {
    if (!v.is_number_integer()) {
        fail(ptr, "expected an integer");
    }
    return v.get<long long>();
}

double as_number(const json &v, const std::string &ptr) {
    if (!v.is_number()) {
        fail(ptr, "expected a number");
    }
    return v.get<double>();
}

std::vector<cplx> complex_array(const json &v, const std::string &ptr) {
    if (!v.is_array()) {
        fail(ptr, "expected an array of [re, im] pairs");
    }
    std::vector<cplx> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto p = ptr + "/" + std::to_string(i);
        const auto &pair = v[i];
        if (!pair.is_array() || pair.size() != 2) {
            fail(p, "expected [re, im]");
        }
        out.emplace_back(as_number(pair[0], p + "/0"),
                         as_number(pair[1], p + "/1"));
    }
    return out;
}

json complex_to_json(const std::vector<cplx> &values) {
    json arr = json::array();
    for (const auto &v : values) {
        arr.push_back(json::array({v.real(), v.imag()}));
    }
    return arr;
}

std::vector<int> qubit_list(const json &v, const std::string &ptr,
                            int n_qubits) {
    if (!v.is_array()) {
        fail(ptr, "expected an array of qubit indices");
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto p = ptr + "/" + std::to_string(i);
        const auto q = as_int(v[i], p);
        if (q < 0 || q >= n_qubits) {
            fail(p, "qubit index out of range");
        }
        if (std::find(out.begin(), out.end(), static_cast<int>(q)) !=
            out.end()) {
            fail(p, "qubit indices must be distinct");
        }
        out.push_back(static_cast<int>(q));
    }
    return out;
}

Circuit parse_document(const json &doc) {
    if (!doc.is_object()) {
        fail("", "document must be an object");
    }
    if (doc.contains("version") && as_int(doc["version"], "/version") != 1) {
        fail("/version", "unsupported schema version");
    }
    const auto n = as_int(field(doc, "", "n_qubits"), "/n_qubits");
    if (n < 1 || n > 4096) {
        fail("/n_qubits", "must be in [1, 4096]");
    }
    const int n_qubits = static_cast<int>(n);

    std::optional<std::vector<cplx>> init_state;
    if (doc.contains("init_state") && !doc["init_state"].is_null()) {
        init_state = complex_array(doc["init_state"], "/init_state");
    }

    const auto &gates_json = field(doc, "", "gates");
    if (!gates_json.is_array()) {
        fail("/gates", "expected an array");
    }
    std::vector<GateInstance> gates;
    std::size_t max_slot_plus_one = 0;
    for (std::size_t gi = 0; gi < gates_json.size(); ++gi) {
        const auto ptr = "/gates/" + std::to_string(gi);
        const auto &gj = gates_json[gi];
        const auto &kind_json = field(gj, ptr, "kind");
        if (!kind_json.is_string()) {
            fail(ptr + "/kind", "expected a string");
        }
        const auto kind = gate_kind_from_name(kind_json.get<std::string>());
        if (!kind) {
            fail(ptr + "/kind",
                 "unknown gate kind '" + kind_json.get<std::string>() + "'");
        }
        GateInstance g;
        g.kind = *kind;
        g.qubits = qubit_list(field(gj, ptr, "qubits"), ptr + "/qubits",
                              n_qubits);
        const auto &info = gate_info(g.kind);
        if (g.kind != GateKind::Unitary &&
            static_cast<int>(g.qubits.size()) != info.arity) {
            fail(ptr + "/qubits", std::string(info.name) + " acts on " +
                                      std::to_string(info.arity) +
                                      " qubit(s)");
        }
        if (gj.contains("params")) {
            const auto &pj = gj["params"];
            if (!pj.is_array()) {
                fail(ptr + "/params", "expected an array");
            }
            for (std::size_t pi = 0; pi < pj.size(); ++pi) {
                const auto pp = ptr + "/params/" + std::to_string(pi);
                if (pj[pi].is_object()) {
                    ParamRef ref;
                    const auto slot = as_int(field(pj[pi], pp, "slot"),
                                             pp + "/slot");
                    if (slot < 0) {
                        fail(pp + "/slot", "slot must be non-negative");
                    }
                    ref.slot = static_cast<std::size_t>(slot);
                    if (pj[pi].contains("scale")) {
                        ref.scale = as_number(pj[pi]["scale"], pp + "/scale");
                    }
                    if (pj[pi].contains("trainable")) {
                        if (!pj[pi]["trainable"].is_boolean()) {
                            fail(pp + "/trainable", "expected a boolean");
                        }
                        ref.trainable = pj[pi]["trainable"].get<bool>();
                    }
                    max_slot_plus_one =
                        std::max(max_slot_plus_one, ref.slot + 1);
                    g.params.emplace_back(ref);
                } else {
                    g.params.emplace_back(as_number(pj[pi], pp));
                }
            }
        }
        if (static_cast<int>(g.params.size()) != info.param_count) {
            fail(ptr + "/params", std::string(info.name) + " takes " +
                                      std::to_string(info.param_count) +
                                      " parameter(s)");
        }
        if (g.kind == GateKind::Unitary) {
            auto matrix = complex_array(field(gj, ptr, "matrix"),
                                        ptr + "/matrix");
            const std::size_t dim = std::size_t{1} << g.qubits.size();
            if (g.qubits.empty() || matrix.size() != dim * dim) {
                fail(ptr + "/matrix", "matrix size does not match qubits");
            }
            g.matrix =
                std::make_shared<const std::vector<cplx>>(std::move(matrix));
        }
        gates.push_back(std::move(g));
    }

    const auto &meas_json = field(doc, "", "measurements");
    if (!meas_json.is_array() || meas_json.empty()) {
        fail("/measurements", "expected a non-empty array");
    }
    std::vector<Measurement> measurements;
    for (std::size_t mi = 0; mi < meas_json.size(); ++mi) {
        const auto ptr = "/measurements/" + std::to_string(mi);
        const auto &mj = meas_json[mi];
        const auto &kind_json = field(mj, ptr, "kind");
        const auto kind = kind_json.is_string() ? kind_json.get<std::string>()
                                                : std::string{};
        if (kind == "expval") {
            const auto &pauli = field(mj, ptr, "pauli");
            if (!pauli.is_string()) {
                fail(ptr + "/pauli", "expected a string");
            }
            PauliString obs{pauli.get<std::string>(), 1.0};
            if (static_cast<int>(obs.ops.size()) != n_qubits ||
                obs.ops.find_first_not_of("IXYZ") != std::string::npos) {
                fail(ptr + "/pauli", "Pauli string must have n_qubits "
                                     "characters from IXYZ");
            }
            if (mj.contains("coeff")) {
                obs.coeff = as_number(mj["coeff"], ptr + "/coeff");
            }
            measurements.push_back(expval(std::move(obs)));
        } else if (kind == "probs") {
            auto qs = qubit_list(field(mj, ptr, "qubits"), ptr + "/qubits",
                                 n_qubits);
            if (qs.empty()) {
                fail(ptr + "/qubits", "expected at least one qubit");
            }
            measurements.push_back(probs(std::move(qs)));
        } else if (kind == "state") {
            measurements.push_back(state());
        } else {
            fail(ptr + "/kind", "expected one of expval, probs, state");
        }
    }

    std::size_t n_params = max_slot_plus_one;
    if (doc.contains("n_params")) {
        const auto np = as_int(doc["n_params"], "/n_params");
        if (np < 0 || static_cast<std::size_t>(np) < max_slot_plus_one) {
            fail("/n_params", "must cover every referenced slot");
        }
        n_params = static_cast<std::size_t>(np);
    }

    try {
        return Circuit::build(n_qubits, std::move(gates),
                              std::move(measurements), n_params,
                              std::move(init_state));
    } catch (const Error &e) {
        const auto ptr = e.code() == ErrorCode::BadInitStateLength ||
                                 e.code() == ErrorCode::NonUnitNorm
                             ? std::string("/init_state")
                             : std::string("/");
        fail(ptr, e.what());
    }
}

} // namespace

json circuit_to_json(const Circuit &circuit) {
    json doc;
    doc["version"] = 1;
    doc["n_qubits"] = circuit.n_qubits();
    doc["n_params"] = circuit.param_count();
    if (circuit.init_state()) {
        doc["init_state"] = complex_to_json(*circuit.init_state());
    }
    json gates = json::array();
    for (const auto &g : circuit.gates()) {
        json gj;
        gj["kind"] = std::string(gate_info(g.kind).name);
        gj["qubits"] = g.qubits;
        if (!g.params.empty()) {
            json params = json::array();
            for (const auto &p : g.params) {
                if (const auto *ref = std::get_if<ParamRef>(&p)) {
                    json r{{"slot", ref->slot}};
                    if (ref->scale != 1.0) {
                        r["scale"] = ref->scale;
                    }
                    if (!ref->trainable) {
                        r["trainable"] = false;
                    }
                    params.push_back(std::move(r));
                } else {
                    params.push_back(std::get<double>(p));
                }
            }
            gj["params"] = std::move(params);
        }
        if (g.kind == GateKind::Unitary) {
            gj["matrix"] = complex_to_json(*g.matrix);
        }
        gates.push_back(std::move(gj));
    }
    doc["gates"] = std::move(gates);
    json meas = json::array();
    for (const auto &m : circuit.measurements()) {
        switch (m.kind) {
        case MeasurementKind::Expectation: {
            json mj{{"kind", "expval"}, {"pauli", m.observable.ops}};
            if (m.observable.coeff != 1.0) {
                mj["coeff"] = m.observable.coeff;
            }
            meas.push_back(std::move(mj));
            break;
        }
        case MeasurementKind::Probabilities:
            meas.push_back({{"kind", "probs"}, {"qubits", m.qubits}});
            break;
        case MeasurementKind::State:
            meas.push_back({{"kind", "state"}});
            break;
        }
    }
    doc["measurements"] = std::move(meas);
    return doc;
}

Circuit circuit_from_json(const json &doc) {
    try {
        return parse_document(doc);
    } catch (const SchemaError &e) {
        throw Error(ErrorCode::SchemaViolation,
                    e.pointer() + ": " + e.message());
    }
}

std::string serialize_circuit(const Circuit &circuit) {
    return circuit_to_json(circuit).dump();
}

Circuit parse_circuit(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::SchemaViolation,
                    std::string("/: malformed JSON: ") + e.what());
    }
    return circuit_from_json(doc);
}

std::vector<std::pair<std::string, std::string>>
validate_circuit_json(const json &doc) {
    try {
        (void)parse_document(doc);
    } catch (const SchemaError &e) {
        return {{e.pointer(), e.message()}};
    }
    return {};
}

} // namespace qtn
