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
#include "qtn/service/run_config.hpp"

#include "qtn/error.hpp"

#include <toml.hpp>

#include <fstream>
#include <sstream>

namespace qtn::service {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string &where, const std::string &msg) {
    throw Error(ErrorCode::SchemaViolation, where + ": " + msg);
}

const json &need(const json &v, bool ok, const std::string &where, const char *type) {
    if (!ok) bad(where, std::string("expected ") + type);
    return v;
}

double number(const json &v, const std::string &where) {
    return need(v, v.is_number(), where, "a number").get<double>();
}

std::uint64_t count(const json &v, const std::string &where) {
    need(v, v.is_number_integer() || v.is_number_unsigned(), where, "an integer");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0) bad(where, "must be >= 0");
    return v.get<std::uint64_t>();
}

bool flag(const json &v, const std::string &where) {
    return need(v, v.is_boolean(), where, "a boolean").get<bool>();
}

std::string text(const json &v, const std::string &where) {
    return need(v, v.is_string(), where, "a string").get<std::string>();
}

void apply_slicing(path::SlicingConfig &s, const json &doc, const std::string &where) {
    need(doc, doc.is_object(), where, "a table");
    for (const auto &[k, v] : doc.items()) {
        const auto at = where + "/" + k;
        if (k == "target_size") {
            s.target_size = number(v, at);
        } else if (k == "repeats") {
            s.repeats = static_cast<int>(count(v, at));
        } else if (k == "target_num_slices") {
            if (v.is_null()) {
                s.target_num_slices.reset();
            } else {
                s.target_num_slices = number(v, at);
            }
        } else if (k == "contract_parallel") {
            s.contract_parallel = flag(v, at);
        } else if (k == "pseudo_trials") {
            s.pseudo_trials = static_cast<int>(count(v, at));
        } else {
            bad(at, "unknown key");
        }
    }
}

json toml_to_json(const toml::node &n) {
    if (const auto *t = n.as_table()) {
        json out = json::object();
        for (const auto &[k, v] : *t) out[std::string(k.str())] = toml_to_json(v);
        return out;
    }
    if (const auto *a = n.as_array()) {
        json out = json::array();
        for (const auto &v : *a) out.push_back(toml_to_json(v));
        return out;
    }
    if (const auto *v = n.as_integer()) return v->get();
    if (const auto *v = n.as_floating_point()) return v->get();
    if (const auto *v = n.as_boolean()) return v->get();
    if (const auto *v = n.as_string()) return v->get();
    throw Error(ErrorCode::SchemaViolation, "unsupported TOML value type");
}

} // namespace

void RunConfig::apply_json(const json &doc) {
    need(doc, doc.is_object(), "/", "an object");
    for (const auto &[k, v] : doc.items()) {
        const auto at = "/" + k;
        if (k == "mode") {
            const auto m = mode_from_name(text(v, at));
            if (!m) bad(at, "unknown mode '" + v.get<std::string>() + "'");
            mode = *m;
        } else if (k == "grad_method") {
            const auto g = grad_method_from_name(text(v, at));
            if (!g) bad(at, "unknown gradient method '" + v.get<std::string>() + "'");
            grad = *g;
        } else if (k == "seed") {
            seed = count(v, at);
        } else if (k == "output") {
            output = text(v, at);
        } else if (k == "tn_simplify") {
            tn.simplify = flag(v, at);
        } else if (k == "slicing_opts") {
            apply_slicing(tn.slicing, v, at);
        } else if (k == "hyper_opts") {
            need(v, v.is_object(), at, "a table");
            for (const auto &[hk, hv] : v.items()) {
                const auto hat = at + "/" + hk;
                if (hk == "max_time") {
                    tn.path.max_time = number(hv, hat);
                } else if (hk == "max_repeats") {
                    tn.path.max_repeats = static_cast<int>(count(hv, hat));
                } else if (hk == "search_parallel") {
                    tn.path.search_parallel = static_cast<unsigned>(count(hv, hat));
                } else if (hk == "imbalance") {
                    tn.path.imbalance = number(hv, hat);
                } else if (hk == "slicing_opts") {
                    apply_slicing(tn.slicing, hv, hat);
                } else {
                    bad(hat, "unknown key");
                }
            }
        } else {
            bad(at, "unknown key");
        }
    }
    try {
        tn.path.validate();
        tn.slicing.validate();
    } catch (const Error &e) {
        throw Error(ErrorCode::SchemaViolation, e.what());
    }
}

void RunConfig::apply_toml(std::string_view text_in) {
    toml::table t;
    try {
        t = toml::parse(text_in);
    } catch (const toml::parse_error &e) {
        std::ostringstream os;
        os << "TOML line " << e.source().begin.line << ": " << e.description();
        throw Error(ErrorCode::SchemaViolation, os.str());
    }
    apply_json(toml_to_json(t));
}

void RunConfig::apply_toml_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::SchemaViolation, "cannot read config " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    apply_toml(ss.str());
}

TnOptions RunConfig::tn_options() const {
    auto o = tn;
    o.path.seed = seed;
    o.slicing.seed = seed;
    o.executor.contract_parallel = o.slicing.contract_parallel;
    return o;
}

json RunConfig::to_json() const {
    json slicing = {{"target_size", tn.slicing.target_size},
                    {"repeats", tn.slicing.repeats},
                    {"target_num_slices", nullptr},
                    {"contract_parallel", tn.slicing.contract_parallel}};
    if (tn.slicing.target_num_slices) slicing["target_num_slices"] = *tn.slicing.target_num_slices;
    json out = {{"mode", mode == ExecutionMode::StateVector ? "sv" : "tn"},
                {"grad_method", std::string(to_string(grad))},
                {"seed", seed},
                {"tn_simplify", tn.simplify},
                {"hyper_opts",
                 {{"max_time", tn.path.max_time},
                  {"max_repeats", tn.path.max_repeats},
                  {"search_parallel", tn.path.search_parallel},
                  {"slicing_opts", slicing}}}};
    if (output) out["output"] = *output;
    return out;
}

} // namespace qtn::service
