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
#include "qtn/service/reports.hpp"

#include "qtn/engine/compiled_circuit.hpp"
#include "qtn/error.hpp"
#include "qtn/path/partitioner.hpp"
#include "qtn/path/slicer.hpp"
#include "qtn/statevector/state_vector.hpp"
#include "qtn/tensor/network.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qtn::service {

using nlohmann::json;

json result_to_json(const MeasurementResult &r) {
    switch (r.kind) {
    case MeasurementKind::Expectation:
        return {{"kind", "expval"}, {"value", r.values.at(0)}};
    case MeasurementKind::Probabilities:
        return {{"kind", "probs"}, {"probs", r.values}};
    case MeasurementKind::State: {
        json amps = json::array();
        for (const auto &a : r.amplitudes) amps.push_back({a.real(), a.imag()});
        return {{"kind", "state"}, {"amplitudes", amps}};
    }
    }
    return {};
}

std::string format_results(const std::vector<MeasurementResult> &results) {
    std::ostringstream os;
    auto num = [&](double x) {
        // print exact zeros (and round-off below 1e-15) as 0
        if (std::abs(x) < 1e-15) x = 0;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.15g", x);
        os << buf;
    };
    for (const auto &r : results) {
        if (r.kind == MeasurementKind::State) {
            for (std::size_t i = 0; i < r.amplitudes.size(); ++i) {
                if (i) os << ' ';
                num(r.amplitudes[i].real());
                os << (r.amplitudes[i].imag() < 0 ? "" : "+");
                num(r.amplitudes[i].imag());
                os << 'i';
            }
        } else {
            for (std::size_t i = 0; i < r.values.size(); ++i) {
                if (i) os << ' ';
                num(r.values[i]);
            }
        }
        os << '\n';
    }
    return os.str();
}

json simulate_report(const Circuit &circuit, std::span<const double> params, const RunConfig &cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const bool tn = cfg.mode == ExecutionMode::TensorNetwork;
    const auto cc = CompiledCircuit::compile(circuit, cfg.mode, cfg.grad,
                                             tn ? std::optional<TnOptions>(cfg.tn_options()) : std::nullopt);
    const auto results = cc.evaluate(params);
    json report;
    report["mode"] = tn ? "tn" : "sv";
    report["results"] = json::array();
    for (const auto &r : results) {
        auto j = result_to_json(r);
        const std::string kind = j["kind"];
        if (!report.contains(kind)) {
            report[kind] = kind == "expval" ? j["value"] : kind == "probs" ? j["probs"] : j["amplitudes"];
        }
        report["results"].push_back(std::move(j));
    }
    if (tn) {
        json stats = json::array();
        for (const auto &p : cc.tn_programs()) stats.push_back(p.stats());
        report["path_stats"] = stats;
        report["path_searches"] = cc.path_searches();
    }
    report["wall_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

json paths_report(const Circuit &circuit, const RunConfig &cfg) {
    const int n = circuit.n_qubits();
    const double gates = static_cast<double>(circuit.gates().size());
    json sv = {{"n_qubits", n},
               {"amplitudes", std::ldexp(1.0, n)},
               {"gate_count", circuit.gates().size()},
               {"cost", gates * std::ldexp(1.0, n)},
               {"feasible", n <= sv::kMaxQubits}};
    const auto opt = cfg.tn_options();
    json progs = json::array();
    double tn_cost = 0;
    double width = 0;
    double search_ms = 0;
    bool tn_ok = true;
    std::string tn_error;
    for (std::size_t m = 0; m < circuit.measurements().size(); ++m) {
        try {
            auto raw = tn::circuit_to_network(circuit, m);
            const int before = static_cast<int>(raw.nodes().size());
            const auto net = tn::simplify(std::move(raw), opt.simplify);
            const auto h = tn::to_hypergraph(net);
            const auto t0 = std::chrono::steady_clock::now();
            const auto res = path::two_phase_search(h, opt.path, opt.slicing);
            const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            search_ms += ms;
            auto j = res.plan.to_json(h);
            j["measurement"] = m;
            j["nodes_before_simplify"] = before;
            j["nodes"] = h.n_vertices;
            j["unsliced_width"] = res.tree.width();
            j["total_flops"] = res.tree.total_flops();
            j["search_ms"] = ms;
            tn_cost += res.plan.n_slices * res.plan.slice_flops;
            width = std::max(width, res.plan.tree.width());
            progs.push_back(std::move(j));
        } catch (const Error &e) {
            tn_ok = false;
            tn_error = e.what();
            break;
        }
    }
    json tnj = {{"feasible", tn_ok}, {"cost", tn_ok ? json(tn_cost) : json(nullptr)}, {"programs", progs},
                {"width", width}, {"memory_budget_elements", opt.executor.memory_budget},
                {"search_ms", search_ms}};
    if (!tn_ok) tnj["error"] = tn_error;
    std::string rec;
    if (!tn_ok) {
        rec = "statevector";
    } else if (!sv["feasible"].get<bool>()) {
        rec = "tensor-network";
    } else {
        // below kSmallCost the state vector wins on fixed overheads alone
        constexpr double kSmallCost = 16777216.0;
        rec = sv["cost"].get<double>() <= std::max(tn_cost, kSmallCost) ? "statevector" : "tensor-network";
    }
    return {{"statevector", sv}, {"tensor_network", tnj}, {"recommendation", rec}, {"seed", cfg.seed}};
}

namespace {

json strip_timing(const json &j) {
    if (j.is_object()) {
        json out = json::object();
        for (const auto &[k, v] : j.items()) {
            if (k.size() > 3 && k.compare(k.size() - 3, 3, "_ms") == 0) continue;
            out[k] = strip_timing(v);
        }
        return out;
    }
    if (j.is_array()) {
        json out = json::array();
        for (const auto &v : j) out.push_back(strip_timing(v));
        return out;
    }
    return j;
}

} // namespace

std::string report_hash(const json &report) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : strip_timing(report).dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace qtn::service
