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
// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "qtn/circuit/json_io.hpp"
#include "qtn/engine/compiled_circuit.hpp"
#include "qtn/engine/executor.hpp"
#include "qtn/error.hpp"
#include "qtn/gradients/gradients.hpp"
#include "qtn/path/partitioner.hpp"
#include "qtn/path/slicer.hpp"
#include "qtn/tensor/network.hpp"
#include "qtn/vqa/tasks.hpp"

#include "corpus.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace qtn;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(const char *name, const std::function<Outcome()> &body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception &e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", name, seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Circuit hwe_z0(int n, int depth) {
    vqa::TemplateSpec s{vqa::TemplateKind::HardwareEfficient, n, depth};
    std::string z(n, 'I');
    z[0] = 'Z';
    return Circuit::build(n, vqa::expand_template(s), {expval({z})}, vqa::template_param_count(s));
}

std::vector<cplx> brute_value(const tn::TensorNetwork &net) {
    std::vector<testing::LabeledTensor> ts;
    for (int id : net.nodes()) {
        auto t = net.node_tensor(id, nullptr);
        ts.push_back({t.shape, t.values, net.node(id).labels});
    }
    return testing::brute_force_contract(ts, net.dims(), net.open_labels());
}

double rel_gap(const std::vector<cplx> &got, const std::vector<cplx> &want) {
    double scale = 1;
    for (auto v : want) scale = std::max(scale, std::abs(v));
    return testing::max_abs_diff(got, want) / scale;
}

Outcome worked_example() {
    const auto t0 = Clock::now();
    const auto c = Circuit::build(2,
                                  {make_gate(GateKind::X, {0}), make_gate(GateKind::RY, {1}, {ParamRef{0}}),
                                   make_gate(GateKind::CNOT, {0, 1})},
                                  {expval({"IZ"})}, 1);
    double worst = 0;
    for (auto mode : {ExecutionMode::StateVector, ExecutionMode::TensorNetwork}) {
        const auto cc = CompiledCircuit::compile(c, mode);
        for (int i = 0; i < 50; ++i) {
            const double theta = -M_PI + 2 * M_PI * i / 49.0;
            const double s = std::sin(theta / 2), co = std::cos(theta / 2);
            const std::vector<double> p{theta};
            worst = std::max(worst, std::abs(cc.evaluate(p)[0].scalar() - (s * s - co * co)));
        }
    }
    const double t = seconds_since(t0);
    return {worst < 1e-12 && t < 1.0, fmt("max |delta| %.2e over 50 theta x 2 modes, %.3fs", worst, t)};
}

Outcome cross_engine() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(300);
    double worst = 0;
    int n_expvals = 0;
    for (int i = 0; i < 300; ++i) {
        testing::RandomCircuitOptions opt;
        opt.n_qubits = 1 + i % 12;
        opt.depth = std::uniform_int_distribution<int>(1, 20)(rng);
        opt.n_expvals = 2;
        opt.with_probs = i % 3 == 0;
        const auto rc = testing::random_circuit(rng, opt);
        const auto sv = CompiledCircuit::compile(rc.circuit, ExecutionMode::StateVector).evaluate(rc.params);
        const auto tn = CompiledCircuit::compile(rc.circuit, ExecutionMode::TensorNetwork).evaluate(rc.params);
        for (std::size_t m = 0; m < sv.size(); ++m) {
            for (std::size_t k = 0; k < sv[m].values.size(); ++k) {
                worst = std::max(worst, std::abs(sv[m].values[k] - tn[m].values[k]));
            }
            n_expvals += sv[m].kind == MeasurementKind::Expectation;
        }
    }
    const double t = seconds_since(t0);
    return {worst < 1e-8 && t < 300,
            fmt("300 circuits (n<=12, depth<=20), %d expectations plus probabilities, max gap %.2e, %.1fs",
                n_expvals, worst, t)};
}

double max_gap(const Jacobian &a, const Jacobian &b) {
    if (a.rows != b.rows || a.cols != b.cols) return INFINITY;
    double g = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) g = std::max(g, std::abs(a.data[i] - b.data[i]));
    return g;
}

Outcome gradient_triangle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(200);
    double adj = 0, fd = 0, tn_adj = 0;
    for (int i = 0; i < 200; ++i) {
        testing::RandomCircuitOptions opt;
        opt.n_qubits = 1 + i % 8;
        opt.depth = std::uniform_int_distribution<int>(4, 24)(rng);
        opt.controlled_rotations = false;
        opt.shared_slots = i % 2 == 1;
        opt.n_expvals = 2;
        const auto rc = testing::random_circuit(rng, opt);
        const auto cc = CompiledCircuit::compile(rc.circuit, ExecutionMode::StateVector);
        const auto ps = grad_param_shift(cc, rc.params);
        adj = std::max(adj, max_gap(grad_adjoint(cc, rc.params), ps));
        fd = std::max(fd, max_gap(grad_finite_diff(cc, rc.params), ps));
        if (i % 4 == 0) {
            const auto tn = CompiledCircuit::compile(rc.circuit, ExecutionMode::TensorNetwork);
            tn_adj = std::max(tn_adj, max_gap(grad_adjoint(tn, rc.params), ps));
        }
    }
    const double t = seconds_since(t0);
    return {adj < 1e-10 && fd < 1e-5 && tn_adj < 1e-10 && t < 300,
            fmt("200 circuits (n<=8): adjoint-vs-shift %.2e, fd-vs-shift %.2e, TN adjoint-vs-shift (50 of them) %.2e, "
                "%.1fs",
                adj, fd, tn_adj, t)};
}

Outcome slicing_identity() {
    std::mt19937_64 rng(100);
    int networks = 0, cases = 0;
    int sliced_hist[6] = {0};
    double worst_brute = 0, worst_unsliced = 0;
    bool width_ok = true;
    int attempts = 0;
    while (networks < 100 && attempts < 1000) {
        ++attempts;
        const auto net = testing::random_hyper_network(rng, std::uniform_int_distribution<int>(4, 12)(rng));
        const auto h = tn::to_hypergraph(net);
        path::PartitionerConfig pc;
        pc.max_repeats = 16;
        const auto tree = path::search(h, pc).tree;
        const auto brute = brute_value(net);
        const auto unsliced = engine::ContractionExecutor(net, h, tree, nullptr).execute(nullptr, false).value;
        bool counted = false;
        for (int k = 1; k <= 4; ++k) {
            path::SlicingConfig sc;
            sc.target_size = std::max(2.0, std::exp2(std::ceil(tree.width()) - k));
            path::SlicingPlan plan;
            try {
                plan = path::greedy_slice(h, tree, sc, k);
            } catch (const Error &e) {
                if (e.code() == ErrorCode::Unsliceable) continue; // all-open oversized tensor
                throw;
            }
            if (plan.empty()) continue;
            counted = true;
            ++cases;
            ++sliced_hist[std::min<std::size_t>(plan.sliced_edges.size(), 5)];
            width_ok = width_ok && plan.tree.width() <= std::log2(sc.target_size) + 1e-12;
            const auto got = engine::ContractionExecutor(net, h, tree, &plan).execute(nullptr, false).value;
            worst_brute = std::max(worst_brute, rel_gap(got.values, brute));
            worst_unsliced = std::max(worst_unsliced, rel_gap(got.values, unsliced.values));
        }
        networks += counted;
    }
    const bool all_counts = sliced_hist[1] && sliced_hist[2] && sliced_hist[3] && sliced_hist[4];
    return {networks == 100 && worst_brute < 1e-10 && worst_unsliced < 1e-10 && width_ok && all_counts,
            fmt("%d networks, %d sliced plans (1/2/3/4/5+ indices: %d/%d/%d/%d/%d), gap vs unsliced %.2e, vs brute "
                "force %.2e, width bound %s",
                networks, cases, sliced_hist[1], sliced_hist[2], sliced_hist[3], sliced_hist[4], sliced_hist[5],
                worst_unsliced, worst_brute, width_ok ? "held" : "VIOLATED")};
}

Outcome path_quality() {
    // constant-angle circuit networks so that every entry can be replayed
    std::mt19937_64 rng(128);
    std::vector<tn::TensorNetwork> corpus;
    for (int i = 0; i < 200; ++i) {
        corpus.push_back(testing::random_hyper_network(rng, std::uniform_int_distribution<int>(2, 8)(rng)));
    }
    int found = 0;
    while (found < 50) {
        testing::RandomCircuitOptions opt;
        opt.n_qubits = std::uniform_int_distribution<int>(2, 3)(rng);
        opt.depth = std::uniform_int_distribution<int>(2, 8)(rng);
        opt.parametric = false;
        const auto rc = testing::random_circuit(rng, opt);
        auto net = tn::simplify(tn::circuit_to_network(rc.circuit, 0));
        const int n = static_cast<int>(net.nodes().size());
        if (n >= 3 && n <= 8) {
            corpus.push_back(std::move(net));
            ++found;
        }
    }
    int within = 0, audited = 0;
    bool audit_all = true;
    double worst_value = 0;
    for (const auto &net : corpus) {
        const auto h = tn::to_hypergraph(net);
        const double opt = testing::optimal_flops(h);
        path::PartitionerConfig pc;
        pc.max_repeats = 128;
        const auto tree = path::search(h, pc).tree;
        if (tree.total_flops() <= 1.10 * opt) ++within;
        bool audit = false;
        const auto got = testing::replay_tree(net, h, tree, nullptr, audit);
        audit_all = audit_all && audit;
        ++audited;
        worst_value = std::max(worst_value, rel_gap(got.values, brute_value(net)));
    }
    const double frac = static_cast<double>(within) / corpus.size();
    return {frac >= 0.95 && audit_all && worst_value < 1e-12,
            fmt("%d/%zu within 1.10x of the exhaustive optimum (%.1f%%); flop audit %s on %d trees; replay gap %.1e",
                within, corpus.size(), 100 * frac, audit_all ? "exact" : "MISMATCH", audited, worst_value)};
}

Outcome large_qubit() {
    const auto c = hwe_z0(50, 2);
    std::vector<double> p(c.param_count());
    std::mt19937_64 rng(50);
    for (auto &x : p) x = std::uniform_real_distribution<double>(-M_PI, M_PI)(rng);
    const auto t0 = Clock::now();
    const auto cc = CompiledCircuit::compile(c, ExecutionMode::TensorNetwork);
    const double v = cc.evaluate(p)[0].scalar();
    const double t = seconds_since(t0);
    const double peak = cc.tn_programs()[0].executor->peak_tensor_elements();
    bool refused = false;
    try {
        (void)CompiledCircuit::compile(c, ExecutionMode::StateVector);
    } catch (const Error &e) {
        refused = e.code() == ErrorCode::TooManyQubits;
    }
    return {t < 60 && peak <= std::exp2(28) && std::abs(v) <= 1 + 1e-12 && refused,
            fmt("<Z0> = %.6f in %.2fs, peak tensor %.0f elements, state-vector mode %s", v, t, peak,
                refused ? "refused with TooManyQubits" : "DID NOT REFUSE")};
}

Outcome mqr() {
    const auto t0 = Clock::now();
    int ok = 0;
    std::string losses;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto cfg = vqa::default_train_config(vqa::TaskKind::MQR);
        cfg.seed = seed;
        const auto tr = vqa::train(cfg);
        ok += tr.final_loss < -3.96 && tr.rows.size() == 500;
        losses += fmt(" %.6f", tr.final_loss);
    }
    const double t = seconds_since(t0);
    return {ok >= 4 && t < 30, fmt("%d/5 seeds below -3.96 after 500 GD steps (final:%s), %.2fs", ok, losses.c_str(), t)};
}

Outcome vqe() {
    std::vector<std::pair<std::string, vqa::PauliSum>> hams;
    hams.emplace_back("H2 file", vqa::load_pauli_sum(QTN_SOURCE_DIR "/data/h2_sto3g_4q.txt"));
    std::mt19937_64 rng(4);
    for (int k = 0; k < 3; ++k) {
        vqa::PauliSum h;
        h.n_qubits = 4;
        std::ostringstream text;
        text.precision(17);
        for (int t = 0; t < 12; ++t) {
            const auto p = testing::random_pauli(rng, 4);
            text << (rng() % 2 ? -p.coeff : p.coeff) << ' ' << p.ops << '\n';
        }
        hams.emplace_back("random sum " + std::to_string(k), vqa::parse_pauli_sum(text.str()));
    }
    bool pass = true;
    std::string detail;
    for (const auto &[name, h] : hams) {
        const auto t0 = Clock::now();
        int ok = 0;
        double worst = 0;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto cfg = vqa::default_train_config(vqa::TaskKind::VQE);
            cfg.hamiltonian = h;
            cfg.n_qubits = 4;
            cfg.seed = seed;
            const auto tr = vqa::train(cfg);
            const double gap = std::abs(tr.final_loss - *tr.reference);
            ok += gap < 1e-6;
            worst = std::max(worst, gap);
        }
        const double t = seconds_since(t0);
        pass = pass && ok >= 4 && t < 60;
        detail += fmt("%s %d/5 within 1e-6 (worst gap %.1e, %.1fs); ", name.c_str(), ok, worst, t);
    }
    return {pass, detail};
}

Outcome mbl() {
    const auto t0 = Clock::now();
    int ok = 0;
    std::string acc;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto cfg = vqa::default_train_config(vqa::TaskKind::MBL);
        cfg.seed = seed;
        const auto tr = vqa::train(cfg);
        ok += *tr.test_accuracy >= 0.8 && tr.rows.size() <= 50;
        acc += fmt(" %.2f", *tr.test_accuracy);
    }
    const double t = seconds_since(t0);
    return {ok >= 4 && t < 600,
            fmt("n=6, 50 epochs: %d/5 seeds with test accuracy >= 0.80 on 20 held-out samples (acc:%s), %.1fs", ok,
                acc.c_str(), t)};
}

Outcome reuse() {
    const auto c = hwe_z0(20, 2);
    std::vector<double> p(c.param_count());
    std::mt19937_64 rng(20);
    for (auto &x : p) x = std::uniform_real_distribution<double>(-M_PI, M_PI)(rng);
    const auto t0 = Clock::now();
    const auto cc = CompiledCircuit::compile(c, ExecutionMode::TensorNetwork);
    const double v0 = cc.evaluate(p)[0].scalar();
    const double first = seconds_since(t0);
    const auto t1 = Clock::now();
    for (int i = 1; i < 1000; ++i) {
        p[i % p.size()] += 1e-3;
        (void)cc.evaluate(p);
    }
    const double per = seconds_since(t1) / 999;
    const auto sv = CompiledCircuit::compile(c, ExecutionMode::StateVector);
    p = std::vector<double>(c.param_count());
    rng.seed(20);
    for (auto &x : p) x = std::uniform_real_distribution<double>(-M_PI, M_PI)(rng);
    const double sv0 = sv.evaluate(p)[0].scalar();
    const bool pass = cc.path_searches() == 1 && cc.evaluations() == 1000 && per < 0.1 * first &&
                      std::abs(v0 - sv0) < 1e-8;
    return {pass, fmt("20-qubit HWE <Z0>: %llu path search(es) over %llu evaluations; first %.1f ms (compile included), "
                      "then %.3f ms each (%.2f%%); value matches state vector within %.1e",
                      static_cast<unsigned long long>(cc.path_searches()),
                      static_cast<unsigned long long>(cc.evaluations()), 1e3 * first, 1e3 * per,
                      100 * per / first, std::abs(v0 - sv0))};
}

} // namespace

int main() {
    report("worked-example exactness", worked_example);
    report("cross-engine oracle", cross_engine);
    report("gradient triangle", gradient_triangle);
    report("slicing sum identity", slicing_identity);
    report("path quality", path_quality);
    report("large-qubit capability", large_qubit);
    report("MQR convergence", mqr);
    report("VQE correctness", vqe);
    report("MBL desk-scale", mbl);
    report("reuse mechanism", reuse);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
