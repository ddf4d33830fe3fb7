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
// qtn command-line front end.
//
// Exit codes: 0 success, 2 usage / schema / input errors, 3 engine errors
// (including a busy port for `serve`).

#include "qtn/circuit/json_io.hpp"
#include "qtn/error.hpp"
#include "qtn/service/http_server.hpp"
#include "qtn/service/reports.hpp"
#include "qtn/service/run_config.hpp"
#include "qtn/service/train_options.hpp"
#include "qtn/vqa/tasks.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace qtn;
using nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitEngine = 3;

std::string read_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::SchemaViolation, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    f << text;
}

struct CommonFlags {
    std::string config;
    std::string mode;
    std::string grad;
    std::uint64_t seed = 0;
    std::string output;
    CLI::Option *seed_opt = nullptr;

    void add(CLI::App *cmd, bool with_grad) {
        cmd->add_option("--config", config, "TOML run configuration");
        cmd->add_option("--mode", mode, "sv | tn")->check(CLI::IsMember({"sv", "tn", "statevector", "tensor-network"}));
        if (with_grad) cmd->add_option("--grad", grad, "adjoint | param-shift | finite-diff | none");
        seed_opt = cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("-o,--output", output, "output file");
    }

    [[nodiscard]] service::RunConfig resolve() const {
        service::RunConfig cfg;
        if (!config.empty()) cfg.apply_toml_file(config);
        json over = json::object();
        if (!mode.empty()) over["mode"] = mode;
        if (!grad.empty()) over["grad_method"] = grad;
        if (seed_opt && seed_opt->count()) over["seed"] = seed;
        if (!output.empty()) over["output"] = output;
        cfg.apply_json(over);
        return cfg;
    }
};

int cmd_simulate(const std::string &file, const std::vector<double> &params, const CommonFlags &flags,
                 bool print_json) {
    const auto cfg = flags.resolve();
    const auto circuit = parse_circuit(read_file(file));
    const auto report = service::simulate_report(circuit, params, cfg);
    if (print_json) {
        std::cout << report.dump(2) << '\n';
    } else {
        std::vector<MeasurementResult> results;
        for (const auto &r : report["results"]) {
            MeasurementResult m;
            const std::string kind = r["kind"];
            if (kind == "expval") {
                m.values = {r["value"].get<double>()};
            } else if (kind == "probs") {
                m.kind = MeasurementKind::Probabilities;
                m.values = r["probs"].get<std::vector<double>>();
            } else {
                m.kind = MeasurementKind::State;
                for (const auto &a : r["amplitudes"]) m.amplitudes.emplace_back(a[0].get<double>(), a[1].get<double>());
            }
            results.push_back(std::move(m));
        }
        std::cout << service::format_results(results);
    }
    if (cfg.output) write_file(*cfg.output, report.dump(2) + "\n");
    return 0;
}

int cmd_paths(const std::string &file, const CommonFlags &flags) {
    auto cfg = flags.resolve();
    const auto circuit = parse_circuit(read_file(file));
    auto report = service::paths_report(circuit, cfg);
    report["hash"] = service::report_hash(report);
    const auto text = report.dump(2) + "\n";
    std::cout << text;
    if (cfg.output) write_file(*cfg.output, text);
    return 0;
}

struct BenchFlags {
    std::string task;
    json options = json::object();
    std::string hamiltonian;
};

int cmd_bench(const BenchFlags &bf, const CommonFlags &flags) {
    const auto run = flags.resolve();
    auto options = bf.options;
    if (!bf.hamiltonian.empty()) options["hamiltonian"] = read_file(bf.hamiltonian);
    auto cfg = service::train_config_from_json(bf.task, options);
    if (!flags.mode.empty() || !flags.config.empty()) cfg.mode = run.mode;
    if (!flags.grad.empty() || !flags.config.empty()) cfg.grad = run.grad;
    if (flags.seed_opt->count() || !flags.config.empty()) cfg.seed = run.seed;
    if (cfg.mode == ExecutionMode::TensorNetwork) cfg.tn = run.tn_options();

    const auto trace = vqa::train(cfg);
    std::ostringstream os;
    os << trace.to_csv();
    os.precision(12);
    os << "# final_loss " << trace.final_loss << '\n';
    if (trace.reference) {
        os << "# reference " << *trace.reference << '\n';
        os << "# gap " << trace.final_loss - *trace.reference << '\n';
    }
    if (trace.test_accuracy) {
        os << "# accuracy train " << *trace.train_accuracy << " test " << *trace.test_accuracy << '\n';
    }
    if (run.output) {
        write_file(*run.output, os.str());
    } else {
        std::cout << os.str();
    }
    return 0;
}

service::HttpServer *g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

int cmd_serve(const std::string &host, int port, const CommonFlags &flags) {
    service::HttpServer server(flags.resolve());
    const int bound = server.bind(host, port);
    if (bound < 0) {
        std::cerr << "qtn: 409 port " << port << " is busy\n";
        return kExitEngine;
    }
    std::cerr << "qtn: serving on http://" << host << ':' << bound << '\n';
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.listen();
    g_server = nullptr;
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"qtn: quantum circuit simulation by state vector or tensor-network contraction"};
    app.require_subcommand(1);

    CommonFlags sim_flags, path_flags, bench_flags, serve_flags;
    std::string sim_file, path_file;
    std::vector<double> params;
    bool sim_json = false;
    auto *sim = app.add_subcommand("simulate", "evaluate a circuit JSON file");
    sim->add_option("circuit", sim_file, "circuit JSON (schema v1)")->required();
    sim->add_option("-p,--params", params, "parameter values")->delimiter(',');
    sim->add_flag("--json", sim_json, "print the full JSON report");
    sim_flags.add(sim, true);

    auto *paths = app.add_subcommand("paths", "compare state-vector and tensor-network cost");
    paths->add_option("circuit", path_file, "circuit JSON (schema v1)")->required();
    path_flags.add(paths, false);

    BenchFlags bf;
    int n_qubits = 0, depth = -1, iterations = -1, workers = 0;
    double lr = 0, final_lr = 0;
    std::string optimizer;
    auto *bench = app.add_subcommand("bench", "train a benchmark task and print the trace as CSV");
    bench->add_option("task", bf.task, "mqr | vqe | mbl")->required();
    bench->add_option("-n,--n-qubits", n_qubits, "qubits");
    bench->add_option("--depth", depth, "ansatz depth");
    bench->add_option("--iterations,--epochs", iterations, "iterations (epochs for mbl)");
    bench->add_option("--lr", lr, "learning rate");
    bench->add_option("--final-lr", final_lr, "learning rate at the last iteration");
    bench->add_option("--optimizer", optimizer, "gd | adam");
    bench->add_option("--hamiltonian", bf.hamiltonian, "Pauli-sum file (vqe)");
    bench->add_option("--workers", workers, "worker threads");
    bench_flags.add(bench, true);

    std::string host = "127.0.0.1";
    int port = 8080;
    auto *serve = app.add_subcommand("serve", "run the HTTP service");
    serve->add_option("--host", host, "bind address");
    serve->add_option("--port", port, "port (0 picks a free one)");
    serve_flags.add(serve, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*sim) return cmd_simulate(sim_file, params, sim_flags, sim_json);
        if (*paths) return cmd_paths(path_file, path_flags);
        if (*bench) {
            if (n_qubits > 0) bf.options["n_qubits"] = n_qubits;
            if (depth >= 0) bf.options["depth"] = depth;
            if (iterations >= 0) bf.options["iterations"] = iterations;
            if (lr > 0) bf.options["learning_rate"] = lr;
            if (final_lr > 0) bf.options["final_learning_rate"] = final_lr;
            if (!optimizer.empty()) bf.options["optimizer"] = optimizer;
            if (workers > 0) bf.options["workers"] = workers;
            return cmd_bench(bf, bench_flags);
        }
        if (*serve) return cmd_serve(host, port, serve_flags);
    } catch (const Error &e) {
        std::cerr << "qtn: " << e.what() << '\n';
        return is_input_error(e.code()) ? kExitInput : kExitEngine;
    } catch (const std::exception &e) {
        std::cerr << "qtn: " << e.what() << '\n';
        return kExitEngine;
    }
    return 0;
}
