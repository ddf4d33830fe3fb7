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
#include "qtn/vqa/tasks.hpp"

#include "qtn/error.hpp"
#include "qtn/gradients/gradients.hpp"
#include "qtn/util/thread_pool.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace qtn::vqa {

TaskKind task_from_name(std::string_view s) {
    if (s == "mqr") return TaskKind::MQR;
    if (s == "vqe") return TaskKind::VQE;
    if (s == "mbl") return TaskKind::MBL;
    throw Error(ErrorCode::UnknownTask, "unknown task '" + std::string(s) + "'");
}

std::string_view to_string(TaskKind t) {
    switch (t) {
    case TaskKind::MQR:
        return "mqr";
    case TaskKind::VQE:
        return "vqe";
    case TaskKind::MBL:
        return "mbl";
    }
    return "";
}

void MBLTaskConfig::validate() const {
    if (n_qubits < 2) throw Error(ErrorCode::InvalidArgument, "mbl needs n_qubits >= 2");
    if (n_qubits > kMaxDenseQubits) {
        throw Error(ErrorCode::TooManyQubitsForExactEvolution,
                    std::to_string(n_qubits) + " qubits exceed the exact-evolution limit");
    }
    auto ok = [](std::pair<double, double> r) { return r.first >= 0 && r.first <= r.second; };
    if (!ok(ergodic) || !ok(localized)) throw Error(ErrorCode::InvalidArgument, "bad disorder range");
    if (!(ergodic.second < localized.first || localized.second < ergodic.first)) {
        throw Error(ErrorCode::InvalidArgument, "disorder ranges overlap");
    }
    if (n_train < 1 || n_test < 0) throw Error(ErrorCode::InvalidArgument, "bad sample counts");
}

PauliSum mbl_hamiltonian(int n, double g, std::span<const double> disorder) {
    PauliSum h;
    h.n_qubits = n;
    for (int i = 0; i < n; ++i) {
        std::string ops(n, 'I');
        ops[i] = 'Z';
        h.terms.push_back({ops, disorder[i]});
    }
    for (int i = 0; i + 1 < n; ++i) {
        for (char p : {'X', 'Y'}) {
            std::string ops(n, 'I');
            ops[i] = ops[i + 1] = p;
            h.terms.push_back({ops, g / 2});
        }
    }
    return h;
}

Eigen::MatrixXcd evolution_operator(const PauliSum &h, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_matrix(h));
    Eigen::VectorXcd phase(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phase.size(); ++i) {
        phase(i) = std::exp(cplx{0, -es.eigenvalues()(i) * t});
    }
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<cplx> to_row_major(const Eigen::MatrixXcd &m) {
    std::vector<cplx> out(m.size());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) out[r * m.cols() + c] = m(r, c);
    }
    return out;
}

std::vector<GateInstance> neel_gates(int n) {
    std::vector<GateInstance> out;
    for (int q = 1; q < n; q += 2) out.push_back(make_gate(GateKind::X, {q}));
    return out;
}

CircuitPrefix MBLSample::prefix(ExecutionMode mode) const {
    CircuitPrefix p;
    const int n = static_cast<int>(disorder.size());
    if (mode == ExecutionMode::StateVector) {
        p.init_state = state;
        return p;
    }
    p.gates = neel_gates(n);
    std::vector<int> all(n);
    for (int q = 0; q < n; ++q) all[q] = q;
    p.gates.push_back(make_unitary(all, unitary));
    return p;
}

std::vector<MBLSample> generate_mbl_dataset(const MBLTaskConfig &cfg, int n_samples,
                                            std::uint64_t seed, unsigned workers) {
    cfg.validate();
    const int n = cfg.n_qubits;
    std::vector<MBLSample> out(n_samples);
    util::parallel_for(out.size(), workers, [&](std::size_t i) {
        std::seed_seq ss{seed, static_cast<std::uint64_t>(i)};
        std::mt19937_64 rng(ss);
        auto &s = out[i];
        s.label = static_cast<int>(i % 2);
        const auto range = s.label ? cfg.localized : cfg.ergodic;
        std::uniform_real_distribution<double> d(range.first * cfg.g, range.second * cfg.g);
        s.disorder.resize(n);
        for (auto &x : s.disorder) x = d(rng);
        const auto u = evolution_operator(mbl_hamiltonian(n, cfg.g, s.disorder), cfg.t_d);
        s.unitary = to_row_major(u);
        std::size_t neel = 0;
        for (int q = 1; q < n; q += 2) neel |= std::size_t{1} << (n - 1 - q);
        s.state.resize(u.rows());
        for (Eigen::Index r = 0; r < u.rows(); ++r) s.state[r] = u(r, neel);
    });
    return out;
}

std::size_t mbl_param_count(const MBLTaskConfig &cfg) {
    return 2 * static_cast<std::size_t>(cfg.n_qubits) * cfg.layers();
}

std::vector<GateInstance> mbl_classifier(const MBLTaskConfig &cfg) {
    cfg.validate();
    const int n = cfg.n_qubits;
    std::vector<double> zero(n, 0.0);
    const auto block =
        to_row_major(evolution_operator(mbl_hamiltonian(n, cfg.g, zero), cfg.block_time));
    std::vector<int> all(n);
    for (int q = 0; q < n; ++q) all[q] = q;
    std::vector<GateInstance> out;
    std::size_t slot = 0;
    for (int l = 0; l < cfg.layers(); ++l) {
        if (l > 0) out.push_back(make_unitary(all, block));
        for (int q = 0; q < n; ++q) {
            out.push_back(make_gate(GateKind::RY, {q}, {ParamRef{slot++}}));
            out.push_back(make_gate(GateKind::RZ, {q}, {ParamRef{slot++}}));
        }
    }
    return out;
}

TrainConfig default_train_config(TaskKind task) {
    TrainConfig c;
    c.task = task;
    switch (task) {
    case TaskKind::MQR:
        break;
    case TaskKind::VQE:
        c.ansatz.depth = 6;
        c.optimizer = OptimizerKind::Adam;
        c.learning_rate = 0.05;
        c.final_learning_rate = 1e-4;
        c.iterations = 5000;
        break;
    case TaskKind::MBL:
        c.n_qubits = 6;
        c.optimizer = OptimizerKind::Adam;
        c.learning_rate = 0.1;
        c.iterations = 50;
        c.init_scale = 0.1;
        break;
    }
    return c;
}

std::string TrainingTrace::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "iteration,loss,grad_norm,wall_ms\n";
    for (const auto &r : rows) {
        os << r.iteration << ',' << r.loss << ',' << r.grad_norm << ',' << std::setprecision(6) << r.wall_ms
           << std::setprecision(17) << '\n';
    }
    return os.str();
}

Circuit task_circuit(const TrainConfig &cfg) {
    auto spec = cfg.ansatz;
    spec.n_qubits = cfg.n_qubits;
    std::vector<Measurement> ms;
    int n = cfg.n_qubits;
    switch (cfg.task) {
    case TaskKind::MQR:
        for (int q = 0; q < n; ++q) {
            std::string ops(n, 'I');
            ops[q] = 'Z';
            ms.push_back(expval({ops}));
        }
        break;
    case TaskKind::VQE:
        if (!cfg.hamiltonian) throw Error(ErrorCode::HamiltonianParseError, "vqe needs a Hamiltonian");
        if (cfg.hamiltonian->n_qubits != n) {
            throw Error(ErrorCode::InvalidArgument, "Hamiltonian acts on " +
                                                        std::to_string(cfg.hamiltonian->n_qubits) +
                                                        " qubits, ansatz on " + std::to_string(n));
        }
        for (const auto &t : cfg.hamiltonian->terms) ms.push_back(expval(t));
        break;
    case TaskKind::MBL:
        throw Error(ErrorCode::InvalidArgument, "mbl circuits depend on the sample");
    }
    return Circuit::build(n, expand_template(spec, 0), std::move(ms), template_param_count(spec));
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double norm(const std::vector<double> &g) {
    double s = 0;
    for (double x : g) s += x * x;
    return std::sqrt(s);
}

GradientConfig grad_config(const TrainConfig &cfg) {
    GradientConfig g;
    g.method = cfg.grad;
    g.workers = cfg.workers;
    return g;
}

double scheduled_lr(const TrainConfig &cfg, int it) {
    if (!cfg.final_learning_rate || cfg.iterations < 2) return cfg.learning_rate;
    const double f = static_cast<double>(it) / (cfg.iterations - 1);
    return cfg.learning_rate * std::pow(*cfg.final_learning_rate / cfg.learning_rate, f);
}

std::vector<double> initial_params(const TrainConfig &cfg, std::size_t P) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-cfg.init_scale, cfg.init_scale);
    std::vector<double> p(P);
    for (auto &x : p) x = u(rng);
    return p;
}

std::pair<double, std::vector<double>> summed(const CompiledCircuit &cc,
                                              const std::vector<double> &params,
                                              const GradientConfig &g, bool want_grad) {
    if (!want_grad) {
        double loss = 0;
        for (const auto &r : cc.evaluate(params)) loss += r.scalar();
        return {loss, {}};
    }
    const auto vj = value_and_jacobian(cc, params, g);
    double loss = 0;
    for (const auto &r : vj.results) loss += r.scalar();
    std::vector<double> grad(vj.jacobian.cols, 0.0);
    for (std::size_t m = 0; m < vj.jacobian.rows; ++m) {
        for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += vj.jacobian(m, j);
    }
    return {loss, grad};
}

TrainingTrace train_expectation(const TrainConfig &cfg, const IterationCallback &cb) {
    TrainingTrace trace;
    trace.task = cfg.task;
    const auto circuit = task_circuit(cfg);
    const auto cc = CompiledCircuit::compile(circuit, cfg.mode, cfg.grad,
                                             cfg.mode == ExecutionMode::TensorNetwork ? cfg.tn : std::nullopt);
    trace.path_searches = cc.path_searches();
    if (cfg.task == TaskKind::VQE) {
        trace.reference = ground_energy(*cfg.hamiltonian);
    } else {
        trace.reference = -static_cast<double>(cfg.n_qubits);
    }
    const auto g = grad_config(cfg);
    auto params = initial_params(cfg, circuit.param_count());
    Optimizer opt(cfg.optimizer, cfg.learning_rate);
    for (int it = 0; it < cfg.iterations; ++it) {
        const auto t0 = Clock::now();
        const auto [loss, grad] = summed(cc, params, g, true);
        opt.set_learning_rate(scheduled_lr(cfg, it));
        opt.step(params, grad);
        TraceRow row{it, loss, norm(grad), ms_since(t0)};
        trace.rows.push_back(row);
        if (cb && !cb(row)) {
            trace.cancelled = true;
            break;
        }
    }
    trace.final_loss = summed(cc, params, g, false).first;
    trace.final_params = std::move(params);
    return trace;
}

double bce(double p, int y) {
    constexpr double kEps = 1e-12;
    p = std::clamp(p, kEps, 1 - kEps);
    return y ? -std::log(p) : -std::log(1 - p);
}

TrainingTrace train_mbl(const TrainConfig &cfg, const IterationCallback &cb) {
    TrainingTrace trace;
    trace.task = TaskKind::MBL;
    auto mcfg = cfg.mbl;
    mcfg.n_qubits = cfg.n_qubits;
    mcfg.validate();
    const int n = mcfg.n_qubits;
    const auto data = generate_mbl_dataset(mcfg, mcfg.n_train + mcfg.n_test, cfg.seed, cfg.workers);
    const auto classifier = mbl_classifier(mcfg);
    const std::size_t P = mbl_param_count(mcfg);
    std::string z0(n, 'I');
    z0[0] = 'Z';

    std::vector<CompiledCircuit> circuits;
    circuits.reserve(data.size());
    for (const auto &s : data) {
        auto pre = s.prefix(cfg.mode);
        auto gates = std::move(pre.gates);
        gates.insert(gates.end(), classifier.begin(), classifier.end());
        circuits.push_back(CompiledCircuit::compile(
            Circuit::build(n, std::move(gates), {expval({z0})}, P, std::move(pre.init_state)), cfg.mode,
            cfg.grad, cfg.mode == ExecutionMode::TensorNetwork ? cfg.tn : std::nullopt));
        trace.path_searches += circuits.back().path_searches();
    }
    const auto g = grad_config(cfg);
    auto predict = [&](std::size_t i, const std::vector<double> &params) {
        return (circuits[i].evaluate(params)[0].scalar() + 1) / 2;
    };
    auto accuracy = [&](std::size_t lo, std::size_t hi, const std::vector<double> &params) {
        if (hi == lo) return 0.0;
        int ok = 0;
        for (std::size_t i = lo; i < hi; ++i) ok += (predict(i, params) >= 0.5) == (data[i].label == 1);
        return static_cast<double>(ok) / static_cast<double>(hi - lo);
    };

    auto params = initial_params(cfg, P);
    Optimizer opt(cfg.optimizer, cfg.learning_rate);
    const std::size_t n_train = mcfg.n_train;
    auto loss_of = [&](const std::vector<double> &p) {
        double l = 0;
        for (std::size_t i = 0; i < n_train; ++i) l += bce(predict(i, p), data[i].label);
        return l / static_cast<double>(n_train);
    };
    for (int epoch = 0; epoch < cfg.iterations; ++epoch) {
        const auto t0 = Clock::now();
        std::vector<double> losses(n_train);
        std::vector<std::vector<double>> grads(n_train);
        // per-sample gradients run on the pool; the reduction below is ordered
        util::parallel_for(n_train, cfg.workers, [&](std::size_t i) {
            auto gi = g;
            gi.workers = 1;
            const auto vj = value_and_jacobian(circuits[i], params, gi);
            const double p = (vj.results[0].scalar() + 1) / 2;
            const int y = data[i].label;
            losses[i] = bce(p, y);
            const double pc = std::clamp(p, 1e-12, 1 - 1e-12);
            const double dl_dp = y ? -1 / pc : 1 / (1 - pc);
            grads[i].resize(P);
            for (std::size_t j = 0; j < P; ++j) grads[i][j] = dl_dp * 0.5 * vj.jacobian(0, j);
        });
        double loss = 0;
        std::vector<double> grad(P, 0.0);
        for (std::size_t i = 0; i < n_train; ++i) {
            loss += losses[i];
            for (std::size_t j = 0; j < P; ++j) grad[j] += grads[i][j];
        }
        loss /= static_cast<double>(n_train);
        for (auto &x : grad) x /= static_cast<double>(n_train);
        opt.set_learning_rate(scheduled_lr(cfg, epoch));
        opt.step(params, grad);
        TraceRow row{epoch, loss, norm(grad), ms_since(t0)};
        trace.rows.push_back(row);
        if (cb && !cb(row)) {
            trace.cancelled = true;
            break;
        }
    }
    trace.final_loss = loss_of(params);
    trace.train_accuracy = accuracy(0, n_train, params);
    trace.test_accuracy = accuracy(n_train, data.size(), params);
    trace.final_params = std::move(params);
    return trace;
}

} // namespace

TrainingTrace train(const TrainConfig &cfg, const IterationCallback &on_iteration) {
    if (cfg.iterations < 0) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 0");
    if (cfg.final_learning_rate && !(*cfg.final_learning_rate > 0)) {
        throw Error(ErrorCode::InvalidArgument, "final learning rate must be > 0");
    }
    if (cfg.grad == GradMethod::None) throw Error(ErrorCode::InvalidArgument, "training needs a gradient method");
    if (cfg.task == TaskKind::MBL) return train_mbl(cfg, on_iteration);
    return train_expectation(cfg, on_iteration);
}

} // namespace qtn::vqa
