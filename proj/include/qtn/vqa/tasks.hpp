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
 * Benchmark training tasks.
 *
 *   mqr  flip |0...0> to |1...1>: hardware-efficient ansatz, loss sum_i <Z_i>
 *   vqe  minimise sum_k c_k <P_k> for a Pauli-sum Hamiltonian
 *   mbl  classify evolved Neel states as ergodic (label 0) or localized
 *        (label 1) with a digital-analog circuit and binary cross entropy
 */
#pragma once

#include "qtn/engine/compiled_circuit.hpp"
#include "qtn/vqa/encoding.hpp"
#include "qtn/vqa/hamiltonian.hpp"
#include "qtn/vqa/optimizer.hpp"
#include "qtn/vqa/templates.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qtn::vqa {

enum class TaskKind { MQR, VQE, MBL };

/// Throws UnknownTask.
TaskKind task_from_name(std::string_view s);
std::string_view to_string(TaskKind t);

struct MBLTaskConfig {
    int n_qubits = 6;
    double g = 1.0;   ///< nearest-neighbour XX+YY coupling (angular frequency, hbar = 1)
    double t_d = 3.0; ///< evolution time of the data Hamiltonian
    /// Disorder ranges, in units of g.
    std::pair<double, double> ergodic{0.0, 0.5};
    std::pair<double, double> localized{5.0, 10.0};
    /// Classifier: qnn_depth + 1 rotation layers (negative: n_qubits).
    int qnn_depth = -1;
    double block_time = 0.5; ///< t of each exp(-i H0 t) block
    int n_train = 40;
    int n_test = 20;

    /// Throws InvalidArgument (n < 2, overlapping ranges, ...).
    void validate() const;
    [[nodiscard]] int layers() const { return (qnn_depth < 0 ? n_qubits : qnn_depth) + 1; }
};

/// sum_i d_i Z_i + g sum_i (X_i X_{i+1} + Y_i Y_{i+1}) / 2 on an open chain.
PauliSum mbl_hamiltonian(int n_qubits, double g, std::span<const double> disorder);

/// exp(-i H t) by dense diagonalization. Throws TooManyQubitsForExactEvolution.
Eigen::MatrixXcd evolution_operator(const PauliSum &h, double t);

/// Row-major copy, as a gate matrix.
std::vector<cplx> to_row_major(const Eigen::MatrixXcd &m);

/// |0101...>: odd qubits set.
std::vector<GateInstance> neel_gates(int n_qubits);

struct MBLSample {
    int label = 0; ///< 0 ergodic, 1 localized
    std::vector<double> disorder;
    std::vector<cplx> unitary; ///< exp(-i H_d t_d), row major
    std::vector<cplx> state;   ///< unitary |Neel>

    /// State-vector mode: the evolved state as init_state. Tensor-network
    /// mode: Neel preparation followed by the evolution as a constant gate.
    [[nodiscard]] CircuitPrefix prefix(ExecutionMode mode) const;
};

/// Half ergodic, half localized, alternating. Throws
/// TooManyQubitsForExactEvolution past 12 qubits.
std::vector<MBLSample> generate_mbl_dataset(const MBLTaskConfig &cfg, int n_samples,
                                            std::uint64_t seed, unsigned workers = 1);

/// Classifier gates after the data prefix; reads params[0 .. 2 n layers).
std::vector<GateInstance> mbl_classifier(const MBLTaskConfig &cfg);
std::size_t mbl_param_count(const MBLTaskConfig &cfg);

struct TrainConfig {
    TaskKind task = TaskKind::MQR;
    int n_qubits = 4;
    TemplateSpec ansatz{TemplateKind::HardwareEfficient, 4, 1, 0, false};
    OptimizerKind optimizer = OptimizerKind::GradientDescent;
    double learning_rate = 0.1;
    /// Learning rate at the last iteration, reached geometrically. Unset:
    /// constant rate.
    std::optional<double> final_learning_rate;
    int iterations = 500; ///< epochs for mbl
    GradMethod grad = GradMethod::Adjoint;
    ExecutionMode mode = ExecutionMode::StateVector;
    std::optional<TnOptions> tn;
    std::uint64_t seed = 0;
    /// Initial parameters are U[-init_scale, init_scale).
    double init_scale = 3.141592653589793;
    std::optional<PauliSum> hamiltonian; ///< vqe
    MBLTaskConfig mbl; ///< its n_qubits is replaced by the one above
    unsigned workers = 1;
};

struct TraceRow {
    int iteration = 0;
    double loss = 0;      ///< before the step
    double grad_norm = 0; ///< Euclidean norm of the gradient used by the step
    double wall_ms = 0;   ///< time of this iteration
};

struct TrainingTrace {
    TaskKind task = TaskKind::MQR;
    std::vector<TraceRow> rows;
    std::vector<double> final_params;
    double final_loss = 0; ///< at final_params
    bool cancelled = false;
    std::optional<double> reference; ///< vqe ground energy, mqr -n
    std::optional<double> train_accuracy, test_accuracy; ///< mbl
    std::uint64_t path_searches = 0;

    /// "iteration,loss,grad_norm,wall_ms" rows.
    [[nodiscard]] std::string to_csv() const;
};

/// Per-task defaults: mqr n=4, depth-1 ansatz, GD lr 0.1, 500 iterations;
/// vqe depth-6 ansatz, Adam lr 0.05 decaying to 1e-4, 5000 iterations; mbl
/// n=6, Adam lr 0.1, 50 epochs, initial parameters in [-0.1, 0.1).
TrainConfig default_train_config(TaskKind task);

/// Called after every iteration; returning false stops training.
using IterationCallback = std::function<bool(const TraceRow &)>;

/// Throws UnknownTask, HamiltonianParseError (vqe without a Hamiltonian),
/// and the engine errors of compilation.
TrainingTrace train(const TrainConfig &cfg, const IterationCallback &on_iteration = {});

/// The variational circuit trained by mqr / vqe (one expectation per term).
Circuit task_circuit(const TrainConfig &cfg);

} // namespace qtn::vqa
