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
#include "qtn/error.hpp"
#include "qtn/statevector/state_vector.hpp"
#include "qtn/vqa/encoding.hpp"
#include "qtn/vqa/hamiltonian.hpp"
#include "qtn/vqa/optimizer.hpp"
#include "qtn/vqa/tasks.hpp"
#include "qtn/vqa/templates.hpp"

#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace qtn;
using namespace qtn::vqa;

namespace {

template <class F> ErrorCode code_of(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    FAIL("no qtn::Error thrown");
    return ErrorCode::InvalidArgument;
}

std::size_t count_kind(const std::vector<GateInstance> &g, GateKind k) {
    return std::count_if(g.begin(), g.end(), [k](const GateInstance &x) { return x.kind == k; });
}

std::size_t count_refs(const std::vector<GateInstance> &gates) {
    std::size_t n = 0;
    for (const auto &g : gates) {
        for (const auto &p : g.params) n += std::holds_alternative<ParamRef>(p);
    }
    return n;
}

PauliSum h2() { return load_pauli_sum(QTN_SOURCE_DIR "/data/h2_sto3g_4q.txt"); }

} // namespace

TEST_CASE("template parameter counts") {
    for (int n = 1; n <= 16; ++n) {
        for (int d = 0; d <= 16; ++d) {
            TemplateSpec hwe{TemplateKind::HardwareEfficient, n, d};
            CHECK(template_param_count(hwe) == std::size_t(2 * n * (d + 1)));
            CHECK(count_refs(expand_template(hwe)) == template_param_count(hwe));

            TemplateSpec fc{TemplateKind::FullyConnected, n, d};
            CHECK(template_param_count(fc) == std::size_t(2 * n * (n - 1) * d));
            CHECK(count_refs(expand_template(fc)) == template_param_count(fc));

            fc.ring = true;
            const std::size_t ring_pairs = n == 1 ? 0 : n == 2 ? 1 : n;
            CHECK(template_param_count(fc) == 2 * ring_pairs * d);
            CHECK(count_refs(expand_template(fc)) == template_param_count(fc));

            TemplateSpec rl{TemplateKind::RandomLayer, n, d, std::uint64_t(n * 31 + d)};
            const auto gates = expand_template(rl);
            CHECK(gates.size() == std::size_t(n * d));
            CHECK(count_refs(gates) == template_param_count(rl));
        }
    }
    CHECK(template_param_count({TemplateKind::HardwareEfficient, 8, 12}) == 208);
}

TEST_CASE("template structure") {
    const auto flat = expand_template({TemplateKind::HardwareEfficient, 5, 0});
    CHECK(count_kind(flat, GateKind::CNOT) == 0);
    CHECK(flat.size() == 10);

    const auto hwe = expand_template({TemplateKind::HardwareEfficient, 4, 2});
    CHECK(count_kind(hwe, GateKind::CNOT) == 8);

    const auto fc = expand_template({TemplateKind::FullyConnected, 3, 1});
    REQUIRE(fc.size() == 18);
    // every ordered pair once, target rotated after the CNOT
    std::set<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < fc.size(); i += 3) {
        CHECK(fc[i].kind == GateKind::CNOT);
        CHECK(fc[i + 1].qubits[0] == fc[i].qubits[1]);
        pairs.insert({fc[i].qubits[0], fc[i].qubits[1]});
    }
    CHECK(pairs.size() == 6);

    TemplateSpec rl{TemplateKind::RandomLayer, 5, 4, 99};
    CHECK(expand_template(rl) == expand_template(rl));
    rl.seed = 100;
    CHECK(expand_template(rl) != expand_template(TemplateSpec{TemplateKind::RandomLayer, 5, 4, 99}));

    std::vector<double> p(7, 0.1);
    CHECK(code_of([&] { (void)expand_template({TemplateKind::HardwareEfficient, 2, 1}, p); }) ==
          ErrorCode::ParamCountMismatch);
    p.resize(8);
    const auto bound = expand_template({TemplateKind::HardwareEfficient, 2, 1}, p);
    CHECK(count_refs(bound) == 0);
}

TEST_CASE("encodings") {
    const auto b = encode({EncodingKind::Basis, 3, 3}, basis_features(5, 3));
    REQUIRE(b.gates.size() == 2);
    CHECK(b.gates[0].qubits == std::vector<int>{0});
    CHECK(b.gates[1].qubits == std::vector<int>{2});

    const double r = 1 / std::sqrt(2.0);
    const std::vector<double> x{r, r};
    const auto a = encode({EncodingKind::Amplitude, 1, 2}, x);
    REQUIRE(a.init_state);
    CHECK(std::abs((*a.init_state)[0] - cplx{r, 0}) < 1e-15);
    CHECK(std::abs((*a.init_state)[1] - cplx{r, 0}) < 1e-15);

    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 50; ++t) {
        const int n = 1 + t % 5;
        const std::size_t len = 1 + rng() % (std::size_t{1} << n);
        std::vector<double> f(len);
        for (auto &v : f) v = nd(rng);
        const auto e = encode({EncodingKind::Amplitude, n, len}, f);
        double norm2 = 0;
        for (auto c : *e.init_state) norm2 += std::norm(c);
        CHECK(std::abs(std::sqrt(norm2) - 1) < 1e-12);
        CHECK(e.init_state->size() == (std::size_t{1} << n));
    }

    // H then RX(x): amplitudes e^{-ix/2}/sqrt2 on both basis states
    const std::vector<double> ang{0.4};
    const auto g = encode({EncodingKind::Angle, 1, 1}, ang);
    REQUIRE(g.gates.size() == 2);
    const auto c = Circuit::build(1, g.gates, {state()}, 0);
    const auto psi = sv::StateVectorEngine(c).run(c.bind({}), false).results[0].amplitudes;
    const cplx want = std::exp(cplx{0, -0.2}) * r;
    CHECK(std::abs(psi[0] - want) < 1e-14);
    CHECK(std::abs(psi[1] - want) < 1e-14);

    const std::vector<double> zeros(4, 0.0);
    CHECK(code_of([&] { (void)encode({EncodingKind::Amplitude, 2, 4}, zeros); }) == ErrorCode::ZeroVector);
    CHECK(code_of([&] { (void)encode({EncodingKind::Angle, 2, 2}, ang); }) ==
          ErrorCode::FeatureLengthMismatch);
    CHECK(code_of([&] { (void)encode({EncodingKind::Amplitude, 1, 3}, std::vector<double>{1, 1, 1}); }) ==
          ErrorCode::FeatureLengthMismatch);
}

TEST_CASE("optimizers") {
    std::vector<double> p{1.0, -2.0};
    const std::vector<double> g{0.5, -4.0};
    Optimizer gd(OptimizerKind::GradientDescent, 0.1);
    gd.step(p, g);
    CHECK(p == std::vector<double>{1.0 - 0.05, -2.0 + 0.4});

    // bias-corrected first Adam step moves each coordinate by lr * sign(g)
    std::vector<double> q{0.0, 0.0};
    Optimizer adam(OptimizerKind::Adam, 0.5);
    adam.step(q, g);
    CHECK(std::abs(q[0] + 0.5) < 1e-7);
    CHECK(std::abs(q[1] - 0.5) < 1e-7);
    std::vector<double> wrong{0.0};
    CHECK(code_of([&] { adam.step(wrong, std::vector<double>{1.0}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("Pauli-sum files") {
    const auto h = parse_pauli_sum("# comment\n-0.5 ZI\n\n0.25 XY\n");
    REQUIRE(h.terms.size() == 2);
    CHECK(h.n_qubits == 2);
    CHECK(h.terms[1].ops == "XY");
    CHECK(h.terms[1].coeff == 0.25);
    for (const char *bad : {"", "abc ZZ", "1.0 ZQ", "1.0 ZZ\n1.0 Z", "1.0", "1.0 ZZ extra"}) {
        CHECK(code_of([&] { (void)parse_pauli_sum(bad); }) == ErrorCode::HamiltonianParseError);
    }

    // dense matrix against state-vector expectations on random states
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 20; ++t) {
        PauliSum s;
        s.n_qubits = 3;
        for (int k = 0; k < 5; ++k) s.terms.push_back(qtn::testing::random_pauli(rng, 3));
        std::vector<cplx> psi(8);
        double n2 = 0;
        for (auto &a : psi) {
            a = {nd(rng), nd(rng)};
            n2 += std::norm(a);
        }
        for (auto &a : psi) a /= std::sqrt(n2);
        const sv::StateVector sv(3, psi);
        double want = 0;
        for (const auto &term : s.terms) want += sv::expectation(sv, term);
        const auto m = dense_matrix(s);
        Eigen::VectorXcd v(8);
        for (int i = 0; i < 8; ++i) v(i) = psi[i];
        CHECK(std::abs(v.dot(m * v).real() - want) < 1e-12);
        CHECK((m - m.adjoint()).norm() < 1e-12);
    }
    CHECK(std::abs(ground_energy(parse_pauli_sum("1 Z")) + 1) < 1e-14);
    CHECK(std::abs(ground_energy(h2()) + 1.1361894540659) < 1e-10);
}

TEST_CASE("VQE reaches the ground energy of Z") {
    TrainConfig c;
    c.task = TaskKind::VQE;
    c.n_qubits = 1;
    c.ansatz = {TemplateKind::HardwareEfficient, 1, 0};
    c.hamiltonian = parse_pauli_sum("1.0 Z");
    c.iterations = 300;
    c.learning_rate = 0.4;
    c.seed = 3;
    const auto t = train(c);
    CHECK(std::abs(t.final_loss + 1.0) < 1e-6);
    CHECK(*t.reference == -1.0);
}

TEST_CASE("VQE on the H2 Hamiltonian matches diagonalization") {
    TrainConfig c;
    c.task = TaskKind::VQE;
    c.n_qubits = 4;
    c.ansatz = {TemplateKind::HardwareEfficient, 4, 6};
    c.hamiltonian = h2();
    c.optimizer = OptimizerKind::Adam;
    c.learning_rate = 0.05;
    c.final_learning_rate = 1e-4;
    c.iterations = 5000;
    c.seed = 1;
    const auto t = train(c);
    CHECK(std::abs(t.final_loss - *t.reference) < 1e-6);
}

TEST_CASE("MQR loss is mostly non-increasing at small learning rate") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        TrainConfig c;
        c.learning_rate = 0.05;
        c.iterations = 300;
        c.seed = seed;
        const auto t = train(c);
        int down = 0;
        for (std::size_t i = 1; i < t.rows.size(); ++i) down += t.rows[i].loss <= t.rows[i - 1].loss;
        CHECK(down >= 0.9 * (t.rows.size() - 1));
        CHECK(t.path_searches == 0);
    }
}

TEST_CASE("training traces agree across engines") {
    TrainConfig c;
    c.iterations = 25;
    c.seed = 7;
    auto sv_trace = train(c);
    c.mode = ExecutionMode::TensorNetwork;
    auto tn_trace = train(c);
    REQUIRE(sv_trace.rows.size() == tn_trace.rows.size());
    for (std::size_t i = 0; i < sv_trace.rows.size(); ++i) {
        CHECK(std::abs(sv_trace.rows[i].loss - tn_trace.rows[i].loss) < 1e-7);
    }
    CHECK(tn_trace.path_searches == 4); // one per <Z_i>

    c = {};
    c.task = TaskKind::MBL;
    c.n_qubits = 4;
    c.mbl.n_qubits = 4;
    c.mbl.n_train = 6;
    c.mbl.n_test = 2;
    c.iterations = 4;
    c.optimizer = OptimizerKind::Adam;
    c.init_scale = 0.5;
    sv_trace = train(c);
    c.mode = ExecutionMode::TensorNetwork;
    tn_trace = train(c);
    for (std::size_t i = 0; i < sv_trace.rows.size(); ++i) {
        CHECK(std::abs(sv_trace.rows[i].loss - tn_trace.rows[i].loss) < 1e-7);
    }
    CHECK(tn_trace.path_searches == 8);
}

TEST_CASE("MBL data") {
    MBLTaskConfig cfg;
    cfg.n_qubits = 2;
    cfg.t_d = 0;
    cfg.ergodic = {0, 0};
    const auto zero = generate_mbl_dataset(cfg, 2, 1);
    // |01> is index 1
    CHECK(std::abs(zero[0].state[1] - cplx{1, 0}) < 1e-14);
    CHECK(std::abs(zero[0].state[0]) < 1e-14);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 10);
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + t % 5;
        std::vector<double> d(n);
        for (auto &x : d) x = u(rng);
        const auto U = evolution_operator(mbl_hamiltonian(n, 1.0, d), u(rng));
        Eigen::VectorXcd psi = Eigen::VectorXcd::Random(U.cols()).normalized();
        CHECK(std::abs((U * psi).norm() - 1) < 1e-10);
    }

    cfg = {};
    const auto data = generate_mbl_dataset(cfg, 100, 5);
    std::vector<double> imb[2];
    for (const auto &s : data) {
        const sv::StateVector st(cfg.n_qubits, s.state);
        double v = 0;
        for (int i = 0; i < cfg.n_qubits; ++i) {
            std::string ops(cfg.n_qubits, 'I');
            ops[i] = 'Z';
            v += (i % 2 ? -1.0 : 1.0) * sv::expectation(st, {ops});
        }
        imb[s.label].push_back(v);
    }
    auto stats = [](const std::vector<double> &v) {
        double m = 0, s = 0;
        for (double x : v) m += x;
        m /= v.size();
        for (double x : v) s += (x - m) * (x - m);
        return std::pair{m, std::sqrt(s / (v.size() - 1))};
    };
    const auto [me, se] = stats(imb[0]);
    const auto [ml, sl] = stats(imb[1]);
    CHECK(imb[0].size() == 50);
    CHECK(ml - me > 3 * std::sqrt(se * se / 50 + sl * sl / 50));

    // prefixes agree between modes
    const auto &s = data[3];
    const auto tn_prefix = s.prefix(ExecutionMode::TensorNetwork);
    auto c = Circuit::build(cfg.n_qubits, tn_prefix.gates, {state()}, 0);
    const auto psi = sv::StateVectorEngine(c).run(c.bind({}), false).results[0].amplitudes;
    double gap = 0;
    for (std::size_t i = 0; i < psi.size(); ++i) gap = std::max(gap, std::abs(psi[i] - s.state[i]));
    CHECK(gap < 1e-12);

    cfg.n_qubits = 13;
    CHECK(code_of([&] { (void)generate_mbl_dataset(cfg, 2, 0); }) ==
          ErrorCode::TooManyQubitsForExactEvolution);
    cfg.n_qubits = 4;
    cfg.localized = {0.2, 1.0};
    CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("task names, csv and cancellation") {
    CHECK(code_of([] { (void)task_from_name("qgan"); }) == ErrorCode::UnknownTask);
    CHECK(task_from_name("mbl") == TaskKind::MBL);
    TrainConfig c;
    c.iterations = 10;
    int seen = 0;
    const auto t = train(c, [&](const TraceRow &) { return ++seen < 3; });
    CHECK(t.cancelled);
    CHECK(t.rows.size() == 3);
    const auto csv = t.to_csv();
    CHECK(csv.rfind("iteration,loss,grad_norm,wall_ms\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

    c.task = TaskKind::VQE;
    CHECK(code_of([&] { (void)train(c); }) == ErrorCode::HamiltonianParseError);
}
