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
#include "qtn/service/http_server.hpp"
#include "qtn/service/reports.hpp"
#include "qtn/service/run_config.hpp"
#include "qtn/service/train_options.hpp"

#include <catch_amalgamated.hpp>
#include <httplib.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

using namespace qtn;
using namespace qtn::service;
using nlohmann::json;

namespace {

std::string slurp(const std::string &path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const std::string kData = QTN_SOURCE_DIR "/data/";

struct Cli {
    int status;
    std::string out;
};

Cli run_cli(const std::string &args) {
    const std::string cmd = std::string(QTN_CLI) + " " + args + " 2>/dev/null";
    FILE *p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int rc = pclose(p);
    return {WEXITSTATUS(rc), out};
}

class Served {
  public:
    explicit Served(RunConfig cfg = {}) : server_(std::move(cfg)) {
        port_ = server_.bind("127.0.0.1", 0);
        REQUIRE(port_ > 0);
        thread_ = std::thread([this] { server_.listen(); });
        server_.wait_until_ready();
    }
    ~Served() {
        server_.stop();
        thread_.join();
    }
    [[nodiscard]] int port() const { return port_; }
    HttpServer &server() { return server_; }
    [[nodiscard]] httplib::Client client() const {
        httplib::Client c("127.0.0.1", port_);
        c.set_read_timeout(60, 0);
        return c;
    }

  private:
    HttpServer server_;
    int port_ = -1;
    std::thread thread_;
};

bool near(const json &got, const std::vector<double> &want) {
    if (!got.is_array() || got.size() != want.size()) return false;
    for (std::size_t i = 0; i < want.size(); ++i) {
        if (std::abs(got[i].get<double>() - want[i]) > 1e-12) return false;
    }
    return true;
}

std::vector<json> ndjson(const std::string &body) {
    std::vector<json> out;
    std::istringstream in(body);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) out.push_back(json::parse(line));
    }
    return out;
}

} // namespace

TEST_CASE("run config from TOML") {
    RunConfig c;
    c.apply_toml(R"(
mode = "tn"
grad_method = "param-shift"
seed = 9
tn_simplify = false

[hyper_opts]
max_time = 30
max_repeats = 16
search_parallel = 2

[hyper_opts.slicing_opts]
target_size = 1024
repeats = 512
contract_parallel = true
)");
    CHECK(c.mode == ExecutionMode::TensorNetwork);
    CHECK(c.grad == GradMethod::ParamShift);
    CHECK(!c.tn.simplify);
    CHECK(c.tn.path.max_repeats == 16);
    CHECK(c.tn.path.search_parallel == 2);
    CHECK(c.tn.slicing.target_size == 1024);
    CHECK(c.tn.slicing.repeats == 512);
    CHECK(!c.tn.slicing.target_num_slices);
    CHECK(c.tn_options().path.seed == 9);
    CHECK(c.tn_options().executor.contract_parallel);

    RunConfig top;
    top.apply_toml("[slicing_opts]\ntarget_num_slices = 4\n");
    CHECK(top.tn.slicing.target_num_slices == 4);

    RunConfig round;
    round.apply_json(c.to_json());
    CHECK(round.to_json() == c.to_json());

    for (const char *bad : {"mode = \"gpu\"", "nonsense = 1", "[hyper_opts]\nmax_repeats = \"x\"",
                            "[slicing_opts]\ntarget_size = 1", "mode = ", "[hyper_opts]\nmax_time = -1"}) {
        RunConfig r;
        CHECK_THROWS_MATCHES(r.apply_toml(bad), Error, Catch::Matchers::Predicate<Error>([](const Error &e) {
                                 return e.code() == ErrorCode::SchemaViolation;
                             }));
    }
}

TEST_CASE("reports") {
    const auto bell = parse_circuit(slurp(kData + "bell.json"));
    const auto r = simulate_report(bell, {}, {});
    CHECK(near(r["probs"], {0.5, 0, 0, 0.5}));
    CHECK(r["mode"] == "sv");

    RunConfig tn;
    tn.mode = ExecutionMode::TensorNetwork;
    const auto fig2 = parse_circuit(slurp(kData + "worked_example.json"));
    const std::vector<double> p{1.3};
    const auto t = simulate_report(fig2, p, tn);
    CHECK(std::abs(t["expval"].get<double>() + 0.267499) < 1e-6);
    CHECK(t["path_stats"][0].contains("total_flops"));
    CHECK(report_hash(t) == report_hash(simulate_report(fig2, p, tn)));

    const auto paths = paths_report(fig2, {});
    CHECK(paths["recommendation"] == "statevector");
    CHECK(report_hash(paths) == report_hash(paths_report(fig2, {})));
}

TEST_CASE("training options") {
    const auto c = train_config_from_json("vqe", {{"hamiltonian", "1 ZZ\n0.5 XI\n"}, {"lr", 0.2}});
    CHECK(c.n_qubits == 2);
    CHECK(c.learning_rate == 0.2);
    CHECK(c.iterations == 5000);
    CHECK_THROWS_AS(train_config_from_json("mqr", {{"bogus", 1}}), Error);
    CHECK_THROWS_AS(train_config_from_json("qgan", json::object()), Error);
}

TEST_CASE("command line") {
    auto r = run_cli("simulate " + kData + "bell.json");
    CHECK(r.status == 0);
    CHECK(r.out == "0.5 0 0 0.5\n");

    r = run_cli("simulate " + kData + "worked_example.json -p 1.3 --mode tn --json");
    CHECK(r.status == 0);
    const auto report = json::parse(r.out);
    CHECK(std::abs(report["expval"].get<double>() + 0.267499) < 1e-6);
    CHECK(report["path_stats"][0].contains("total_flops"));

    const std::string bad = "/tmp/qtn_test_malformed.json";
    std::ofstream(bad) << "{ not json";
    CHECK(run_cli("simulate " + bad).status == 2);
    CHECK(run_cli("simulate /nonexistent.json").status == 2);
    CHECK(run_cli("simulate " + kData + "worked_example.json").status == 2); // missing parameter
    CHECK(run_cli("bench qgan").status == 2);
    CHECK(run_cli("frobnicate").status == 2);

    // a state measurement cannot run in tensor-network mode: engine error
    const std::string st = "/tmp/qtn_test_state.json";
    std::ofstream(st) << R"({"n_qubits": 1, "gates": [], "measurements": [{"kind": "state"}]})";
    CHECK(run_cli("simulate " + st + " --mode tn").status == 3);

    // config file, then a flag overriding it
    const std::string cfg = "/tmp/qtn_test_cfg.toml";
    std::ofstream(cfg) << "mode = \"tn\"\n[hyper_opts]\nmax_repeats = 4\n";
    r = run_cli("simulate " + kData + "bell.json --config " + cfg + " --json");
    CHECK(json::parse(r.out)["mode"] == "tn");
    r = run_cli("simulate " + kData + "bell.json --config " + cfg + " --mode sv --json");
    CHECK(json::parse(r.out)["mode"] == "sv");

    const auto a = run_cli("paths " + kData + "worked_example.json --seed 4");
    const auto b = run_cli("paths " + kData + "worked_example.json --seed 4");
    CHECK(a.status == 0);
    CHECK(json::parse(a.out)["hash"] == json::parse(b.out)["hash"]);
    CHECK(json::parse(a.out)["recommendation"] == "statevector");

    r = run_cli("bench mqr --iterations 20");
    CHECK(r.status == 0);
    CHECK(r.out.rfind("iteration,loss,grad_norm,wall_ms\n", 0) == 0);
    CHECK(r.out.find("\n19,") != std::string::npos);
}

TEST_CASE("HTTP API") {
    Served s;
    auto cli = s.client();

    auto res = cli.Get("/api/gates");
    REQUIRE(res);
    CHECK(res->status == 200);
    const auto gates = json::parse(res->body)["gates"];
    CHECK(gates.size() == static_cast<std::size_t>(GateKind::Unitary) + 1);
    bool saw_crx = false;
    for (const auto &g : gates) {
        CHECK(g.contains("arity"));
        CHECK(g.contains("param_count"));
        if (g["name"] == "CRX") saw_crx = g["arity"] == 2 && g["param_count"] == 1;
    }
    CHECK(saw_crx);

    res = cli.Post("/api/circuits/validate", slurp(kData + "bell.json"), "application/json");
    CHECK(json::parse(res->body) == json{{"ok", true}});
    res = cli.Post("/api/circuits/validate", R"({"n_qubits": 1, "gates": [{"kind": "Q", "qubits": [0]}], "measurements": []})",
                   "application/json");
    const auto v = json::parse(res->body);
    CHECK(v["ok"] == false);
    CHECK(!v["errors"].empty());
    CHECK(cli.Post("/api/circuits/validate", "{", "application/json")->status == 400);

    const json bell = json::parse(slurp(kData + "bell.json"));
    res = cli.Post("/api/simulate", json{{"circuit", bell}}.dump(), "application/json");
    CHECK(res->status == 200);
    CHECK(near(json::parse(res->body)["probs"], {0.5, 0, 0, 0.5}));

    // same numbers as the report builder behind the CLI
    const json fig2 = json::parse(slurp(kData + "worked_example.json"));
    for (const char *mode : {"sv", "tn"}) {
        res = cli.Post("/api/simulate", json{{"circuit", fig2}, {"params", {0.77}}, {"mode", mode}}.dump(),
                       "application/json");
        REQUIRE(res->status == 200);
        RunConfig c;
        c.apply_json({{"mode", mode}});
        const std::vector<double> p{0.77};
        const auto direct = simulate_report(circuit_from_json(fig2), p, c);
        CHECK(json::parse(res->body)["results"] == direct["results"]);
    }

    CHECK(cli.Post("/api/simulate", "{}", "application/json")->status == 400);
    CHECK(cli.Post("/api/simulate", json{{"circuit", fig2}, {"params", {1, 2}}}.dump(), "application/json")->status ==
          400);
    const json state_c = {{"n_qubits", 1}, {"gates", json::array()}, {"measurements", {{{"kind", "state"}}}}};
    CHECK(cli.Post("/api/simulate", json{{"circuit", state_c}, {"mode", "tn"}}.dump(), "application/json")->status ==
          422);

    CHECK(cli.Get("/api/train/job-999/events")->status == 404);
    CHECK(cli.Delete("/api/train/job-999")->status == 404);
    CHECK(cli.Post("/api/train", R"({"task": "qgan"})", "application/json")->status == 400);
}

TEST_CASE("HTTP training stream") {
    Served s;
    auto cli = s.client();
    auto res = cli.Post("/api/train", R"({"task": "mqr", "n": 4})", "application/json");
    REQUIRE(res->status == 200);
    const std::string id = json::parse(res->body)["job_id"];

    res = cli.Get("/api/train/" + id + "/events");
    REQUIRE(res);
    const auto events = ndjson(res->body);
    REQUIRE(events.size() == 501);
    for (int i = 0; i < 500; ++i) {
        CHECK(events[i]["iter"] == i);
        CHECK(events[i]["loss"].is_number());
    }
    CHECK(events.back()["status"] == "done");
    CHECK(events.back()["final_loss"].get<double>() < -3.9);

    // replay after completion gives the same stream
    CHECK(ndjson(cli.Get("/api/train/" + id + "/events")->body).size() == 501);
    CHECK(cli.Delete("/api/train/" + id)->status == 200);
    CHECK(cli.Get("/api/train/" + id + "/events")->status == 404);

    // cancel a long run while it streams
    res = cli.Post("/api/train", R"({"task": "mqr", "options": {"iterations": 1000000}})", "application/json");
    const std::string long_id = json::parse(res->body)["job_id"];
    std::vector<json> partial;
    std::thread reader([&] {
        auto c2 = s.client();
        partial = ndjson(c2.Get("/api/train/" + long_id + "/events")->body);
    });
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
    CHECK(cli.Delete("/api/train/" + long_id)->status == 200);
    reader.join();
    REQUIRE(!partial.empty());
    CHECK(partial.back()["status"] == "cancelled");
    CHECK(partial.size() < 1000000);
    CHECK(s.server().active_jobs() == 0);
}

TEST_CASE("busy port") {
    Served s;
    HttpServer other;
    CHECK(other.bind("127.0.0.1", s.port()) == -1);
}
