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
#include "qtn/service/http_server.hpp"

#include "qtn/circuit/json_io.hpp"
#include "qtn/error.hpp"
#include "qtn/service/reports.hpp"
#include "qtn/service/train_options.hpp"

#include <httplib.h>

#include <atomic>
#include <condition_variable>
#include <map>
#include <mutex>
#include <thread>

namespace qtn::service {

using nlohmann::json;

namespace {

struct Job {
    std::mutex mu;
    std::condition_variable cv;
    std::vector<std::string> events;
    bool finished = false;
    std::atomic<bool> cancel{false};
    std::thread worker;

    void push(const json &e) {
        {
            std::lock_guard lk(mu);
            events.push_back(e.dump());
        }
        cv.notify_all();
    }
};

void send_json(httplib::Response &res, int status, const json &body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response &res, const Error &e) {
    send_json(res, is_input_error(e.code()) ? 400 : 422,
              {{"error", e.what()}, {"code", std::string(to_string(e.code()))}});
}

json parse_body(const httplib::Request &req) {
    try {
        return json::parse(req.body);
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::SchemaViolation, std::string("/: malformed JSON: ") + e.what());
    }
}

json gate_palette_json() {
    json out = json::array();
    for (int k = 0; k <= static_cast<int>(GateKind::Unitary); ++k) {
        const auto &info = gate_info(static_cast<GateKind>(k));
        json g = {{"name", std::string(info.name)},
                  {"arity", info.arity},
                  {"param_count", info.param_count},
                  {"generator_eigenvalues", info.generator_eigenvalues}};
        if (info.kind == GateKind::Unitary) g["variable_arity"] = true;
        out.push_back(std::move(g));
    }
    return out;
}

} // namespace

struct HttpServer::Impl {
    RunConfig defaults;
    httplib::Server svr;
    mutable std::mutex jobs_mu;
    std::map<std::string, std::shared_ptr<Job>> jobs;
    std::uint64_t next_id = 1;

    template <class F> void guarded(httplib::Response &res, F &&f) {
        try {
            f();
        } catch (const Error &e) {
            send_error(res, e);
        } catch (const std::exception &e) {
            send_json(res, 500, {{"error", e.what()}});
        }
    }

    std::shared_ptr<Job> find(const std::string &id) {
        std::lock_guard lk(jobs_mu);
        const auto it = jobs.find(id);
        return it == jobs.end() ? nullptr : it->second;
    }

    void routes() {
        svr.Get("/api/gates", [](const httplib::Request &, httplib::Response &res) {
            send_json(res, 200, {{"gates", gate_palette_json()}});
        });

        svr.Post("/api/circuits/validate", [this](const httplib::Request &req, httplib::Response &res) {
            guarded(res, [&] {
                const auto doc = parse_body(req);
                json errors = json::array();
                for (const auto &[ptr, msg] : validate_circuit_json(doc)) {
                    errors.push_back({{"pointer", ptr}, {"message", msg}});
                }
                if (errors.empty()) {
                    try {
                        (void)circuit_from_json(doc);
                    } catch (const Error &e) {
                        errors.push_back({{"pointer", ""}, {"message", e.what()}});
                    }
                }
                send_json(res, 200, errors.empty() ? json{{"ok", true}} : json{{"ok", false}, {"errors", errors}});
            });
        });

        svr.Post("/api/simulate", [this](const httplib::Request &req, httplib::Response &res) {
            guarded(res, [&] {
                const auto body = parse_body(req);
                if (!body.is_object() || !body.contains("circuit")) {
                    throw Error(ErrorCode::SchemaViolation, "/circuit: required");
                }
                auto cfg = defaults;
                if (body.contains("config")) cfg.apply_json(body["config"]);
                if (body.contains("mode")) cfg.apply_json({{"mode", body["mode"]}});
                std::vector<double> params;
                if (body.contains("params")) {
                    const auto &p = body["params"];
                    if (!p.is_array()) throw Error(ErrorCode::SchemaViolation, "/params: expected an array");
                    for (std::size_t i = 0; i < p.size(); ++i) {
                        if (!p[i].is_number()) {
                            throw Error(ErrorCode::SchemaViolation,
                                        "/params/" + std::to_string(i) + ": expected a number");
                        }
                        params.push_back(p[i].get<double>());
                    }
                }
                const auto circuit = circuit_from_json(body["circuit"]);
                send_json(res, 200, simulate_report(circuit, params, cfg));
            });
        });

        svr.Post("/api/train", [this](const httplib::Request &req, httplib::Response &res) {
            guarded(res, [&] {
                const auto body = parse_body(req);
                if (!body.is_object() || !body.contains("task") || !body["task"].is_string()) {
                    throw Error(ErrorCode::SchemaViolation, "/task: required string");
                }
                // top-level options such as {"task": "mqr", "n": 4} are accepted too
                json options = body.value("options", json::object());
                for (const auto &[k, v] : body.items()) {
                    if (k != "task" && k != "options") options[k] = v;
                }
                const auto cfg = train_config_from_json(body["task"].get<std::string>(), options);
                start_job(res, cfg);
            });
        });

        svr.Get(R"(/api/train/([^/]+)/events)", [this](const httplib::Request &req, httplib::Response &res) {
            auto job = find(req.matches[1]);
            if (!job) return send_json(res, 404, {{"error", "unknown job"}});
            auto pos = std::make_shared<std::size_t>(0);
            res.set_chunked_content_provider(
                "application/x-ndjson", [job, pos](std::size_t, httplib::DataSink &sink) {
                    std::unique_lock lk(job->mu);
                    job->cv.wait_for(lk, std::chrono::milliseconds(200),
                                     [&] { return job->events.size() > *pos || job->finished; });
                    while (*pos < job->events.size()) {
                        const auto line = job->events[(*pos)++] + "\n";
                        lk.unlock();
                        if (!sink.write(line.data(), line.size())) return false;
                        lk.lock();
                    }
                    if (job->finished) {
                        lk.unlock();
                        sink.done();
                    }
                    return true;
                });
        });

        svr.Delete(R"(/api/train/([^/]+))", [this](const httplib::Request &req, httplib::Response &res) {
            std::shared_ptr<Job> job;
            {
                std::lock_guard lk(jobs_mu);
                const auto it = jobs.find(req.matches[1]);
                if (it != jobs.end()) {
                    job = it->second;
                    jobs.erase(it);
                }
            }
            if (!job) return send_json(res, 404, {{"error", "unknown job"}});
            job->cancel = true;
            if (job->worker.joinable()) job->worker.join();
            send_json(res, 200, {{"status", "cancelled"}});
        });
    }

    void start_job(httplib::Response &res, const vqa::TrainConfig &cfg) {
        auto job = std::make_shared<Job>();
        std::string id;
        {
            std::lock_guard lk(jobs_mu);
            id = "job-" + std::to_string(next_id++);
            jobs[id] = job;
        }
        job->worker = std::thread([job, cfg] {
            json last;
            try {
                const auto trace = vqa::train(cfg, [&](const vqa::TraceRow &r) {
                    job->push({{"iter", r.iteration}, {"loss", r.loss}, {"grad_norm", r.grad_norm}});
                    return !job->cancel.load();
                });
                last = {{"status", trace.cancelled ? "cancelled" : "done"}, {"final_loss", trace.final_loss}};
                if (trace.test_accuracy) last["test_accuracy"] = *trace.test_accuracy;
                if (trace.reference) last["reference"] = *trace.reference;
            } catch (const std::exception &e) {
                last = {{"status", "error"}, {"message", e.what()}};
            }
            {
                std::lock_guard lk(job->mu);
                job->events.push_back(last.dump());
                job->finished = true;
            }
            job->cv.notify_all();
        });
        send_json(res, 200, {{"job_id", id}});
    }
};

HttpServer::HttpServer(RunConfig defaults) : impl_(std::make_unique<Impl>()) {
    impl_->defaults = std::move(defaults);
    // SO_REUSEADDR only: httplib's default adds SO_REUSEPORT, which would let
    // a second server share a busy port
    impl_->svr.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void *>(&yes), sizeof(yes));
    });
    impl_->routes();
}

HttpServer::~HttpServer() {
    stop();
    std::map<std::string, std::shared_ptr<Job>> jobs;
    {
        std::lock_guard lk(impl_->jobs_mu);
        jobs.swap(impl_->jobs);
    }
    for (auto &[id, job] : jobs) {
        job->cancel = true;
        if (job->worker.joinable()) job->worker.join();
    }
}

int HttpServer::bind(const std::string &host, int port) {
    if (port == 0) return impl_->svr.bind_to_any_port(host);
    return impl_->svr.bind_to_port(host, port) ? port : -1;
}

void HttpServer::listen() { impl_->svr.listen_after_bind(); }

void HttpServer::stop() { impl_->svr.stop(); }

void HttpServer::wait_until_ready() const { impl_->svr.wait_until_ready(); }

std::size_t HttpServer::active_jobs() const {
    std::lock_guard lk(impl_->jobs_mu);
    return impl_->jobs.size();
}

} // namespace qtn::service
