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
 * HTTP service.
 *
 *   GET    /api/gates                 gate palette
 *   POST   /api/circuits/validate     circuit JSON -> {"ok": true} | {"ok": false, "errors": [...]}
 *   POST   /api/simulate              {"circuit", "params"?, "mode"?, "config"?} -> simulate report
 *   POST   /api/train                 {"task", "options"?} -> {"job_id"}
 *   GET    /api/train/{id}/events     line-delimited JSON: {"iter", "loss"} ... then {"status"}
 *   DELETE /api/train/{id}            cancel and forget a job
 *
 * Status codes: 400 malformed request or schema error, 404 unknown job,
 * 422 engine error (the request was well formed but cannot be run).
 */
#pragma once

#include "qtn/service/run_config.hpp"

#include <memory>
#include <string>

namespace qtn::service {

class HttpServer {
  public:
    explicit HttpServer(RunConfig defaults = {});
    ~HttpServer();
    HttpServer(const HttpServer &) = delete;
    HttpServer &operator=(const HttpServer &) = delete;

    /// Binds the socket; port 0 picks a free port. Returns the bound port or
    /// -1 when the port is busy.
    int bind(const std::string &host, int port);
    /// Serves until stop(). Call after a successful bind().
    void listen();
    void stop();
    /// Blocks until the server accepts connections.
    void wait_until_ready() const;

    [[nodiscard]] std::size_t active_jobs() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace qtn::service
