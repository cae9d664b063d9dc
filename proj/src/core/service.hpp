// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace melodevo {

struct ServiceOptions {
    // Sessions are persisted here (one JSON document per session) and
    // reloaded on start. Without it sessions live in memory only.
    std::optional<std::filesystem::path> data_dir;
    // Served at "/" when set, e.g. a built web UI.
    std::optional<std::filesystem::path> static_dir;
};

// HTTP/1.1 facade over the session lifecycle.
//
//   POST /sessions                          create (body: config)      -> 201 summary
//   GET  /sessions                          list summaries
//   GET  /sessions/{id}                     full session document
//   GET  /sessions/{id}/round               candidates, decoded notes, pending flags
//   POST /sessions/{id}/scores              {candidate_id, score}      -> pending list
//   POST /sessions/{id}/advance             [{round}]                  -> new round | 409
//   POST /sessions/{id}/finish              manifest (writes SMF exports)
//   GET  /sessions/{id}/midi/{candidate_id} audio/midi
//
// Errors: {"error": {"code", "message", "details"}} with 400 (malformed
// body), 404, 409 (pending scores or state conflict) or 422 (invalid config
// or score).
class Service {
public:
    explicit Service(ServiceOptions options);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Blocking.
    bool listen(const std::string& host, int port);

    // Binds an ephemeral port and returns it (or -1); follow with
    // listen_after_bind().
    int bind_to_any_port(const std::string& host);
    bool listen_after_bind();

    void stop();
    bool is_running() const;
    void wait_until_ready() const;

    std::size_t session_count() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace melodevo
