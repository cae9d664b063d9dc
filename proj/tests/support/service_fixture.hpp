// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "genome.hpp"
#include "service.hpp"

namespace melodevo::testing {

// Service on an ephemeral loopback port, stopped on destruction.
class RunningService {
public:
    explicit RunningService(ServiceOptions options = {}) : service_(std::move(options)) {
        port_ = service_.bind_to_any_port("127.0.0.1");
        if (port_ <= 0)
            throw std::runtime_error("could not bind a port");
        thread_ = std::thread([this] { service_.listen_after_bind(); });
        service_.wait_until_ready();
    }
    ~RunningService() {
        service_.stop();
        thread_.join();
    }

    int port() const { return port_; }
    Service& service() { return service_; }
    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port_);
        c.set_read_timeout(10, 0);
        return c;
    }

private:
    Service service_;
    int port_ = -1;
    std::thread thread_;
};

inline nlohmann::json body_of(const httplib::Result& r) {
    if (!r)
        throw std::runtime_error("request failed: " + httplib::to_string(r.error()));
    return nlohmann::json::parse(r->body);
}

inline httplib::Result post_json(httplib::Client& c, const std::string& path, const nlohmann::json& body) {
    return c.Post(path, body.dump(), "application/json");
}

inline MelodyPhrase phrase_from_view(const nlohmann::json& notes, double bpm) {
    MelodyPhrase p;
    p.bpm = bpm;
    for (const auto& n : notes)
        p.notes.push_back({n.at("pitch").get<int>(), n.at("duration").get<double>(), n.at("velocity").get<int>(),
                           n.at("onset").get<double>()});
    return p;
}

} // namespace melodevo::testing
