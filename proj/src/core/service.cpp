// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "service.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <shared_mutex>

#include "httplib.h"
#include "json.hpp"

#include "error.hpp"
#include "session.hpp"

namespace melodevo {

using nlohmann::json;

namespace {

struct SessionSlot {
    std::mutex mu;
    Session session;

    explicit SessionSlot(Session s) : session(std::move(s)) {}
};

int http_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::not_found: return 404;
    case ErrorCode::scores_pending:
    case ErrorCode::state_conflict: return 409;
    case ErrorCode::invalid_argument:
    case ErrorCode::invalid_config: return 422;
    case ErrorCode::parse: return 400;
    default: return 500;
    }
}

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message,
                json details = nullptr) {
    send_json(res, status, json{{"error", {{"code", code}, {"message", message}, {"details", std::move(details)}}}});
}

void send_error(httplib::Response& res, const Error& e, const char* code_override = nullptr) {
    json details = nullptr;
    if (e.code() == ErrorCode::scores_pending)
        details = json{{"pending", e.details()}};
    else if (!e.details().empty())
        details = json{{"violations", e.details()}};
    send_error(res, http_status(e.code()), code_override ? code_override : error_code_name(e.code()), e.what(),
               std::move(details));
}

json summary(const Session& s) {
    return json{{"id", s.id()},
                {"state", std::string(state_name(s.state()))},
                {"generation", s.population().generation},
                {"round", s.round().index},
                {"pending_count", s.pending().size()},
                {"population_size", s.config().de.population_size},
                {"notes", s.config().notes},
                {"bpm", s.config().decode.bpm}};
}

json round_view(const Session& s) {
    json candidates = json::array();
    for (const auto& c : s.round().candidates) {
        const auto& entry = s.round().book.entry(c.id);
        const auto phrase = s.decode(c.genome);
        candidates.push_back({{"id", c.id},
                              {"slot", c.slot},
                              {"pending", !entry.fitness.has_value()},
                              {"cached", entry.cached},
                              {"score", entry.human ? json(entry.human->score) : json(nullptr)},
                              {"notes", phrase_to_json(phrase).at("notes")}});
    }
    return json{{"session", summary(s)},
                {"round", s.round().index},
                {"kind", s.round().kind == RoundKind::initial ? "initial" : "trials"},
                {"generation", s.population().generation},
                {"bpm", s.config().decode.bpm},
                {"score_min", s.config().scores.min},
                {"score_max", s.config().scores.max},
                {"candidates", std::move(candidates)}};
}

std::string new_session_id() {
    static std::mutex mu;
    static std::mt19937_64 gen{std::random_device{}() ^ static_cast<std::uint64_t>(now_ms())};
    std::lock_guard lock(mu);
    char buf[24];
    std::snprintf(buf, sizeof buf, "s%016llx", static_cast<unsigned long long>(gen()));
    return buf;
}

std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res) {
    try {
        return json::parse(req.body.empty() ? std::string("{}") : req.body);
    } catch (const json::parse_error& e) {
        send_error(res, 400, "malformed_body", std::string("request body is not valid JSON: ") + e.what());
        return std::nullopt;
    }
}

} // namespace

struct Service::Impl {
    ServiceOptions options;
    httplib::Server server;
    mutable std::shared_mutex registry_mu;
    std::map<std::string, std::shared_ptr<SessionSlot>> sessions;

    explicit Impl(ServiceOptions opts) : options(std::move(opts)) {
        load_existing();
        routes();
    }

    std::shared_ptr<SessionSlot> find(const std::string& id) const {
        std::shared_lock lock(registry_mu);
        auto it = sessions.find(id);
        return it == sessions.end() ? nullptr : it->second;
    }

    void persist(const Session& s) const {
        if (options.data_dir)
            save_session_file(s, *options.data_dir / (s.id() + ".json"));
    }

    void write_exports(const Session& s, const Manifest& manifest) const {
        if (!options.data_dir)
            return;
        const auto dir = *options.data_dir / s.id();
        std::filesystem::create_directories(dir);
        for (const auto& entry : manifest.entries) {
            const auto bytes = s.render_midi(entry.candidate_id);
            std::ofstream out(dir / entry.midi_path, std::ios::binary | std::ios::trunc);
            out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
            if (!out)
                throw Error(ErrorCode::io, "cannot write export " + (dir / entry.midi_path).string());
        }
    }

    void load_existing() {
        if (!options.data_dir)
            return;
        std::filesystem::create_directories(*options.data_dir);
        for (const auto& file : std::filesystem::directory_iterator(*options.data_dir)) {
            if (!file.is_regular_file() || file.path().extension() != ".json")
                continue;
            try {
                auto s = load_session_file(file.path());
                auto id = s.id();
                sessions.emplace(std::move(id), std::make_shared<SessionSlot>(std::move(s)));
            } catch (const std::exception& e) {
                std::cerr << "melodevo: skipping " << file.path() << ": " << e.what() << "\n";
            }
        }
    }

    // Runs `fn` with the session locked; maps errors to responses.
    template <typename Fn>
    void with_session(const httplib::Request& req, httplib::Response& res, Fn&& fn) {
        const std::string id = req.path_params.at("id");
        auto slot = find(id);
        if (!slot) {
            send_error(res, 404, "not_found", "unknown session '" + id + "'");
            return;
        }
        std::lock_guard lock(slot->mu);
        try {
            fn(slot->session);
        } catch (const Error& e) {
            send_error(res, e);
        } catch (const std::exception& e) {
            send_error(res, 500, "internal", e.what());
        }
    }

    void routes() {
        server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
            auto body = parse_body(req, res);
            if (!body)
                return;
            try {
                auto cfg = config_from_json(*body);
                std::shared_ptr<SessionSlot> slot;
                {
                    std::unique_lock lock(registry_mu);
                    std::string id;
                    do {
                        id = new_session_id();
                    } while (sessions.count(id) != 0);
                    slot = std::make_shared<SessionSlot>(Session::create(cfg, id));
                    sessions.emplace(id, slot);
                }
                std::lock_guard lock(slot->mu);
                persist(slot->session);
                send_json(res, 201, summary(slot->session));
            } catch (const Error& e) {
                send_error(res, e);
            }
        });

        server.Get("/sessions", [this](const httplib::Request&, httplib::Response& res) {
            std::vector<std::shared_ptr<SessionSlot>> slots;
            {
                std::shared_lock lock(registry_mu);
                for (const auto& [id, slot] : sessions)
                    slots.push_back(slot);
            }
            json list = json::array();
            for (const auto& slot : slots) {
                std::lock_guard lock(slot->mu);
                list.push_back(summary(slot->session));
            }
            send_json(res, 200, json{{"sessions", std::move(list)}});
        });

        server.Get("/sessions/:id", [this](const httplib::Request& req, httplib::Response& res) {
            with_session(req, res, [&](Session& s) { send_json(res, 200, s.to_json()); });
        });

        server.Get("/sessions/:id/round", [this](const httplib::Request& req, httplib::Response& res) {
            with_session(req, res, [&](Session& s) { send_json(res, 200, round_view(s)); });
        });

        server.Post("/sessions/:id/scores", [this](const httplib::Request& req, httplib::Response& res) {
            auto body = parse_body(req, res);
            if (!body)
                return;
            if (!body->is_object() || !body->contains("candidate_id") || !body->at("candidate_id").is_string()
                || !body->contains("score") || !body->at("score").is_number()) {
                send_error(res, 422, "invalid_score", "body must be {\"candidate_id\": string, \"score\": number}");
                return;
            }
            with_session(req, res, [&](Session& s) {
                HumanScore score{body->at("candidate_id").get<std::string>(), body->at("score").get<double>(), now_ms()};
                try {
                    s.submit_score(score);
                } catch (const Error& e) {
                    if (e.code() == ErrorCode::invalid_argument) {
                        send_error(res, e, "invalid_score");
                        return;
                    }
                    throw;
                }
                persist(s);
                const auto pending = s.pending();
                send_json(res, 200, json{{"state", std::string(state_name(s.state()))},
                                         {"round", s.round().index},
                                         {"pending", pending},
                                         {"pending_count", pending.size()}});
            });
        });

        server.Post("/sessions/:id/advance", [this](const httplib::Request& req, httplib::Response& res) {
            auto body = parse_body(req, res);
            if (!body)
                return;
            with_session(req, res, [&](Session& s) {
                if (body->is_object() && body->contains("round")) {
                    const auto& expected = body->at("round");
                    if (!expected.is_number_unsigned() || expected.get<std::uint64_t>() != s.round().index) {
                        send_error(res, 409, "state_conflict",
                                   "round " + expected.dump() + " is not the current round "
                                       + std::to_string(s.round().index));
                        return;
                    }
                }
                s.advance();
                persist(s);
                send_json(res, 200, round_view(s));
            });
        });

        server.Post("/sessions/:id/finish", [this](const httplib::Request& req, httplib::Response& res) {
            with_session(req, res, [&](Session& s) {
                const auto manifest = s.finish();
                persist(s);
                write_exports(s, manifest);
                auto body = manifest_to_json(manifest);
                for (auto& entry : body.at("entries")) {
                    entry["midi_url"] = "/sessions/" + s.id() + "/midi/" + entry.at("candidate_id").get<std::string>();
                }
                send_json(res, 200, body);
            });
        });

        server.Get("/sessions/:id/midi/:candidate", [this](const httplib::Request& req, httplib::Response& res) {
            with_session(req, res, [&](Session& s) {
                const auto bytes = s.render_midi(req.path_params.at("candidate"));
                res.status = 200;
                res.set_content(std::string(bytes.begin(), bytes.end()), "audio/midi");
            });
        });

        if (options.static_dir)
            server.set_mount_point("/", options.static_dir->string());
    }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Service::~Service() {
    stop();
}

bool Service::listen(const std::string& host, int port) {
    return impl_->server.listen(host, port);
}

int Service::bind_to_any_port(const std::string& host) {
    return impl_->server.bind_to_any_port(host);
}

bool Service::listen_after_bind() {
    return impl_->server.listen_after_bind();
}

void Service::stop() {
    if (impl_)
        impl_->server.stop();
}

bool Service::is_running() const {
    return impl_->server.is_running();
}

void Service::wait_until_ready() const {
    impl_->server.wait_until_ready();
}

std::size_t Service::session_count() const {
    std::shared_lock lock(impl_->registry_mu);
    return impl_->sessions.size();
}

} // namespace melodevo
