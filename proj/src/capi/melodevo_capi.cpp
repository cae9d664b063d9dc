// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "melodevo/melodevo.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "error.hpp"
#include "expression.hpp"
#include "service.hpp"
#include "session.hpp"
#include "synthetic.hpp"

struct melodevo_session {
    melodevo::Session session;
};

struct melodevo_server {
    melodevo::Service service;
};

namespace {

thread_local std::string last_error;

melodevo_status to_status(melodevo::ErrorCode code) {
    using melodevo::ErrorCode;
    switch (code) {
    case ErrorCode::invalid_argument: return MELODEVO_ERR_INVALID_ARGUMENT;
    case ErrorCode::invalid_config: return MELODEVO_ERR_INVALID_CONFIG;
    case ErrorCode::not_found: return MELODEVO_ERR_NOT_FOUND;
    case ErrorCode::scores_pending: return MELODEVO_ERR_SCORES_PENDING;
    case ErrorCode::state_conflict: return MELODEVO_ERR_STATE;
    case ErrorCode::io: return MELODEVO_ERR_IO;
    case ErrorCode::parse: return MELODEVO_ERR_PARSE;
    case ErrorCode::schema_version: return MELODEVO_ERR_SCHEMA_VERSION;
    case ErrorCode::verification: return MELODEVO_ERR_VERIFICATION;
    case ErrorCode::internal: return MELODEVO_ERR_INTERNAL;
    }
    return MELODEVO_ERR_INTERNAL;
}

melodevo_status fail(melodevo_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
melodevo_status guarded(Fn&& fn) noexcept {
    last_error.clear();
    try {
        return fn();
    } catch (const melodevo::Error& e) {
        std::string message = e.what();
        if (!e.details().empty()) {
            message += ": ";
            for (std::size_t k = 0; k < e.details().size(); ++k)
                message += (k ? ", " : "") + e.details()[k];
        }
        return fail(to_status(e.code()), std::move(message));
    } catch (const std::bad_alloc&) {
        return fail(MELODEVO_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(MELODEVO_ERR_INTERNAL, e.what());
    }
}

void fill(melodevo_buffer* out, const void* data, std::size_t size) {
    out->data = static_cast<uint8_t*>(std::malloc(size == 0 ? 1 : size));
    if (!out->data)
        throw std::bad_alloc();
    if (size != 0)
        std::memcpy(out->data, data, size);
    out->size = size;
}

void fill(melodevo_buffer* out, const std::string& text) {
    fill(out, text.data(), text.size());
}

} // namespace

extern "C" {

const char* melodevo_version(void) {
    return "0.1.0";
}

const char* melodevo_status_name(melodevo_status status) {
    switch (status) {
    case MELODEVO_OK: return "ok";
    case MELODEVO_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case MELODEVO_ERR_INVALID_CONFIG: return "invalid_config";
    case MELODEVO_ERR_NOT_FOUND: return "not_found";
    case MELODEVO_ERR_SCORES_PENDING: return "scores_pending";
    case MELODEVO_ERR_STATE: return "state_conflict";
    case MELODEVO_ERR_IO: return "io_error";
    case MELODEVO_ERR_PARSE: return "parse_error";
    case MELODEVO_ERR_SCHEMA_VERSION: return "schema_version";
    case MELODEVO_ERR_VERIFICATION: return "verification_failed";
    case MELODEVO_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* melodevo_last_error(void) {
    return last_error.c_str();
}

void melodevo_buffer_free(melodevo_buffer* buffer) {
    if (!buffer)
        return;
    std::free(buffer->data);
    buffer->data = nullptr;
    buffer->size = 0;
}

melodevo_status melodevo_session_create(const char* config_json, const char* session_id,
                                        melodevo_session** out) {
    return guarded([&] {
        if (!out || !session_id || !*session_id)
            return fail(MELODEVO_ERR_INVALID_ARGUMENT, "session id and output handle are required");
        nlohmann::json cfg = nlohmann::json::object();
        if (config_json && *config_json) {
            try {
                cfg = nlohmann::json::parse(config_json);
            } catch (const nlohmann::json::parse_error& e) {
                return fail(MELODEVO_ERR_PARSE, std::string("config is not valid JSON: ") + e.what());
            }
        }
        auto session = melodevo::Session::create(melodevo::config_from_json(cfg), session_id);
        *out = new melodevo_session{std::move(session)};
        return MELODEVO_OK;
    });
}

melodevo_status melodevo_session_load(const char* path, melodevo_session** out) {
    return guarded([&] {
        if (!path || !out)
            return fail(MELODEVO_ERR_INVALID_ARGUMENT, "path and output handle are required");
        *out = new melodevo_session{melodevo::load_session_file(path)};
        return MELODEVO_OK;
    });
}

melodevo_status melodevo_session_load_bytes(const uint8_t* data, size_t size, melodevo_session** out) {
    return guarded([&] {
        if (!out || (!data && size != 0))
            return fail(MELODEVO_ERR_INVALID_ARGUMENT, "data and output handle are required");
        std::string_view text(reinterpret_cast<const char*>(data), size);
        *out = new melodevo_session{melodevo::Session::load(text)};
        return MELODEVO_OK;
    });
}

melodevo_status melodevo_session_save(const melodevo_session* session, const char* path) {
    return guarded([&] {
        if (!session || !path)
            return fail(MELODEVO_ERR_INVALID_ARGUMENT, "session and path are required");
        melodevo::save_session_file(session->session, path);
        return MELODEVO_OK;
    });
}

melodevo_status melodevo_session_document(const melodevo_session* session, melodevo_buffer* out) {
    return guarded([&] {
        if (!session || !out)
            return fail(MELODEVO_ERR_INVALID_ARGUMENT, "session and output buffer are required");
        fill(out, session->session.save());
        return MELODEVO_OK;
    });
}

void melodevo_session_free(melodevo_session* session) {
    delete session;
}

melodevo_status melodevo_session_round(const melodevo_session* session, melodevo_buffer* json_out) {
    return guarded([&] {
        if (!session || !json_out)
            return fail(MELODEVO_ERR_INVALID_ARGUMENT, "session and output buffer are required");
        const auto& s = session->session;
        nlohmann::json candidates = nlohmann::json::array();
        for (const auto& c : s.round().candidates) {
            const auto& entry = s.round().book.entry(c.id);
            candidates.push_back({{"id", c.id},
                                  {"slot", c.slot},
                                  {"pending", !entry.fitness.has_value()},
                                  {"cached", entry.cached},
                                  {"notes", melodevo::phrase_to_json(s.decode(c.genome)).at("notes")}});
        }
        nlohmann::json view{{"session_id", s.id()},
                            {"state", std::string(melodevo::state_name(s.state()))},
                            {"round", s.round().index},
                            {"generation", s.population().generation},
                            {"pending", s.pending()},
                            {"candidates", std::move(candidates)}};
        fill(json_out, view.dump());
        return MELODEVO_OK;
    });
}

melodevo_status melodevo_session_submit_score(melodevo_session* session, const char* candidate_id, double score) {
    return guarded([&] {
        if (!session || !candidate_id)
            return fail(MELODEVO_ERR_INVALID_ARGUMENT, "session and candidate id are required");
        session->session.submit_score({candidate_id, score, melodevo::now_ms()});
        return MELODEVO_OK;
    });
}

melodevo_status melodevo_session_advance(melodevo_session* session) {
    return guarded([&] {
        if (!session)
            return fail(MELODEVO_ERR_INVALID_ARGUMENT, "session is required");
        session->session.advance();
        return MELODEVO_OK;
    });
}

melodevo_status melodevo_session_finish(melodevo_session* session, melodevo_buffer* manifest_json) {
    return guarded([&] {
        if (!session)
            return fail(MELODEVO_ERR_INVALID_ARGUMENT, "session is required");
        const auto manifest = session->session.finish();
        if (manifest_json)
            fill(manifest_json, melodevo::manifest_to_json(manifest).dump(2));
        return MELODEVO_OK;
    });
}

melodevo_status melodevo_session_export_midi(const melodevo_session* session, const char* candidate_id,
                                             melodevo_buffer* smf_out) {
    return guarded([&] {
        if (!session || !candidate_id || !smf_out)
            return fail(MELODEVO_ERR_INVALID_ARGUMENT, "session, candidate id and output buffer are required");
        const auto bytes = session->session.render_midi(candidate_id);
        fill(smf_out, bytes.data(), bytes.size());
        return MELODEVO_OK;
    });
}

melodevo_status melodevo_session_replay(const melodevo_session* session, melodevo_buffer* report) {
    return guarded([&] {
        if (!session)
            return fail(MELODEVO_ERR_INVALID_ARGUMENT, "session is required");
        const auto result = melodevo::replay(session->session);
        std::string text;
        for (const auto& line : result.differences)
            text += line + "\n";
        if (report)
            fill(report, text);
        if (!result.ok)
            return fail(MELODEVO_ERR_VERIFICATION,
                        "replay differs from stored session (" + std::to_string(result.differences.size())
                            + " difference(s))");
        return MELODEVO_OK;
    });
}

melodevo_synthetic_options melodevo_synthetic_defaults(void) {
    const melodevo::SyntheticOptions d;
    return {MELODEVO_ORACLE_SPHERE, d.dims, d.population_size, d.generations, d.F, d.Cr, d.seed};
}

melodevo_status melodevo_evolve_synthetic(const melodevo_synthetic_options* options, melodevo_buffer* report,
                                          melodevo_buffer* best_midi) {
    return guarded([&] {
        if (!options || !report)
            return fail(MELODEVO_ERR_INVALID_ARGUMENT, "options and report buffer are required");
        if (options->oracle != MELODEVO_ORACLE_SPHERE && options->oracle != MELODEVO_ORACLE_HIDDEN_TARGET)
            return fail(MELODEVO_ERR_INVALID_ARGUMENT, "unknown oracle");
        melodevo::SyntheticOptions o;
        o.oracle = options->oracle == MELODEVO_ORACLE_SPHERE ? melodevo::OracleKind::sphere
                                                             : melodevo::OracleKind::hidden_target;
        o.dims = options->dims;
        o.population_size = options->population_size;
        o.generations = options->generations;
        o.F = options->F;
        o.Cr = options->Cr;
        o.seed = options->seed;
        if (best_midi && o.dims % melodevo::genes_per_note != 0)
            return fail(MELODEVO_ERR_INVALID_ARGUMENT, "MIDI output needs dims to be a multiple of 3");

        const auto result = melodevo::run_synthetic(o);
        std::vector<std::uint8_t> smf;
        if (best_midi) {
            const auto ctx = melodevo::synthetic_decode_context();
            const auto phrase = melodevo::decode_genome(result.best, ctx);
            smf = melodevo::write_smf(melodevo::render_plain(phrase, melodevo::default_tpqn),
                                      melodevo::SmfConfig{melodevo::default_tpqn, ctx.bpm, 0});
        }
        fill(report, melodevo::format_report(result));
        if (best_midi)
            fill(best_midi, smf.data(), smf.size());
        return MELODEVO_OK;
    });
}

melodevo_status melodevo_server_create(const char* data_dir, const char* static_dir, melodevo_server** out) {
    return guarded([&] {
        if (!out)
            return fail(MELODEVO_ERR_INVALID_ARGUMENT, "output handle is required");
        melodevo::ServiceOptions options;
        if (data_dir && *data_dir)
            options.data_dir = data_dir;
        if (static_dir && *static_dir)
            options.static_dir = static_dir;
        *out = new melodevo_server{melodevo::Service(std::move(options))};
        return MELODEVO_OK;
    });
}

melodevo_status melodevo_server_listen(melodevo_server* server, const char* host, int port) {
    return guarded([&] {
        if (!server || !host)
            return fail(MELODEVO_ERR_INVALID_ARGUMENT, "server and host are required");
        if (!server->service.listen(host, port))
            return fail(MELODEVO_ERR_IO, "cannot listen on " + std::string(host) + ":" + std::to_string(port));
        return MELODEVO_OK;
    });
}

void melodevo_server_stop(melodevo_server* server) {
    if (server)
        server->service.stop();
}

void melodevo_server_free(melodevo_server* server) {
    delete server;
}

} // extern "C"
