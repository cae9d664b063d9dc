// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

// melodevo command-line driver. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "melodevo/melodevo.h"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_verification = 2;

// Owns a melodevo_buffer.
struct Buffer {
    melodevo_buffer raw{nullptr, 0};
    ~Buffer() { melodevo_buffer_free(&raw); }
    std::string_view view() const { return {reinterpret_cast<const char*>(raw.data), raw.size}; }
};

struct SessionHandle {
    melodevo_session* raw = nullptr;
    ~SessionHandle() { melodevo_session_free(raw); }
};

int report_failure(const char* what, melodevo_status status) {
    std::cerr << "melodevo: " << what << ": " << melodevo_last_error() << " (" << melodevo_status_name(status)
              << ")\n";
    return status == MELODEVO_ERR_VERIFICATION ? exit_verification : exit_error;
}

bool write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    return static_cast<bool>(out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interactive differential evolution of melodies"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(melodevo_version()));

    // evolve-synthetic
    auto* synth = app.add_subcommand("evolve-synthetic", "Run DE against a synthetic fitness oracle");
    auto opts = melodevo_synthetic_defaults();
    std::string oracle = "sphere";
    std::string report_path;
    std::string midi_path;
    synth->add_option("--oracle", oracle, "Fitness oracle")
        ->check(CLI::IsMember({"sphere", "hidden-target"}))
        ->capture_default_str();
    synth->add_option("--dims", opts.dims, "Genome dimensionality")->capture_default_str();
    synth->add_option("--pop", opts.population_size, "Population size (>= 4)")->capture_default_str();
    synth->add_option("--gens", opts.generations, "Generations to run")->capture_default_str();
    synth->add_option("--F", opts.F, "Differential weight, (0, 2]")->capture_default_str();
    synth->add_option("--Cr", opts.Cr, "Crossover probability, [0, 1]")->capture_default_str();
    synth->add_option("--seed", opts.seed, "Random seed")->capture_default_str();
    synth->add_option("--out", report_path, "Write the convergence report here instead of stdout");
    synth->add_option("--midi", midi_path, "Also write the best genome as a MIDI file");

    // export-midi
    auto* exporter = app.add_subcommand("export-midi", "Render one candidate of a saved session as MIDI");
    std::string session_path;
    std::string candidate;
    std::string out_path;
    exporter->add_option("--session", session_path, "Session document")->required();
    exporter->add_option("--candidate", candidate, "Candidate id, e.g. r3-7")->required();
    exporter->add_option("--out", out_path, "Output .mid file")->required();

    // replay
    auto* replayer = app.add_subcommand("replay", "Check that a saved session replays bit for bit");
    std::string replay_path;
    replayer->add_option("--session", replay_path, "Session document")->required();

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string data_dir = "melodevo-data";
    std::string static_dir;
    serve->add_option("--host", host, "Bind address")->envname("MELODEVO_HOST")->capture_default_str();
    serve->add_option("--port", port, "Port")->envname("MELODEVO_PORT")->capture_default_str();
    serve->add_option("--data-dir", data_dir, "Session storage directory")
        ->envname("MELODEVO_DATA_DIR")
        ->capture_default_str();
    serve->add_option("--static-dir", static_dir, "Serve a web UI from this directory")
        ->envname("MELODEVO_STATIC_DIR");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_error;
    }

    if (*synth) {
        opts.oracle = oracle == "sphere" ? MELODEVO_ORACLE_SPHERE : MELODEVO_ORACLE_HIDDEN_TARGET;
        Buffer report;
        Buffer midi;
        const auto status = melodevo_evolve_synthetic(&opts, &report.raw, midi_path.empty() ? nullptr : &midi.raw);
        if (status != MELODEVO_OK)
            return report_failure("evolve-synthetic", status);
        if (report_path.empty()) {
            std::cout << report.view();
        } else if (!write_file(report_path, report.view())) {
            std::cerr << "melodevo: cannot write " << report_path << "\n";
            return exit_error;
        }
        if (!midi_path.empty() && !write_file(midi_path, midi.view())) {
            std::cerr << "melodevo: cannot write " << midi_path << "\n";
            return exit_error;
        }
        return exit_ok;
    }

    if (*exporter) {
        SessionHandle session;
        auto status = melodevo_session_load(session_path.c_str(), &session.raw);
        if (status != MELODEVO_OK)
            return report_failure("export-midi", status);
        Buffer smf;
        status = melodevo_session_export_midi(session.raw, candidate.c_str(), &smf.raw);
        if (status != MELODEVO_OK)
            return report_failure("export-midi", status);
        if (!write_file(out_path, smf.view())) {
            std::cerr << "melodevo: cannot write " << out_path << "\n";
            return exit_error;
        }
        return exit_ok;
    }

    if (*replayer) {
        SessionHandle session;
        auto status = melodevo_session_load(replay_path.c_str(), &session.raw);
        if (status != MELODEVO_OK)
            return report_failure("replay", status);
        Buffer diff;
        status = melodevo_session_replay(session.raw, &diff.raw);
        if (status == MELODEVO_ERR_VERIFICATION) {
            std::cout << diff.view();
            return report_failure("replay", status);
        }
        if (status != MELODEVO_OK)
            return report_failure("replay", status);
        std::cout << "replay ok\n";
        return exit_ok;
    }

    if (*serve) {
        melodevo_server* server = nullptr;
        auto status = melodevo_server_create(data_dir.c_str(), static_dir.c_str(), &server);
        if (status != MELODEVO_OK)
            return report_failure("serve", status);
        std::cerr << "melodevo: listening on http://" << host << ":" << port << " (data in " << data_dir << ")\n";
        status = melodevo_server_listen(server, host.c_str(), port);
        melodevo_server_free(server);
        if (status != MELODEVO_OK)
            return report_failure("serve", status);
        return exit_ok;
    }
    return exit_error;
}
