// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

// Writes fixtures for the CLI and external-parser tests:
//   session.json   scripted session, 3 generations
//   tampered.json  same session with one logged score changed
//   smf_<k>.mid    plus smf_<k>.json holding the events that went in

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "expression.hpp"
#include "midi_io.hpp"
#include "random.hpp"
#include "score_script.hpp"
#include "session.hpp"

using namespace melodevo;
using nlohmann::json;

namespace {

const char* kind_name(EventKind k) {
    switch (k) {
    case EventKind::note_on: return "note_on";
    case EventKind::note_off: return "note_off";
    case EventKind::channel_pressure: return "channel_pressure";
    case EventKind::pitch_bend: return "pitch_bend";
    case EventKind::control_change: return "control_change";
    }
    return "?";
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: fixture_gen <dir>\n");
        return 1;
    }
    const std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);

    auto s = Session::create(config_from_json({{"notes", 6}, {"population_size", 6}, {"seed", 99}}), "fixture");
    testing::score_pending(s);
    for (int g = 0; g < 3; ++g) {
        testing::score_pending(s);
        s.advance();
    }
    save_session_file(s, dir / "session.json");

    auto doc = s.to_json();
    auto& first = doc["history"][0]["scores"][0];
    first["score"] = first["score"].get<double>() == 0.0 ? 1.0 : 0.0;
    write_text(dir / "tampered.json", doc.dump());

    RandomStream rng(314, 0);
    for (int k = 0; k < 24; ++k) {
        DecodeContext ctx;
        ctx.bpm = 50 + rng.uniform(0, 150);
        const auto phrase = decode_genome(
            random_genome(rng, melody_sampling_bounds(ctx.scale, ctx.grid, 1 + rng.below(20))), ctx);
        SmfConfig cfg;
        cfg.tpqn = k % 3 == 0 ? 480 : 96 + static_cast<int>(rng.below(800));
        cfg.bpm = phrase.bpm;
        cfg.channel = static_cast<int>(rng.below(16));
        ExpressionProfile profile;
        if (k % 2 == 1) {
            profile.aftertouch = {rng.uniform01(), rng.uniform(0, 6)};
            profile.vibrato = {rng.uniform(1, 10), rng.uniform(1, 200), rng.uniform01()};
            profile.brightness = {true, static_cast<int>(rng.below(128)), static_cast<int>(rng.below(128))};
            profile.release.jitter = rng.uniform(0, 30);
            profile.jitter_seed = rng.next_u64();
        }
        const auto events = apply_expression(phrase, profile, cfg.tpqn);
        const auto bytes = write_smf(events, cfg);
        const auto stem = "smf_" + std::to_string(k);
        write_text(dir / (stem + ".mid"), std::string(bytes.begin(), bytes.end()));

        json list = json::array();
        for (const auto& e : events)
            list.push_back({kind_name(e.kind), e.tick, e.data1, e.data2});
        write_text(dir / (stem + ".json"),
                   json{{"tpqn", cfg.tpqn}, {"bpm", cfg.bpm}, {"channel", cfg.channel}, {"events", list}}.dump());
    }
    return 0;
}
