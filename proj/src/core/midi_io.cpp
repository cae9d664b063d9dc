// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "midi_io.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "error.hpp"

namespace melodevo {

std::int64_t ticks_for(double duration, int tpqn) {
    return static_cast<std::int64_t>(std::llround(duration * 4.0 * tpqn));
}

std::uint32_t tempo_meta(double bpm) {
    if (!(bpm > 0.0))
        throw Error(ErrorCode::invalid_argument, "bpm must be positive");
    return static_cast<std::uint32_t>(std::llround(60'000'000.0 / bpm));
}

std::vector<std::string> event_violations(std::span<const MidiEvent> events) {
    std::vector<std::string> out;
    std::map<int, int> open;  // pitch -> sounding count
    std::int64_t last_tick = 0;
    auto in_range = [](int v, int lo, int hi) { return v >= lo && v <= hi; };
    for (std::size_t k = 0; k < events.size(); ++k) {
        const auto& e = events[k];
        const std::string where = "event " + std::to_string(k) + ": ";
        if (e.tick < last_tick || e.tick < 0)
            out.push_back(where + "tick goes backwards");
        last_tick = std::max(last_tick, e.tick);
        switch (e.kind) {
        case EventKind::note_on:
            if (!in_range(e.data1, 0, 127) || !in_range(e.data2, 1, 127))
                out.push_back(where + "note_on out of range");
            ++open[e.data1];
            break;
        case EventKind::note_off:
            if (!in_range(e.data1, 0, 127) || !in_range(e.data2, 0, 127))
                out.push_back(where + "note_off out of range");
            if (open[e.data1] == 0)
                out.push_back(where + "note_off without note_on");
            else
                --open[e.data1];
            break;
        case EventKind::channel_pressure:
            if (!in_range(e.data1, 0, 127))
                out.push_back(where + "pressure out of range");
            break;
        case EventKind::pitch_bend:
            if (!in_range(e.data1, 0, 16383))
                out.push_back(where + "pitch bend out of range");
            break;
        case EventKind::control_change:
            if (!in_range(e.data1, 0, 127) || !in_range(e.data2, 0, 127))
                out.push_back(where + "control change out of range");
            break;
        }
    }
    for (const auto& [pitch, count] : open) {
        if (count != 0)
            out.push_back("note " + std::to_string(pitch) + " is never released");
    }
    return out;
}

std::vector<std::uint8_t> encode_vlq(std::uint32_t value) {
    if (value > vlq_max)
        throw Error(ErrorCode::invalid_argument, "value too large for a MIDI variable-length quantity");
    std::uint8_t groups[4];
    int n = 0;
    do {
        groups[n++] = static_cast<std::uint8_t>(value & 0x7F);
        value >>= 7;
    } while (value != 0);
    std::vector<std::uint8_t> out;
    for (int k = n - 1; k >= 0; --k)
        out.push_back(static_cast<std::uint8_t>(groups[k] | (k > 0 ? 0x80 : 0x00)));
    return out;
}

std::uint32_t decode_vlq(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    std::uint32_t value = 0;
    for (int k = 0; k < 4; ++k) {
        if (pos >= bytes.size())
            throw Error(ErrorCode::parse, "truncated variable-length quantity");
        const std::uint8_t b = bytes[pos++];
        value = (value << 7) | (b & 0x7F);
        if ((b & 0x80) == 0)
            return value;
    }
    throw Error(ErrorCode::parse, "variable-length quantity longer than 4 bytes");
}

std::vector<std::string> SmfConfig::violations() const {
    std::vector<std::string> out;
    if (tpqn < 24 || tpqn > 960)
        out.emplace_back("tpqn must lie in [24, 960]");
    if (!(bpm > 0.0 && bpm < 1000.0))
        out.emplace_back("bpm must lie in (0, 1000)");
    if (channel < 0 || channel > 15)
        out.emplace_back("channel must lie in [0, 15]");
    return out;
}

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

class TrackWriter {
public:
    explicit TrackWriter(int channel) : channel_(static_cast<std::uint8_t>(channel)) {}

    void message(std::int64_t tick, std::uint8_t status, std::initializer_list<int> data) {
        delta(tick);
        body_.push_back(static_cast<std::uint8_t>(status | channel_));
        for (int d : data)
            body_.push_back(static_cast<std::uint8_t>(d));
    }

    void meta(std::int64_t tick, std::uint8_t type, std::initializer_list<std::uint8_t> data) {
        delta(tick);
        body_.push_back(0xFF);
        body_.push_back(type);
        auto len = encode_vlq(static_cast<std::uint32_t>(data.size()));
        body_.insert(body_.end(), len.begin(), len.end());
        body_.insert(body_.end(), data.begin(), data.end());
    }

    const std::vector<std::uint8_t>& body() const { return body_; }

private:
    void delta(std::int64_t tick) {
        const std::int64_t d = tick - last_tick_;
        if (d < 0 || d > static_cast<std::int64_t>(vlq_max))
            throw Error(ErrorCode::internal, "delta time not encodable");
        auto bytes = encode_vlq(static_cast<std::uint32_t>(d));
        body_.insert(body_.end(), bytes.begin(), bytes.end());
        last_tick_ = tick;
    }

    std::uint8_t channel_;
    std::int64_t last_tick_ = 0;
    std::vector<std::uint8_t> body_;
};

} // namespace

std::vector<std::uint8_t> write_smf(std::span<const MidiEvent> events, const SmfConfig& cfg) {
    if (auto problems = cfg.violations(); !problems.empty())
        throw Error(ErrorCode::invalid_config, "invalid SMF config: " + problems.front(), problems);
    if (auto problems = event_violations(events); !problems.empty())
        throw Error(ErrorCode::internal, "malformed event stream: " + problems.front(), problems);

    TrackWriter track(cfg.channel);
    const std::uint32_t tempo = tempo_meta(cfg.bpm);
    track.meta(0, 0x51, {static_cast<std::uint8_t>(tempo >> 16), static_cast<std::uint8_t>(tempo >> 8),
                         static_cast<std::uint8_t>(tempo)});

    const bool bends = std::any_of(events.begin(), events.end(),
                                   [](const MidiEvent& e) { return e.kind == EventKind::pitch_bend; });
    if (bends) {
        // RPN 0,0 (pitch bend sensitivity) = 2 semitones, 0 cents; then null RPN
        track.message(0, 0xB0, {101, 0});
        track.message(0, 0xB0, {100, 0});
        track.message(0, 0xB0, {6, 2});
        track.message(0, 0xB0, {38, 0});
        track.message(0, 0xB0, {101, 127});
        track.message(0, 0xB0, {100, 127});
    }

    std::int64_t end_tick = 0;
    for (const auto& e : events) {
        switch (e.kind) {
        case EventKind::note_on: track.message(e.tick, 0x90, {e.data1, e.data2}); break;
        case EventKind::note_off: track.message(e.tick, 0x80, {e.data1, e.data2}); break;
        case EventKind::channel_pressure: track.message(e.tick, 0xD0, {e.data1}); break;
        case EventKind::pitch_bend:
            track.message(e.tick, 0xE0, {e.data1 & 0x7F, (e.data1 >> 7) & 0x7F});
            break;
        case EventKind::control_change: track.message(e.tick, 0xB0, {e.data1, e.data2}); break;
        }
        end_tick = e.tick;
    }
    track.meta(end_tick, 0x2F, {});

    std::vector<std::uint8_t> out;
    out.reserve(22 + track.body().size());
    out.insert(out.end(), {'M', 'T', 'h', 'd'});
    put_u32(out, 6);
    put_u16(out, 0);  // format 0
    put_u16(out, 1);  // one track
    put_u16(out, static_cast<std::uint32_t>(cfg.tpqn));
    out.insert(out.end(), {'M', 'T', 'r', 'k'});
    put_u32(out, static_cast<std::uint32_t>(track.body().size()));
    out.insert(out.end(), track.body().begin(), track.body().end());
    return out;
}

} // namespace melodevo
