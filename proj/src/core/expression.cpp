// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "expression.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "error.hpp"
#include "random.hpp"

namespace melodevo {

namespace {

constexpr double attack_end = 0.1;
constexpr std::uint64_t jitter_stream_id = 0x6a69747465720000ULL;

int clamp_round(double v, int lo, int hi) {
    return static_cast<int>(std::clamp(std::round(v), static_cast<double>(lo), static_cast<double>(hi)));
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

} // namespace

std::vector<std::string> ExpressionProfile::violations() const {
    std::vector<std::string> out;
    if (!(velocity.gain >= 0.0) || !std::isfinite(velocity.gain))
        out.emplace_back("velocity gain must be non-negative");
    if (!(velocity.jitter >= 0.0 && velocity.jitter <= 127.0))
        out.emplace_back("velocity jitter must lie in [0, 127]");
    if (!within(aftertouch.attack_level, 0.0, 1.0))
        out.emplace_back("aftertouch attack level must lie in [0, 1]");
    if (!(aftertouch.decay_rate >= 0.0) || !std::isfinite(aftertouch.decay_rate))
        out.emplace_back("aftertouch decay rate must be non-negative");
    if (!within(vibrato.rate_hz, 0.0, 12.0))
        out.emplace_back("vibrato rate must lie in [0, 12] Hz");
    if (!within(vibrato.depth_cents, 0.0, 200.0))
        out.emplace_back("vibrato depth must lie in [0, 200] cents");
    if (!within(vibrato.onset_delay, 0.0, 1.0))
        out.emplace_back("vibrato onset delay must lie in [0, 1]");
    if (brightness.start < 0 || brightness.start > 127 || brightness.end < 0 || brightness.end > 127)
        out.emplace_back("brightness values must lie in [0, 127]");
    if (release.base < 1 || release.base > 127)
        out.emplace_back("release base velocity must lie in [1, 127]");
    if (!(release.jitter >= 0.0 && release.jitter <= 127.0))
        out.emplace_back("release jitter must lie in [0, 127]");
    if (!(controller_step > 0.0 && controller_step <= 1.0))
        out.emplace_back("controller step must lie in (0, 1]");
    return out;
}

void ExpressionProfile::validate() const {
    auto problems = violations();
    if (!problems.empty())
        throw Error(ErrorCode::invalid_config, "invalid expression profile: " + problems.front(), problems);
}

double eval_envelope(const EnvelopeSpec& spec, double t) {
    t = std::clamp(t, 0.0, 1.0);
    double v = t <= attack_end ? spec.attack_level * (t / attack_end)
                               : spec.attack_level * std::exp(-spec.decay_rate * (t - attack_end));
    return std::clamp(v, 0.0, 1.0);
}

int cents_to_pitch_bend(double cents) {
    return clamp_round(pitch_bend_center + cents / pitch_bend_range_cents * 8192.0, 0, 16383);
}

ExpressiveEvents render_plain(const MelodyPhrase& phrase, int tpqn) {
    ExpressiveEvents events;
    events.reserve(phrase.notes.size() * 2);
    std::int64_t tick = 0;
    for (const auto& note : phrase.notes) {
        const std::int64_t length = ticks_for(note.duration, tpqn);
        events.push_back({EventKind::note_on, tick, note.pitch, note.velocity});
        events.push_back({EventKind::note_off, tick + length, note.pitch, 64});
        tick += length;
    }
    return events;
}

ExpressiveEvents apply_expression(const MelodyPhrase& phrase, const ExpressionProfile& profile,
                                  int tpqn) {
    profile.validate();
    if (tpqn < 24)
        throw Error(ErrorCode::invalid_argument, "tpqn must be at least 24");

    RandomStream jitter(profile.jitter_seed, jitter_stream_id);
    const std::int64_t step = std::max<std::int64_t>(1, ticks_for(profile.controller_step, tpqn));
    const double seconds_per_tick = 60.0 / (phrase.bpm * tpqn);
    const bool pressure_on = profile.aftertouch.attack_level > 0.0;
    const bool vibrato_on = profile.vibrato.depth_cents > 0.0 && profile.vibrato.rate_hz > 0.0;

    std::int64_t total = 0;
    for (const auto& note : phrase.notes)
        total += ticks_for(note.duration, tpqn);

    ExpressiveEvents events;
    std::int64_t onset = 0;
    for (const auto& note : phrase.notes) {
        const std::int64_t length = ticks_for(note.duration, tpqn);
        const std::int64_t end = onset + length;
        // two draws per note regardless of settings keep the stream aligned
        const double velocity_u = 2.0 * jitter.uniform01() - 1.0;
        const double release_u = 2.0 * jitter.uniform01() - 1.0;

        if (profile.brightness.enabled) {
            const double pos = total > 0 ? static_cast<double>(onset) / static_cast<double>(total) : 0.0;
            const double value = profile.brightness.start
                + (profile.brightness.end - profile.brightness.start) * pos;
            events.push_back({EventKind::control_change, onset, brightness_controller,
                              clamp_round(value, 0, 127)});
        }

        const int velocity = clamp_round(note.velocity * profile.velocity.gain
                                             + profile.velocity.jitter * velocity_u, 1, 127);
        events.push_back({EventKind::note_on, onset, note.pitch, velocity});

        const double vibrato_start = profile.vibrato.onset_delay * static_cast<double>(length);
        bool bent = false;
        for (std::int64_t offset = 0; offset < length; offset += step) {
            const double t = static_cast<double>(offset) / static_cast<double>(length);
            if (pressure_on) {
                events.push_back({EventKind::channel_pressure, onset + offset,
                                  clamp_round(127.0 * eval_envelope(profile.aftertouch, t), 0, 127), 0});
            }
            if (vibrato_on && static_cast<double>(offset) >= vibrato_start) {
                const double seconds = (static_cast<double>(offset) - vibrato_start) * seconds_per_tick;
                const double cents = profile.vibrato.depth_cents
                    * std::sin(2.0 * std::numbers::pi * profile.vibrato.rate_hz * seconds);
                events.push_back({EventKind::pitch_bend, onset + offset, cents_to_pitch_bend(cents), 0});
                bent = true;
            }
        }

        const int release = clamp_round(profile.release.base + profile.release.jitter * release_u, 1, 127);
        events.push_back({EventKind::note_off, end, note.pitch, release});
        if (bent)
            events.push_back({EventKind::pitch_bend, end, pitch_bend_center, 0});
        onset = end;
    }

    std::stable_sort(events.begin(), events.end(),
                     [](const MidiEvent& a, const MidiEvent& b) { return a.tick < b.tick; });
    return events;
}

} // namespace melodevo
