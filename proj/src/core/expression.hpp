// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "genome.hpp"
#include "midi_io.hpp"

namespace melodevo {

// Render-time articulation. Five independent features, each disabled by its
// zero setting:
//   velocity    key velocity scaled by `gain` plus seeded jitter
//   aftertouch  channel pressure following an attack/decay envelope
//   vibrato     pitch bend tracing a sine after an onset delay
//   brightness  CC74 interpolated from start to end over the phrase
//   release     note-off velocity with seeded jitter

struct VelocityCurve {
    double gain = 1.0;
    double jitter = 0.0;  // +/- velocity units
};

// Linear rise to `attack_level` at t = 0.1, then exp(-decay_rate * (t - 0.1)).
// attack_level == 0 disables aftertouch.
struct EnvelopeSpec {
    double attack_level = 0.0;
    double decay_rate = 0.0;
};

struct VibratoSpec {
    double rate_hz = 0.0;      // [0, 12]
    double depth_cents = 0.0;  // [0, 200]
    double onset_delay = 0.0;  // fraction of the note before the sine starts
};

struct BrightnessSpec {
    bool enabled = false;
    int start = 64;
    int end = 64;
};

struct ReleaseSpec {
    int base = 64;
    double jitter = 0.0;
};

struct ExpressionProfile {
    VelocityCurve velocity;
    EnvelopeSpec aftertouch;
    VibratoSpec vibrato;
    BrightnessSpec brightness;
    ReleaseSpec release;
    std::uint64_t jitter_seed = 0;
    double controller_step = 1.0 / 32;  // sampling interval, fraction of a whole note

    std::vector<std::string> violations() const;
    void validate() const;

    bool operator==(const ExpressionProfile&) const = default;
};

inline constexpr int brightness_controller = 74;
inline constexpr double pitch_bend_range_cents = 200.0;

double eval_envelope(const EnvelopeSpec& spec, double t);

// Cents -> 14-bit pitch bend value for a +/-2 semitone range, clamped.
int cents_to_pitch_bend(double cents);

// Note-on / note-off pairs only, release velocity 64.
ExpressiveEvents render_plain(const MelodyPhrase& phrase, int tpqn);

ExpressiveEvents apply_expression(const MelodyPhrase& phrase, const ExpressionProfile& profile,
                                  int tpqn);

} // namespace melodevo
