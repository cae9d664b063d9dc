// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace melodevo {

enum class EventKind {
    note_on,           // data1 = pitch, data2 = velocity
    note_off,          // data1 = pitch, data2 = release velocity
    channel_pressure,  // data1 = pressure
    pitch_bend,        // data1 = 14-bit value, 8192 is center
    control_change,    // data1 = controller, data2 = value
};

struct MidiEvent {
    EventKind kind = EventKind::note_on;
    std::int64_t tick = 0;
    int data1 = 0;
    int data2 = 0;

    bool operator==(const MidiEvent&) const = default;
};

// Tick-ordered channel event stream for one monophonic phrase.
using ExpressiveEvents = std::vector<MidiEvent>;

inline constexpr int pitch_bend_center = 8192;
inline constexpr int default_tpqn = 480;

// round(duration * 4 * tpqn); duration is a fraction of a whole note.
std::int64_t ticks_for(double duration, int tpqn);

// Microseconds per quarter note, round(60e6 / bpm).
std::uint32_t tempo_meta(double bpm);

// Problems with the event stream: tick order, note pairing, value ranges.
std::vector<std::string> event_violations(std::span<const MidiEvent> events);

std::vector<std::uint8_t> encode_vlq(std::uint32_t value);

// Reads one quantity starting at `pos` and advances it.
std::uint32_t decode_vlq(std::span<const std::uint8_t> bytes, std::size_t& pos);

inline constexpr std::uint32_t vlq_max = 0x0FFFFFFF;

struct SmfConfig {
    int tpqn = default_tpqn;
    double bpm = 120.0;
    int channel = 0;

    std::vector<std::string> violations() const;
};

// Format-0 Standard MIDI File: MThd, then one MTrk holding Set Tempo, a
// pitch-bend-range RPN (only when the stream bends), the events with explicit
// status bytes, and End of Track.
std::vector<std::uint8_t> write_smf(std::span<const MidiEvent> events, const SmfConfig& cfg);

} // namespace melodevo
