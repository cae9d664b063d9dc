// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "genome.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "error.hpp"

namespace melodevo {

Genome::Genome(std::vector<double> genes) : genes_(std::move(genes)) {
    if (genes_.empty())
        throw Error(ErrorCode::invalid_argument, "genome must contain at least one gene");
    for (std::size_t j = 0; j < genes_.size(); ++j) {
        if (!std::isfinite(genes_[j])) {
            throw Error(ErrorCode::invalid_argument,
                        "genome gene " + std::to_string(j) + " is not finite");
        }
    }
}

bool Genome::bitwise_equal(const Genome& other) const {
    if (genes_.size() != other.genes_.size())
        return false;
    for (std::size_t j = 0; j < genes_.size(); ++j) {
        if (std::bit_cast<std::uint64_t>(genes_[j]) != std::bit_cast<std::uint64_t>(other.genes_[j]))
            return false;
    }
    return true;
}

namespace {

constexpr std::array<int, 7> kMajor{0, 2, 4, 5, 7, 9, 11};
constexpr std::array<int, 7> kNaturalMinor{0, 2, 3, 5, 7, 8, 10};
constexpr std::array<int, 7> kHarmonicMinor{0, 2, 3, 5, 7, 8, 11};
constexpr std::array<int, 7> kDorian{0, 2, 3, 5, 7, 9, 10};
constexpr std::array<int, 7> kMixolydian{0, 2, 4, 5, 7, 9, 10};
constexpr std::array<int, 5> kPentatonicMajor{0, 2, 4, 7, 9};
constexpr std::array<int, 5> kPentatonicMinor{0, 3, 5, 7, 10};

struct ModeEntry {
    Mode mode;
    std::string_view name;
};

constexpr std::array<ModeEntry, 7> kModeNames{{
    {Mode::major, "major"},
    {Mode::natural_minor, "natural_minor"},
    {Mode::harmonic_minor, "harmonic_minor"},
    {Mode::dorian, "dorian"},
    {Mode::mixolydian, "mixolydian"},
    {Mode::pentatonic_major, "pentatonic_major"},
    {Mode::pentatonic_minor, "pentatonic_minor"},
}};

} // namespace

std::string_view mode_name(Mode mode) {
    for (const auto& entry : kModeNames) {
        if (entry.mode == mode)
            return entry.name;
    }
    return "major";
}

std::optional<Mode> parse_mode(std::string_view name) {
    for (const auto& entry : kModeNames) {
        if (entry.name == name)
            return entry.mode;
    }
    return std::nullopt;
}

std::span<const int> mode_intervals(Mode mode) {
    switch (mode) {
    case Mode::major: return kMajor;
    case Mode::natural_minor: return kNaturalMinor;
    case Mode::harmonic_minor: return kHarmonicMinor;
    case Mode::dorian: return kDorian;
    case Mode::mixolydian: return kMixolydian;
    case Mode::pentatonic_major: return kPentatonicMajor;
    case Mode::pentatonic_minor: return kPentatonicMinor;
    }
    return kMajor;
}

std::vector<std::string> ScaleContext::violations() const {
    std::vector<std::string> out;
    if (key_root < 0 || key_root > 11)
        out.emplace_back("key_root must be a pitch class in [0, 11]");
    if (low_bound < 0 || low_bound > 127 || high_bound < 0 || high_bound > 127)
        out.emplace_back("pitch bounds must be MIDI note numbers in [0, 127]");
    if (low_bound >= high_bound)
        out.emplace_back("low_bound must be below high_bound");
    if (out.empty() && scale_pitches(*this).empty())
        out.emplace_back("no scale pitches between low_bound and high_bound");
    return out;
}

void ScaleContext::validate() const {
    auto problems = violations();
    if (!problems.empty())
        throw Error(ErrorCode::invalid_config, "invalid scale context: " + problems.front(), problems);
}

std::vector<int> scale_pitches(const ScaleContext& ctx) {
    const auto intervals = mode_intervals(ctx.mode);
    std::vector<int> pitches;
    for (int note = std::max(ctx.low_bound, 0); note <= std::min(ctx.high_bound, 127); ++note) {
        const int degree = ((note - ctx.key_root) % 12 + 12) % 12;
        if (std::find(intervals.begin(), intervals.end(), degree) != intervals.end())
            pitches.push_back(note);
    }
    return pitches;
}

DurationGrid::DurationGrid() : allowed_{1.0 / 16, 1.0 / 8, 3.0 / 16, 1.0 / 4, 3.0 / 8, 1.0 / 2, 1.0} {}

DurationGrid::DurationGrid(std::vector<double> allowed) : allowed_(std::move(allowed)) {
    auto problems = violations(allowed_);
    if (!problems.empty())
        throw Error(ErrorCode::invalid_config, "invalid duration grid: " + problems.front(), problems);
}

std::vector<std::string> DurationGrid::violations(std::span<const double> allowed) {
    std::vector<std::string> out;
    if (allowed.empty()) {
        out.emplace_back("duration grid must not be empty");
        return out;
    }
    for (std::size_t k = 0; k < allowed.size(); ++k) {
        if (!(allowed[k] > 0.0 && allowed[k] <= 4.0)) {
            out.emplace_back("duration grid entries must lie in (0, 4]");
            break;
        }
    }
    for (std::size_t k = 1; k < allowed.size(); ++k) {
        if (!(allowed[k - 1] < allowed[k])) {
            out.emplace_back("duration grid must be strictly increasing");
            break;
        }
    }
    return out;
}

bool DurationGrid::contains(double duration) const {
    return std::binary_search(allowed_.begin(), allowed_.end(), duration);
}

int decode_pitch(double gene, const ScaleContext& ctx) {
    const auto pitches = scale_pitches(ctx);
    const double x = std::clamp(gene, static_cast<double>(ctx.low_bound),
                                static_cast<double>(ctx.high_bound));
    auto upper = std::lower_bound(pitches.begin(), pitches.end(), x,
                                  [](int p, double v) { return static_cast<double>(p) < v; });
    if (upper == pitches.begin())
        return *upper;
    if (upper == pitches.end())
        return pitches.back();
    const int below = *(upper - 1);
    // tie goes to the lower pitch
    return (x - below) <= (*upper - x) ? below : *upper;
}

double decode_duration(double gene, const DurationGrid& grid) {
    const auto allowed = grid.allowed();
    auto upper = std::lower_bound(allowed.begin(), allowed.end(), gene);
    if (upper == allowed.begin())
        return *upper;
    if (upper == allowed.end())
        return allowed.back();
    const double shorter = *(upper - 1);
    return (gene - shorter) <= (*upper - gene) ? shorter : *upper;
}

int decode_velocity(double gene) {
    return static_cast<int>(std::round(std::clamp(gene, 1.0, 127.0)));
}

MelodyPhrase decode_genome(const Genome& genome, const DecodeContext& ctx) {
    if (genome.size() == 0 || genome.size() % genes_per_note != 0) {
        throw Error(ErrorCode::invalid_argument,
                    "melody genome length " + std::to_string(genome.size())
                        + " is not a positive multiple of 3");
    }
    if (!(ctx.bpm > 0.0))
        throw Error(ErrorCode::invalid_argument, "bpm must be positive");

    MelodyPhrase phrase;
    phrase.bpm = ctx.bpm;
    phrase.notes.reserve(genome.size() / genes_per_note);
    double onset = 0.0;
    for (std::size_t base = 0; base < genome.size(); base += genes_per_note) {
        Note note;
        note.pitch = decode_pitch(genome[base], ctx.scale);
        note.duration = decode_duration(genome[base + 1], ctx.grid);
        note.velocity = decode_velocity(genome[base + 2]);
        note.onset = onset;
        onset += note.duration;
        phrase.notes.push_back(note);
    }
    return phrase;
}

Genome encode_phrase(const MelodyPhrase& phrase) {
    std::vector<double> genes;
    genes.reserve(phrase.notes.size() * genes_per_note);
    for (const auto& note : phrase.notes) {
        genes.push_back(note.pitch);
        genes.push_back(note.duration);
        genes.push_back(note.velocity);
    }
    return Genome(std::move(genes));
}

std::vector<std::string> phrase_violations(const MelodyPhrase& phrase, const DecodeContext& ctx) {
    std::vector<std::string> out;
    const auto pitches = scale_pitches(ctx.scale);
    if (!(phrase.bpm > 0.0))
        out.emplace_back("bpm must be positive");
    for (std::size_t k = 0; k < phrase.notes.size(); ++k) {
        const auto& note = phrase.notes[k];
        std::ostringstream where;
        where << "note " << k << ": ";
        if (!std::binary_search(pitches.begin(), pitches.end(), note.pitch))
            out.push_back(where.str() + "pitch " + std::to_string(note.pitch) + " not in scale");
        if (!ctx.grid.contains(note.duration))
            out.push_back(where.str() + "duration not on grid");
        if (note.velocity < 1 || note.velocity > 127)
            out.push_back(where.str() + "velocity out of range");
    }
    return out;
}

SamplingBounds melody_sampling_bounds(const ScaleContext& ctx, const DurationGrid& grid,
                                      std::size_t notes) {
    SamplingBounds bounds;
    bounds.reserve(notes * genes_per_note);
    for (std::size_t k = 0; k < notes; ++k) {
        bounds.push_back({static_cast<double>(ctx.low_bound), static_cast<double>(ctx.high_bound)});
        bounds.push_back({grid.shortest(), grid.longest()});
        bounds.push_back({1.0, 127.0});
    }
    return bounds;
}

SamplingBounds uniform_sampling_bounds(std::size_t dims, double lo, double hi) {
    return SamplingBounds(dims, GeneInterval{lo, hi});
}

Genome random_genome(UniformSource& rng, const SamplingBounds& bounds) {
    std::vector<double> genes;
    genes.reserve(bounds.size());
    for (const auto& interval : bounds)
        genes.push_back(rng.uniform(interval.lo, interval.hi));
    return Genome(std::move(genes));
}

double midi_to_frequency(int note) {
    return 440.0 * std::exp2((note - 69) / 12.0);
}

} // namespace melodevo
