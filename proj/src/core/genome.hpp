// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "random.hpp"

namespace melodevo {

// Real-valued candidate vector. Genes are unconstrained finite reals; range
// constraints are only applied when a melody genome is decoded.
//
// Melody genomes interleave one (pitch, duration, velocity) triple per note,
// so their length is 3 * note count. The engine itself accepts any length.
class Genome {
public:
    Genome() = default;
    explicit Genome(std::vector<double> genes);

    std::size_t size() const { return genes_.size(); }
    std::span<const double> genes() const { return genes_; }
    double operator[](std::size_t j) const { return genes_[j]; }

    // Exact bit-pattern comparison, used for determinism checks and the
    // fitness cache.
    bool bitwise_equal(const Genome& other) const;

private:
    std::vector<double> genes_;
};

inline constexpr std::size_t genes_per_note = 3;

enum class Mode {
    major,
    natural_minor,
    harmonic_minor,
    dorian,
    mixolydian,
    pentatonic_major,
    pentatonic_minor,
};

std::string_view mode_name(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);

// Semitone offsets of the mode relative to its root, ascending.
std::span<const int> mode_intervals(Mode mode);

struct ScaleContext {
    int key_root = 0;  // pitch class 0-11
    Mode mode = Mode::major;
    int low_bound = 60;
    int high_bound = 84;

    // Empty when valid, otherwise one entry per violated invariant.
    std::vector<std::string> violations() const;
    void validate() const;
};

// Sorted MIDI note numbers of the scale inside [low_bound, high_bound].
std::vector<int> scale_pitches(const ScaleContext& ctx);

// Allowed note lengths as fractions of a whole note, strictly increasing.
class DurationGrid {
public:
    DurationGrid();  // {1/16, 1/8, 3/16, 1/4, 3/8, 1/2, 1}
    explicit DurationGrid(std::vector<double> allowed);

    std::span<const double> allowed() const { return allowed_; }
    double shortest() const { return allowed_.front(); }
    double longest() const { return allowed_.back(); }
    bool contains(double duration) const;

    static std::vector<std::string> violations(std::span<const double> allowed);

private:
    std::vector<double> allowed_;
};

struct Note {
    int pitch = 60;
    double duration = 0.25;  // fraction of a whole note
    int velocity = 100;
    double onset = 0.0;  // whole notes from phrase start

    bool operator==(const Note&) const = default;
};

struct MelodyPhrase {
    std::vector<Note> notes;
    double bpm = 120.0;

    bool operator==(const MelodyPhrase&) const = default;
};

// Everything needed to turn a genome into a phrase.
struct DecodeContext {
    ScaleContext scale;
    DurationGrid grid;
    double bpm = 120.0;
};

int decode_pitch(double gene, const ScaleContext& ctx);
double decode_duration(double gene, const DurationGrid& grid);
int decode_velocity(double gene);

// Throws if the genome length is not a positive multiple of three.
MelodyPhrase decode_genome(const Genome& genome, const DecodeContext& ctx);

// Inverse of decoding for already-legal values: one triple per note holding
// the decoded pitch, duration and velocity.
Genome encode_phrase(const MelodyPhrase& phrase);

// Checks every MelodyPhrase invariant against the context used to decode it.
std::vector<std::string> phrase_violations(const MelodyPhrase& phrase, const DecodeContext& ctx);

struct GeneInterval {
    double lo;
    double hi;
};

// Per-gene sampling intervals for initialization.
using SamplingBounds = std::vector<GeneInterval>;

// Pitch genes in [low_bound, high_bound], duration genes between the shortest
// and longest grid entries, velocity genes in [1, 127].
SamplingBounds melody_sampling_bounds(const ScaleContext& ctx, const DurationGrid& grid,
                                      std::size_t notes);

SamplingBounds uniform_sampling_bounds(std::size_t dims, double lo, double hi);

// One uniform draw per gene, in gene order.
Genome random_genome(UniformSource& rng, const SamplingBounds& bounds);

// Equal temperament, A4 = 440 Hz.
double midi_to_frequency(int note);

} // namespace melodevo
