// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <set>

#include "doctest.h"

#include "error.hpp"
#include "genome.hpp"
#include "random.hpp"

using namespace melodevo;

namespace {

// brute-force nearest member with ties toward the first (lower) element
template <typename T>
T nearest_scan(const std::vector<T>& sorted, double x) {
    T best = sorted.front();
    double best_dist = std::abs(x - static_cast<double>(best));
    for (T v : sorted) {
        double d = std::abs(x - static_cast<double>(v));
        if (d < best_dist) {
            best = v;
            best_dist = d;
        }
    }
    return best;
}

const ScaleContext c_major{0, Mode::major, 60, 72};

} // namespace

TEST_CASE("scale_pitches enumerates the mode over the range") {
    CHECK(scale_pitches(c_major) == std::vector<int>{60, 62, 64, 65, 67, 69, 71, 72});
    CHECK(scale_pitches({9, Mode::natural_minor, 57, 69}) == std::vector<int>{57, 59, 60, 62, 64, 65, 67, 69});

    // independent enumeration over pitch-class sets
    const std::set<int> dorian_d{2, 4, 5, 7, 9, 11, 0};
    std::vector<int> expect;
    for (int n = 40; n <= 70; ++n) {
        if (dorian_d.count(n % 12))
            expect.push_back(n);
    }
    CHECK(scale_pitches({2, Mode::dorian, 40, 70}) == expect);
}

TEST_CASE("invalid scale contexts are rejected") {
    CHECK_FALSE(ScaleContext{0, Mode::major, 60, 60}.violations().empty());
    CHECK_THROWS_AS(ScaleContext({0, Mode::major, 60, 60}).validate(), Error);
    CHECK_FALSE(ScaleContext{12, Mode::major, 60, 72}.violations().empty());
    CHECK_FALSE(ScaleContext{0, Mode::major, 70, 200}.violations().empty());
    // C# pentatonic major skips E
    CHECK_FALSE(ScaleContext{1, Mode::pentatonic_major, 64, 64}.violations().empty());
    CHECK(ScaleContext{1, Mode::pentatonic_major, 62, 63}.violations().empty());
    CHECK(ScaleContext{0, Mode::major, 60, 72}.violations().empty());
}

TEST_CASE("decode_pitch") {
    CHECK(decode_pitch(61.3, c_major) == 62);
    CHECK(decode_pitch(60.0, c_major) == 60);
    CHECK(decode_pitch(-500, c_major) == 60);
    CHECK(decode_pitch(1e6, c_major) == 72);
    CHECK(decode_pitch(61.0, c_major) == 60);  // tie between 60 and 62
    CHECK(decode_pitch(66.0, c_major) == 65);  // tie between 65 and 67
}

TEST_CASE("decode_pitch agrees with a brute-force nearest scan") {
    RandomStream rng(11, 0);
    for (int k = 0; k < 5000; ++k) {
        ScaleContext ctx{static_cast<int>(rng.below(12)), static_cast<Mode>(rng.below(7)), 0, 0};
        ctx.low_bound = static_cast<int>(rng.below(100));
        ctx.high_bound = ctx.low_bound + 3 + static_cast<int>(rng.below(24));
        if (!ctx.violations().empty())
            continue;
        const double gene = rng.uniform(ctx.low_bound - 10.0, ctx.high_bound + 10.0);
        const double clamped = std::clamp(gene, double(ctx.low_bound), double(ctx.high_bound));
        REQUIRE(decode_pitch(gene, ctx) == nearest_scan(scale_pitches(ctx), clamped));
    }
}

TEST_CASE("decode_duration") {
    const DurationGrid grid({1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0});
    CHECK(decode_duration(0.26, grid) == 0.25);
    CHECK(decode_duration(0.125, grid) == 0.125);
    CHECK(decode_duration(0.1875, grid) == 0.125);
    CHECK(decode_duration(-3.0, grid) == 1.0 / 16);
    CHECK(decode_duration(50.0, grid) == 1.0);

    RandomStream rng(5, 0);
    const std::vector<double> allowed(grid.allowed().begin(), grid.allowed().end());
    for (int k = 0; k < 2000; ++k) {
        const double gene = rng.uniform(-1.0, 2.0);
        REQUIRE(decode_duration(gene, grid) == nearest_scan(allowed, gene));
    }
}

TEST_CASE("duration grid invariants") {
    CHECK_THROWS_AS(DurationGrid(std::vector<double>{}), Error);
    CHECK_THROWS_AS(DurationGrid({0.25, 0.125}), Error);
    CHECK_THROWS_AS(DurationGrid({0.0, 0.5}), Error);
    CHECK_THROWS_AS(DurationGrid({0.5, 4.5}), Error);
    CHECK(DurationGrid({0.5, 4.0}).allowed().size() == 2);
    CHECK(DurationGrid().allowed().size() == 7);
}

TEST_CASE("decode_velocity") {
    CHECK(decode_velocity(100.4) == 100);
    CHECK(decode_velocity(0.0) == 1);
    CHECK(decode_velocity(300) == 127);
    CHECK(decode_velocity(-1e6) == 1);
    CHECK(decode_velocity(64.5) == 65);
}

TEST_CASE("decode_genome") {
    const DecodeContext ctx{c_major, DurationGrid({1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0}), 120.0};
    auto phrase = decode_genome(Genome({61.3, 0.26, 100.4}), ctx);
    REQUIRE(phrase.notes.size() == 1);
    CHECK(phrase.notes[0] == Note{62, 0.25, 100, 0.0});
    CHECK(phrase.bpm == 120.0);

    phrase = decode_genome(Genome({61.3, 0.26, 100.4, 61.3, 0.26, 100.4}), ctx);
    REQUIRE(phrase.notes.size() == 2);
    CHECK(phrase.notes[1].onset == 0.25);
    CHECK(phrase.notes[1].pitch == phrase.notes[0].pitch);

    CHECK_THROWS_AS(Genome(std::vector<double>{}), Error);
    CHECK_THROWS_AS(decode_genome(Genome({60.0, 0.25}), ctx), Error);
    CHECK_THROWS_AS(Genome({std::numeric_limits<double>::quiet_NaN()}), Error);
    CHECK_THROWS_AS(Genome({std::numeric_limits<double>::infinity()}), Error);
}

TEST_CASE("decoding is total, in range and idempotent") {
    RandomStream rng(99, 0);
    const DecodeContext ctx{ScaleContext{7, Mode::mixolydian, 48, 79}, DurationGrid(), 96.0};
    for (int k = 0; k < 1000; ++k) {
        std::vector<double> genes(24);
        for (auto& g : genes)
            g = rng.uniform(-1e3, 1e3);
        const auto phrase = decode_genome(Genome(genes), ctx);
        REQUIRE(phrase_violations(phrase, ctx).empty());
        REQUIRE(decode_genome(encode_phrase(phrase), ctx) == phrase);
    }
}

TEST_CASE("decode_pitch is monotone") {
    int previous = decode_pitch(-100.0, c_major);
    for (double x = -100.0; x <= 200.0; x += 0.01) {
        const int p = decode_pitch(x, c_major);
        REQUIRE(p >= previous);
        previous = p;
    }
}

TEST_CASE("random_genome") {
    const auto bounds = melody_sampling_bounds(c_major, DurationGrid(), 8);
    CHECK(bounds.size() == 24);

    RandomStream a(42, 0), b(42, 0);
    CHECK(random_genome(a, bounds).bitwise_equal(random_genome(b, bounds)));
    CHECK(random_genome(a, bounds).size() == 24);

    RandomStream rng(7, 3);
    const auto one = melody_sampling_bounds(c_major, DurationGrid(), 1);
    double lo = 1e9, hi = -1e9;
    for (int k = 0; k < 10000; ++k) {
        const auto g = random_genome(rng, one);
        lo = std::min(lo, g[0]);
        hi = std::max(hi, g[0]);
        REQUIRE(g[1] >= 1.0 / 16);
        REQUIRE(g[1] <= 1.0);
        REQUIRE(g[2] >= 1.0);
        REQUIRE(g[2] <= 127.0);
    }
    CHECK(lo >= 60.0);
    CHECK(hi <= 72.0);
    // 10^4 uniform draws get within 0.05 of both ends with near certainty
    CHECK(lo < 60.05);
    CHECK(hi > 71.95);
}

TEST_CASE("random streams resume by discarding") {
    RandomStream a(3, 9);
    for (int k = 0; k < 17; ++k)
        a.uniform01();
    RandomStream b(3, 9);
    b.discard(a.position());
    CHECK(a.next_u64() == b.next_u64());
    CHECK(RandomStream(3, 9).next_u64() != RandomStream(3, 10).next_u64());
}

TEST_CASE("midi_to_frequency") {
    CHECK(midi_to_frequency(69) == 440.0);
    CHECK(midi_to_frequency(60) == doctest::Approx(261.6256).epsilon(0.001 / 261.6256));
    CHECK(midi_to_frequency(81) == 880.0);
}
