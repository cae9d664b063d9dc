// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace melodevo {

// Source of uniform draws consumed by the evolution operators. Abstract so
// that tests can script the exact sequence of draws.
class UniformSource {
public:
    virtual ~UniformSource() = default;

    // Uniform real in [0, 1).
    virtual double uniform01() = 0;

    // Uniform integer in [0, n). n must be positive.
    virtual std::size_t below(std::size_t n) = 0;

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
};

// Seeded, resumable stream. Streams are addressed by (seed, stream id) so a
// session can derive an independent stream per generation; `position` counts
// raw 64-bit words consumed, which is enough to resume with `discard`.
//
// Conversions from raw words are done here rather than with the <random>
// distributions, whose outputs differ between standard library vendors.
class RandomStream final : public UniformSource {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    double uniform01() override;
    std::size_t below(std::size_t n) override;

    void discard(std::uint64_t words);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    std::uint64_t position() const { return position_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t position_ = 0;
};

} // namespace melodevo
