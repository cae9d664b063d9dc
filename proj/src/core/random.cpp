// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "random.hpp"

#include <limits>

namespace melodevo {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

} // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(make_engine(seed, stream)), seed_(seed), stream_(stream) {}

std::uint64_t RandomStream::next_u64() {
    ++position_;
    return engine_();
}

double RandomStream::uniform01() {
    // top 53 bits -> [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t RandomStream::below(std::size_t n) {
    const std::uint64_t bound = n;
    // rejection zone keeps the result exactly uniform
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()
        - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t word;
    do {
        word = next_u64();
    } while (word >= limit);
    return static_cast<std::size_t>(word % bound);
}

void RandomStream::discard(std::uint64_t words) {
    engine_.discard(words);
    position_ += words;
}

} // namespace melodevo
