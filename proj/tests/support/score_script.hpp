// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Deterministic stand-in for a listener: likes high, loud phrases. Works on
// decoded notes so HTTP clients and in-process drivers score identically.

#include <algorithm>
#include <cmath>

#include "genome.hpp"
#include "session.hpp"

namespace melodevo::testing {

inline double scripted_score(const MelodyPhrase& phrase) {
    double pitch = 0, velocity = 0;
    for (const auto& n : phrase.notes) {
        pitch += n.pitch;
        velocity += n.velocity;
    }
    pitch /= static_cast<double>(phrase.notes.size());
    velocity /= static_cast<double>(phrase.notes.size());
    const double raw = 7.0 * (pitch - 48.0) / 48.0 + 3.0 * velocity / 127.0;
    return std::clamp(std::round(raw * 2.0) / 2.0, 0.0, 10.0);
}

inline void score_pending(Session& session) {
    for (const auto& id : session.pending()) {
        const auto genome = session.find_genome(id);
        session.submit_score({id, scripted_score(session.decode(*genome)), 0});
    }
}

} // namespace melodevo::testing
