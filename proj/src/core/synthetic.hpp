// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "engine.hpp"
#include "fitness.hpp"

namespace melodevo {

// Fully automated run with a synthetic oracle in place of the human. Uses
// the same init/propose/step path as interactive sessions.
struct SyntheticOptions {
    OracleKind oracle = OracleKind::sphere;
    std::size_t dims = 12;
    std::size_t population_size = 30;
    std::size_t generations = 300;
    double F = 0.5;
    double Cr = 0.9;
    std::uint64_t seed = 1;
};

struct GenerationStats {
    std::uint64_t generation = 0;
    double best = 0.0;
    double mean = 0.0;
};

struct SyntheticReport {
    SyntheticOptions options;
    std::vector<GenerationStats> history;  // generation 0 .. generations
    Genome best;
    double best_fitness = 0.0;
    std::optional<Genome> target;
    Population final_population;
};

// Sphere runs sample genes in [-5.12, 5.12]. Hidden-target runs use melody
// genomes (dims must be a multiple of 3) over synthetic_decode_context(),
// with the target drawn from its own stream.
SyntheticReport run_synthetic(const SyntheticOptions& options);

DecodeContext synthetic_decode_context();

// Plain-text report: header line, one "generation best_f mean_f" line per
// generation, then the best genome. Numbers use 17 significant digits.
std::string format_report(const SyntheticReport& report);

} // namespace melodevo
