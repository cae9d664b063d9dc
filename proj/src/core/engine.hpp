// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "genome.hpp"
#include "random.hpp"

namespace melodevo {

// Differential evolution, strategy rand/1/bin. Fitness is minimized.

struct DEConfig {
    std::size_t population_size = 12;
    double F = 0.5;
    double Cr = 0.9;
    std::size_t dims = 48;
    std::uint64_t seed = 0;

    std::vector<std::string> violations() const;
    void validate() const;
};

struct Population {
    std::uint64_t generation = 0;
    std::vector<Genome> members;
    std::vector<std::optional<double>> fitness;

    std::size_t size() const { return members.size(); }
    bool fully_scored() const;
};

struct MutationDraw {
    std::size_t r1;
    std::size_t r2;
    std::size_t r3;
};

struct TrialCandidate {
    std::size_t target_index = 0;
    Genome trial;
    std::optional<double> fitness;
};

// Outcome of one slot's selection, kept for the session history.
struct SelectionRecord {
    std::size_t slot = 0;
    double target_fitness = 0.0;
    double trial_fitness = 0.0;
    bool trial_survived = false;
};

// Population members drawn in index order from `rng`; fitness left unset.
Population init_population(const DEConfig& cfg, const SamplingBounds& bounds, UniformSource& rng);

// Three pairwise-distinct indices, all different from `target`, uniform over
// the ordered triples.
MutationDraw draw_indices(UniformSource& rng, std::size_t population_size, std::size_t target);

// v = x_r1 + F * (x_r2 - x_r3), no clamping.
Genome mutate(const Population& pop, std::size_t target, const MutationDraw& draw, double F);

// Binomial crossover. One index j_rand is drawn first and always takes the
// mutant component; then one uniform per component decides the rest
// (mutant when the draw is <= Cr).
Genome crossover(const Genome& target, const Genome& mutant, double Cr, UniformSource& rng);

// True when the trial replaces the target (ties favor the trial).
bool trial_survives(double target_fitness, double trial_fitness);

const Genome& select(const Genome& target, std::optional<double> target_fitness,
                     const TrialCandidate& trial);

// draw_indices -> mutate -> crossover for every slot in order.
std::vector<TrialCandidate> propose_trials(const Population& pop, const DEConfig& cfg,
                                           UniformSource& rng);

struct StepResult {
    Population population;
    std::vector<SelectionRecord> selections;
};

// Requires a complete, scored population and exactly one scored trial per
// slot. Survivors keep the fitness they were scored with.
StepResult step_generation(const Population& pop, const std::vector<TrialCandidate>& trials);

// Stream ids used for a run with a given seed: stream 0 initializes the
// population, stream g + 1 proposes the trials of generation g.
inline constexpr std::uint64_t init_stream_id = 0;
inline std::uint64_t proposal_stream_id(std::uint64_t generation) { return generation + 1; }

} // namespace melodevo
