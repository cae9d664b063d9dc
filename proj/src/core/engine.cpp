// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "engine.hpp"

#include <cmath>
#include <utility>

#include "error.hpp"

namespace melodevo {

std::vector<std::string> DEConfig::violations() const {
    std::vector<std::string> out;
    if (population_size < 4)
        out.emplace_back("population_size must be at least 4");
    if (!(F > 0.0 && F <= 2.0))
        out.emplace_back("F must lie in (0, 2]");
    if (!(Cr >= 0.0 && Cr <= 1.0))
        out.emplace_back("Cr must lie in [0, 1]");
    if (dims == 0)
        out.emplace_back("dims must be positive");
    return out;
}

void DEConfig::validate() const {
    auto problems = violations();
    if (!problems.empty())
        throw Error(ErrorCode::invalid_config, "invalid DE config: " + problems.front(), problems);
}

bool Population::fully_scored() const {
    if (fitness.size() != members.size())
        return false;
    for (const auto& f : fitness) {
        if (!f)
            return false;
    }
    return true;
}

Population init_population(const DEConfig& cfg, const SamplingBounds& bounds, UniformSource& rng) {
    cfg.validate();
    if (bounds.size() != cfg.dims) {
        throw Error(ErrorCode::invalid_config,
                    "sampling bounds cover " + std::to_string(bounds.size()) + " genes, expected "
                        + std::to_string(cfg.dims));
    }
    Population pop;
    pop.members.reserve(cfg.population_size);
    for (std::size_t i = 0; i < cfg.population_size; ++i)
        pop.members.push_back(random_genome(rng, bounds));
    pop.fitness.assign(cfg.population_size, std::nullopt);
    return pop;
}

MutationDraw draw_indices(UniformSource& rng, std::size_t population_size, std::size_t target) {
    if (population_size < 4)
        throw Error(ErrorCode::invalid_argument, "mutation needs a population of at least 4");
    MutationDraw draw{};
    do {
        draw.r1 = rng.below(population_size);
    } while (draw.r1 == target);
    do {
        draw.r2 = rng.below(population_size);
    } while (draw.r2 == target || draw.r2 == draw.r1);
    do {
        draw.r3 = rng.below(population_size);
    } while (draw.r3 == target || draw.r3 == draw.r1 || draw.r3 == draw.r2);
    return draw;
}

Genome mutate(const Population& pop, std::size_t target, const MutationDraw& draw, double F) {
    const std::size_t n = pop.size();
    if (draw.r1 >= n || draw.r2 >= n || draw.r3 >= n || draw.r1 == target || draw.r2 == target
        || draw.r3 == target || draw.r1 == draw.r2 || draw.r1 == draw.r3 || draw.r2 == draw.r3) {
        throw Error(ErrorCode::invalid_argument, "mutation draw is not valid for this target");
    }
    const auto base = pop.members[draw.r1].genes();
    const auto plus = pop.members[draw.r2].genes();
    const auto minus = pop.members[draw.r3].genes();
    std::vector<double> mutant(base.size());
    for (std::size_t j = 0; j < base.size(); ++j)
        mutant[j] = base[j] + F * (plus[j] - minus[j]);
    return Genome(std::move(mutant));
}

Genome crossover(const Genome& target, const Genome& mutant, double Cr, UniformSource& rng) {
    if (target.size() != mutant.size()) {
        throw Error(ErrorCode::internal, "crossover length mismatch: target "
                                             + std::to_string(target.size()) + ", mutant "
                                             + std::to_string(mutant.size()));
    }
    const std::size_t forced = rng.below(target.size());
    std::vector<double> trial(target.size());
    for (std::size_t j = 0; j < target.size(); ++j) {
        const double u = rng.uniform01();
        trial[j] = (u <= Cr || j == forced) ? mutant[j] : target[j];
    }
    return Genome(std::move(trial));
}

bool trial_survives(double target_fitness, double trial_fitness) {
    return trial_fitness <= target_fitness;
}

const Genome& select(const Genome& target, std::optional<double> target_fitness,
                     const TrialCandidate& trial) {
    if (!target_fitness || !trial.fitness)
        throw Error(ErrorCode::scores_pending, "selection needs both fitness values");
    return trial_survives(*target_fitness, *trial.fitness) ? trial.trial : target;
}

std::vector<TrialCandidate> propose_trials(const Population& pop, const DEConfig& cfg,
                                           UniformSource& rng) {
    std::vector<TrialCandidate> trials;
    trials.reserve(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const auto draw = draw_indices(rng, pop.size(), i);
        const auto mutant = mutate(pop, i, draw, cfg.F);
        trials.push_back({i, crossover(pop.members[i], mutant, cfg.Cr, rng), std::nullopt});
    }
    return trials;
}

StepResult step_generation(const Population& pop, const std::vector<TrialCandidate>& trials) {
    if (trials.size() != pop.size()) {
        throw Error(ErrorCode::internal, "expected one trial per slot, got "
                                             + std::to_string(trials.size()));
    }
    if (!pop.fully_scored())
        throw Error(ErrorCode::scores_pending, "population has unscored members");

    std::vector<std::string> unscored;
    for (const auto& trial : trials) {
        if (!trial.fitness)
            unscored.push_back(std::to_string(trial.target_index));
    }
    if (!unscored.empty())
        throw Error(ErrorCode::scores_pending, "generation blocked by unscored trials", unscored);

    StepResult result;
    result.population.generation = pop.generation + 1;
    result.population.members.reserve(pop.size());
    result.population.fitness.reserve(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const auto& trial = trials[i];
        if (trial.target_index != i)
            throw Error(ErrorCode::internal, "trial list is not in slot order");
        SelectionRecord record{i, *pop.fitness[i], *trial.fitness,
                               trial_survives(*pop.fitness[i], *trial.fitness)};
        if (record.trial_survived) {
            result.population.members.push_back(trial.trial);
            result.population.fitness.push_back(trial.fitness);
        } else {
            result.population.members.push_back(pop.members[i]);
            result.population.fitness.push_back(pop.fitness[i]);
        }
        result.selections.push_back(record);
    }
    return result;
}

} // namespace melodevo
