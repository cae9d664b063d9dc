// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "error.hpp"

namespace melodevo {

namespace {

constexpr std::uint64_t target_stream_id = std::numeric_limits<std::uint64_t>::max();

GenerationStats summarize(const Population& pop) {
    GenerationStats stats;
    stats.generation = pop.generation;
    stats.best = std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (const auto& f : pop.fitness) {
        stats.best = std::min(stats.best, *f);
        total += *f;
    }
    stats.mean = total / static_cast<double>(pop.size());
    return stats;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

DecodeContext synthetic_decode_context() {
    return DecodeContext{ScaleContext{0, Mode::major, 60, 84}, DurationGrid{}, 120.0};
}

SyntheticReport run_synthetic(const SyntheticOptions& options) {
    DEConfig cfg{options.population_size, options.F, options.Cr, options.dims, options.seed};
    cfg.validate();

    SyntheticReport report;
    report.options = options;

    SyntheticOracle oracle{options.oracle, std::nullopt};
    SamplingBounds bounds;
    if (options.oracle == OracleKind::sphere) {
        bounds = uniform_sampling_bounds(options.dims, -5.12, 5.12);
    } else {
        if (options.dims % genes_per_note != 0) {
            throw Error(ErrorCode::invalid_config,
                        "hidden-target runs use melody genomes; dims must be a multiple of 3");
        }
        const auto ctx = synthetic_decode_context();
        bounds = melody_sampling_bounds(ctx.scale, ctx.grid, options.dims / genes_per_note);
        RandomStream target_rng(options.seed, target_stream_id);
        oracle.target = random_genome(target_rng, bounds);
        report.target = oracle.target;
    }

    RandomStream init_rng(options.seed, init_stream_id);
    Population pop = init_population(cfg, bounds, init_rng);
    for (std::size_t i = 0; i < pop.size(); ++i)
        pop.fitness[i] = eval_oracle(oracle, pop.members[i]);
    report.history.push_back(summarize(pop));

    for (std::size_t g = 0; g < options.generations; ++g) {
        RandomStream rng(options.seed, proposal_stream_id(pop.generation));
        auto trials = propose_trials(pop, cfg, rng);
        for (auto& trial : trials)
            trial.fitness = eval_oracle(oracle, trial.trial);
        pop = step_generation(pop, trials).population;
        report.history.push_back(summarize(pop));
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i) {
        if (*pop.fitness[i] < *pop.fitness[best])
            best = i;
    }
    report.best = pop.members[best];
    report.best_fitness = *pop.fitness[best];
    report.final_population = std::move(pop);
    return report;
}

std::string format_report(const SyntheticReport& report) {
    const auto& o = report.options;
    std::string out = "# evolve-synthetic oracle=" + std::string(oracle_name(o.oracle))
        + " dims=" + std::to_string(o.dims) + " pop=" + std::to_string(o.population_size)
        + " gens=" + std::to_string(o.generations) + " F=" + fmt_double(o.F)
        + " Cr=" + fmt_double(o.Cr) + " seed=" + std::to_string(o.seed) + "\n";
    out += "generation best_f mean_f\n";
    for (const auto& stats : report.history) {
        out += std::to_string(stats.generation) + " " + fmt_double(stats.best) + " "
            + fmt_double(stats.mean) + "\n";
    }
    out += "best_fitness " + fmt_double(report.best_fitness) + "\n";
    out += "best_genome";
    for (double g : report.best.genes())
        out += " " + fmt_double(g);
    out += "\n";
    return out;
}

} // namespace melodevo
