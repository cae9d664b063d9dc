// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "fitness.hpp"

#include <sstream>

#include "error.hpp"

namespace melodevo {

ScoreBook::ScoreBook(ScoreRange range, std::vector<std::string> round_candidates)
    : range_(range), candidates_(std::move(round_candidates)) {
    for (const auto& id : candidates_)
        entries_.emplace(id, Entry{});
}

void ScoreBook::ingest(const HumanScore& score) {
    auto it = entries_.find(score.candidate_id);
    if (it == entries_.end())
        throw Error(ErrorCode::not_found, "unknown candidate '" + score.candidate_id + "'");
    if (it->second.cached) {
        throw Error(ErrorCode::state_conflict,
                    "candidate '" + score.candidate_id + "' already carries a cached score");
    }
    if (!range_.contains(score.score)) {
        std::ostringstream msg;
        msg << "score " << score.score << " outside [" << range_.min << ", " << range_.max << "]";
        throw Error(ErrorCode::invalid_argument, msg.str());
    }
    it->second.human = score;
    it->second.fitness = fitness_from_score(score.score);
}

void ScoreBook::set_cached(const std::string& candidate_id, double fitness) {
    auto it = entries_.find(candidate_id);
    if (it == entries_.end())
        throw Error(ErrorCode::not_found, "unknown candidate '" + candidate_id + "'");
    it->second.human.reset();
    it->second.fitness = fitness;
    it->second.cached = true;
}

std::vector<std::string> ScoreBook::pending() const {
    std::vector<std::string> out;
    for (const auto& id : candidates_) {
        if (!entries_.at(id).fitness)
            out.push_back(id);
    }
    return out;
}

bool ScoreBook::knows(std::string_view candidate_id) const {
    return entries_.find(candidate_id) != entries_.end();
}

const ScoreBook::Entry& ScoreBook::entry(std::string_view candidate_id) const {
    auto it = entries_.find(candidate_id);
    if (it == entries_.end())
        throw Error(ErrorCode::not_found, "unknown candidate '" + std::string(candidate_id) + "'");
    return it->second;
}

std::optional<double> ScoreBook::fitness(std::string_view candidate_id) const {
    return entry(candidate_id).fitness;
}

std::string_view oracle_name(OracleKind kind) {
    return kind == OracleKind::sphere ? "sphere" : "hidden-target";
}

std::optional<OracleKind> parse_oracle(std::string_view name) {
    if (name == "sphere")
        return OracleKind::sphere;
    if (name == "hidden-target" || name == "hidden_target")
        return OracleKind::hidden_target;
    return std::nullopt;
}

double eval_oracle(const SyntheticOracle& oracle, const Genome& genome) {
    double sum = 0.0;
    if (oracle.kind == OracleKind::sphere) {
        for (double g : genome.genes())
            sum += g * g;
        return sum;
    }
    if (!oracle.target)
        throw Error(ErrorCode::invalid_argument, "hidden-target oracle has no target genome");
    if (oracle.target->size() != genome.size()) {
        throw Error(ErrorCode::invalid_argument,
                    "oracle dimension " + std::to_string(oracle.target->size())
                        + " does not match genome dimension " + std::to_string(genome.size()));
    }
    for (std::size_t j = 0; j < genome.size(); ++j) {
        const double d = genome[j] - (*oracle.target)[j];
        sum += d * d;
    }
    return sum;
}

} // namespace melodevo
