// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "genome.hpp"

namespace melodevo {

// Human scores are "higher is better"; the engine minimizes. A score s is
// stored as fitness -s.
inline double fitness_from_score(double score) { return -score; }

struct ScoreRange {
    double min = 0.0;
    double max = 10.0;

    bool contains(double score) const { return score >= min && score <= max; }
};

struct HumanScore {
    std::string candidate_id;
    double score = 0.0;
    std::int64_t submitted_at_ms = 0;  // logged only, never affects evolution
};

// Scores for the candidates of one round.
class ScoreBook {
public:
    struct Entry {
        std::optional<HumanScore> human;
        std::optional<double> fitness;
        bool cached = false;  // fitness carried over, never shown to the user
    };

    ScoreBook() = default;
    ScoreBook(ScoreRange range, std::vector<std::string> round_candidates);

    // Last write wins. Rejects unknown ids and out-of-range scores.
    void ingest(const HumanScore& score);

    // Pre-fills a candidate whose vector already has a known fitness.
    void set_cached(const std::string& candidate_id, double fitness);

    // Candidates still lacking a fitness, in slot order.
    std::vector<std::string> pending() const;

    bool complete() const { return pending().empty(); }
    bool knows(std::string_view candidate_id) const;
    const Entry& entry(std::string_view candidate_id) const;
    std::optional<double> fitness(std::string_view candidate_id) const;

    const std::vector<std::string>& candidates() const { return candidates_; }
    const ScoreRange& range() const { return range_; }

private:
    ScoreRange range_;
    std::vector<std::string> candidates_;
    std::map<std::string, Entry, std::less<>> entries_;
};

enum class OracleKind { sphere, hidden_target };

std::string_view oracle_name(OracleKind kind);
std::optional<OracleKind> parse_oracle(std::string_view name);

// Stand-in for the human in automated runs.
struct SyntheticOracle {
    OracleKind kind = OracleKind::sphere;
    std::optional<Genome> target;  // hidden_target only
};

// sphere: sum of squared genes; hidden_target: squared distance to target.
double eval_oracle(const SyntheticOracle& oracle, const Genome& genome);

} // namespace melodevo
