// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "engine.hpp"
#include "expression.hpp"
#include "fitness.hpp"
#include "genome.hpp"

namespace melodevo {

inline constexpr int session_schema_version = 1;

struct SessionConfig {
    std::size_t notes = 16;
    DEConfig de;  // de.dims is always 3 * notes
    DecodeContext decode;
    ExpressionProfile expression;
    ScoreRange scores;
    int tpqn = default_tpqn;

    std::vector<std::string> violations() const;
    void validate() const;
};

// Missing keys take their defaults. Throws invalid_config listing every
// problem found.
SessionConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SessionConfig& cfg);

enum class SessionState { scoring_initial, scoring_trials, ready_to_advance, finished };
enum class RoundKind { initial, trials };

std::string_view state_name(SessionState state);

struct RoundCandidate {
    std::string id;
    std::size_t slot = 0;
    Genome genome;
};

// The candidates currently offered for scoring.
struct Round {
    std::uint64_t index = 0;
    RoundKind kind = RoundKind::initial;
    std::vector<RoundCandidate> candidates;
    ScoreBook book;
};

struct ScoreLogEntry {
    std::string candidate_id;
    std::size_t slot = 0;
    std::optional<double> score;  // empty for cached candidates
    double fitness = 0.0;
    std::int64_t submitted_at_ms = 0;
    bool cached = false;
};

// One completed generation step.
struct HistoryEntry {
    std::uint64_t round = 0;
    std::uint64_t generation = 0;  // generation the trials competed in
    std::vector<ScoreLogEntry> scores;
    std::vector<SelectionRecord> selections;
};

struct RngPosition {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t position = 0;
};

struct ManifestEntry {
    std::size_t rank = 0;
    std::size_t slot = 0;
    std::string candidate_id;
    std::optional<double> fitness;
    MelodyPhrase phrase;
    std::string midi_path;  // relative to the session's export directory
};

struct Manifest {
    std::string session_id;
    std::uint64_t generation = 0;
    std::vector<ManifestEntry> entries;  // best first
};

nlohmann::json manifest_to_json(const Manifest& manifest);
nlohmann::json phrase_to_json(const MelodyPhrase& phrase);

// Interactive run. Lifecycle:
//   scoring_initial --(last gen-0 score)--> scoring_trials
//   scoring_trials  --(last trial score)--> ready_to_advance
//   ready_to_advance --advance()--> scoring_trials (generation + 1)
//   any --finish()--> finished
// Not thread-safe; callers serialize access per session.
class Session {
public:
    static Session create(const SessionConfig& cfg, std::string session_id);

    const std::string& id() const { return id_; }
    SessionState state() const { return state_; }
    const SessionConfig& config() const { return cfg_; }
    const Population& population() const { return population_; }
    const std::vector<std::string>& member_ids() const { return member_ids_; }
    const Round& round() const { return round_; }
    const std::vector<ScoreLogEntry>& initial_scores() const { return initial_scores_; }
    const std::vector<HistoryEntry>& history() const { return history_; }
    const RngPosition& rng_position() const { return rng_; }

    std::vector<std::string> pending() const { return round_.book.pending(); }

    void submit_score(const HumanScore& score);

    // One generation step. Throws scores_pending (details = pending ids)
    // unless every candidate of the current trial round is scored.
    void advance();

    // Idempotent.
    Manifest finish();
    Manifest manifest() const;

    // Round candidates first, then current population members.
    std::optional<Genome> find_genome(std::string_view candidate_id) const;
    MelodyPhrase decode(const Genome& genome) const;
    std::vector<std::uint8_t> render_midi(std::string_view candidate_id) const;

    nlohmann::json to_json() const;
    static Session from_json(const nlohmann::json& doc);

    std::string save() const;
    static Session load(std::string_view text);

private:
    Session() = default;

    void open_trial_round();
    void close_initial_round();
    std::vector<ScoreLogEntry> round_log() const;

    std::string id_;
    SessionConfig cfg_;
    SessionState state_ = SessionState::scoring_initial;
    Population population_;
    std::vector<std::string> member_ids_;
    Round round_;
    std::vector<ScoreLogEntry> initial_scores_;
    std::vector<HistoryEntry> history_;
    RngPosition rng_;
    std::int64_t created_at_ms_ = 0;
};

std::string candidate_id(std::uint64_t round, std::size_t slot);

std::int64_t now_ms();

// Write to a sibling temp file then rename over the target.
void save_session_file(const Session& session, const std::filesystem::path& path);
Session load_session_file(const std::filesystem::path& path);

struct ReplayReport {
    bool ok = true;
    std::vector<std::string> differences;
};

// Rebuilds the session from seed, config and score log, then compares the
// result with `session` bit for bit.
ReplayReport replay(const Session& session);

} // namespace melodevo
