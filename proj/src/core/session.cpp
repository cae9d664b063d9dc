// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "session.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace melodevo {

using nlohmann::json;

// ---------------------------------------------------------------------------
// config

std::vector<std::string> SessionConfig::violations() const {
    std::vector<std::string> out;
    if (notes == 0)
        out.emplace_back("notes must be at least 1");
    if (de.dims != notes * genes_per_note)
        out.emplace_back("dims must equal 3 * notes");
    for (auto& v : de.violations())
        out.push_back(std::move(v));
    for (auto& v : decode.scale.violations())
        out.push_back(std::move(v));
    for (auto& v : DurationGrid::violations(decode.grid.allowed()))
        out.push_back(std::move(v));
    if (!(decode.bpm > 0.0 && decode.bpm < 1000.0))
        out.emplace_back("bpm must lie in (0, 1000)");
    for (auto& v : expression.violations())
        out.push_back(std::move(v));
    if (!(scores.min < scores.max))
        out.emplace_back("score_min must be below score_max");
    if (tpqn < 24 || tpqn > 960)
        out.emplace_back("tpqn must lie in [24, 960]");
    return out;
}

void SessionConfig::validate() const {
    auto problems = violations();
    if (!problems.empty())
        throw Error(ErrorCode::invalid_config, "invalid session config: " + problems.front(), problems);
}

namespace {

// Collects type errors instead of stopping at the first one.
class FieldReader {
public:
    FieldReader(const json& obj, std::string prefix, std::vector<std::string>& problems)
        : obj_(obj), prefix_(std::move(prefix)), problems_(problems) {}

    template <typename T>
    void read(const char* key, T& out) {
        if (!obj_.is_object() || !obj_.contains(key))
            return;
        const auto& v = obj_.at(key);
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean())
                    throw std::invalid_argument("expected boolean");
            } else if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer())
                    throw std::invalid_argument("expected integer");
                if constexpr (std::is_unsigned_v<T>) {
                    if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)
                        throw std::invalid_argument("expected non-negative integer");
                }
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!v.is_number())
                    throw std::invalid_argument("expected number");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string())
                    throw std::invalid_argument("expected string");
            }
            out = v.get<T>();
        } catch (const std::exception& e) {
            problems_.push_back(prefix_ + key + ": " + e.what());
        }
    }

    const json* child(const char* key) {
        if (!obj_.is_object() || !obj_.contains(key))
            return nullptr;
        const auto& v = obj_.at(key);
        if (!v.is_object()) {
            problems_.push_back(prefix_ + key + ": expected object");
            return nullptr;
        }
        return &v;
    }

private:
    const json& obj_;
    std::string prefix_;
    std::vector<std::string>& problems_;
};

} // namespace

SessionConfig config_from_json(const json& j) {
    std::vector<std::string> problems;
    if (!j.is_object())
        throw Error(ErrorCode::invalid_config, "session config must be a JSON object");

    SessionConfig cfg;
    FieldReader r(j, "", problems);
    r.read("notes", cfg.notes);
    r.read("population_size", cfg.de.population_size);
    r.read("F", cfg.de.F);
    r.read("Cr", cfg.de.Cr);
    r.read("seed", cfg.de.seed);
    r.read("key_root", cfg.decode.scale.key_root);
    std::string mode(mode_name(cfg.decode.scale.mode));
    r.read("mode", mode);
    if (auto parsed = parse_mode(mode))
        cfg.decode.scale.mode = *parsed;
    else
        problems.push_back("mode: unknown mode '" + mode + "'");
    r.read("low", cfg.decode.scale.low_bound);
    r.read("high", cfg.decode.scale.high_bound);
    r.read("bpm", cfg.decode.bpm);
    r.read("tpqn", cfg.tpqn);
    r.read("score_min", cfg.scores.min);
    r.read("score_max", cfg.scores.max);

    if (j.contains("durations")) {
        std::vector<double> durations;
        const auto& arr = j.at("durations");
        if (!arr.is_array() || !std::all_of(arr.begin(), arr.end(), [](const json& v) { return v.is_number(); })) {
            problems.emplace_back("durations: expected array of numbers");
        } else {
            durations = arr.get<std::vector<double>>();
            auto grid_problems = DurationGrid::violations(durations);
            if (grid_problems.empty())
                cfg.decode.grid = DurationGrid(durations);
            else
                problems.insert(problems.end(), grid_problems.begin(), grid_problems.end());
        }
    }

    if (const json* e = r.child("expression")) {
        auto& p = cfg.expression;
        FieldReader er(*e, "expression.", problems);
        er.read("jitter_seed", p.jitter_seed);
        er.read("controller_step", p.controller_step);
        if (const json* v = er.child("velocity")) {
            FieldReader vr(*v, "expression.velocity.", problems);
            vr.read("gain", p.velocity.gain);
            vr.read("jitter", p.velocity.jitter);
        }
        if (const json* v = er.child("aftertouch")) {
            FieldReader vr(*v, "expression.aftertouch.", problems);
            vr.read("attack_level", p.aftertouch.attack_level);
            vr.read("decay_rate", p.aftertouch.decay_rate);
        }
        if (const json* v = er.child("vibrato")) {
            FieldReader vr(*v, "expression.vibrato.", problems);
            vr.read("rate_hz", p.vibrato.rate_hz);
            vr.read("depth_cents", p.vibrato.depth_cents);
            vr.read("onset_delay", p.vibrato.onset_delay);
        }
        if (const json* v = er.child("brightness")) {
            FieldReader vr(*v, "expression.brightness.", problems);
            vr.read("enabled", p.brightness.enabled);
            vr.read("start", p.brightness.start);
            vr.read("end", p.brightness.end);
        }
        if (const json* v = er.child("release")) {
            FieldReader vr(*v, "expression.release.", problems);
            vr.read("base", p.release.base);
            vr.read("jitter", p.release.jitter);
        }
    }

    cfg.de.dims = cfg.notes * genes_per_note;
    if (problems.empty())
        problems = cfg.violations();
    if (!problems.empty())
        throw Error(ErrorCode::invalid_config, "invalid session config: " + problems.front(), problems);
    return cfg;
}

json config_to_json(const SessionConfig& cfg) {
    const auto& p = cfg.expression;
    return json{
        {"notes", cfg.notes},
        {"population_size", cfg.de.population_size},
        {"F", cfg.de.F},
        {"Cr", cfg.de.Cr},
        {"seed", cfg.de.seed},
        {"key_root", cfg.decode.scale.key_root},
        {"mode", std::string(mode_name(cfg.decode.scale.mode))},
        {"low", cfg.decode.scale.low_bound},
        {"high", cfg.decode.scale.high_bound},
        {"durations", std::vector<double>(cfg.decode.grid.allowed().begin(), cfg.decode.grid.allowed().end())},
        {"bpm", cfg.decode.bpm},
        {"tpqn", cfg.tpqn},
        {"score_min", cfg.scores.min},
        {"score_max", cfg.scores.max},
        {"expression",
         {
             {"velocity", {{"gain", p.velocity.gain}, {"jitter", p.velocity.jitter}}},
             {"aftertouch", {{"attack_level", p.aftertouch.attack_level}, {"decay_rate", p.aftertouch.decay_rate}}},
             {"vibrato",
              {{"rate_hz", p.vibrato.rate_hz},
               {"depth_cents", p.vibrato.depth_cents},
               {"onset_delay", p.vibrato.onset_delay}}},
             {"brightness", {{"enabled", p.brightness.enabled}, {"start", p.brightness.start}, {"end", p.brightness.end}}},
             {"release", {{"base", p.release.base}, {"jitter", p.release.jitter}}},
             {"jitter_seed", p.jitter_seed},
             {"controller_step", p.controller_step},
         }},
    };
}

// ---------------------------------------------------------------------------
// small helpers

std::string_view state_name(SessionState state) {
    switch (state) {
    case SessionState::scoring_initial: return "scoring_initial";
    case SessionState::scoring_trials: return "scoring_trials";
    case SessionState::ready_to_advance: return "ready_to_advance";
    case SessionState::finished: return "finished";
    }
    return "finished";
}

namespace {

std::optional<SessionState> parse_state(std::string_view name) {
    for (auto s : {SessionState::scoring_initial, SessionState::scoring_trials,
                   SessionState::ready_to_advance, SessionState::finished}) {
        if (state_name(s) == name)
            return s;
    }
    return std::nullopt;
}

} // namespace

std::string candidate_id(std::uint64_t round, std::size_t slot) {
    return "r" + std::to_string(round) + "-" + std::to_string(slot);
}

std::int64_t now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

json phrase_to_json(const MelodyPhrase& phrase) {
    json notes = json::array();
    for (const auto& n : phrase.notes) {
        notes.push_back({{"pitch", n.pitch}, {"duration", n.duration}, {"velocity", n.velocity}, {"onset", n.onset}});
    }
    return json{{"bpm", phrase.bpm}, {"notes", std::move(notes)}};
}

json manifest_to_json(const Manifest& manifest) {
    json entries = json::array();
    for (const auto& e : manifest.entries) {
        json item{{"rank", e.rank},
                  {"slot", e.slot},
                  {"candidate_id", e.candidate_id},
                  {"fitness", e.fitness ? json(*e.fitness) : json(nullptr)},
                  {"score", e.fitness ? json(-*e.fitness) : json(nullptr)},
                  {"phrase", phrase_to_json(e.phrase)},
                  {"midi_path", e.midi_path}};
        entries.push_back(std::move(item));
    }
    return json{{"session_id", manifest.session_id}, {"generation", manifest.generation}, {"entries", std::move(entries)}};
}

// ---------------------------------------------------------------------------
// lifecycle

Session Session::create(const SessionConfig& cfg, std::string session_id) {
    cfg.validate();
    Session s;
    s.id_ = std::move(session_id);
    s.cfg_ = cfg;
    s.created_at_ms_ = now_ms();

    RandomStream rng(cfg.de.seed, init_stream_id);
    const auto bounds = melody_sampling_bounds(cfg.decode.scale, cfg.decode.grid, cfg.notes);
    s.population_ = init_population(cfg.de, bounds, rng);
    s.rng_ = {rng.seed(), rng.stream(), rng.position()};

    s.round_.index = 0;
    s.round_.kind = RoundKind::initial;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < s.population_.size(); ++i) {
        ids.push_back(candidate_id(0, i));
        s.round_.candidates.push_back({ids.back(), i, s.population_.members[i]});
    }
    s.member_ids_ = ids;
    s.round_.book = ScoreBook(cfg.scores, std::move(ids));
    s.state_ = SessionState::scoring_initial;
    return s;
}

std::vector<ScoreLogEntry> Session::round_log() const {
    std::vector<ScoreLogEntry> log;
    for (const auto& c : round_.candidates) {
        const auto& entry = round_.book.entry(c.id);
        if (!entry.fitness)
            continue;
        ScoreLogEntry item;
        item.candidate_id = c.id;
        item.slot = c.slot;
        item.fitness = *entry.fitness;
        item.cached = entry.cached;
        if (entry.human) {
            item.score = entry.human->score;
            item.submitted_at_ms = entry.human->submitted_at_ms;
        }
        log.push_back(std::move(item));
    }
    return log;
}

void Session::submit_score(const HumanScore& score) {
    if (state_ == SessionState::finished)
        throw Error(ErrorCode::state_conflict, "session is finished");
    round_.book.ingest(score);
    if (!round_.book.complete())
        return;
    if (round_.kind == RoundKind::initial)
        close_initial_round();
    else
        state_ = SessionState::ready_to_advance;
}

void Session::close_initial_round() {
    for (const auto& c : round_.candidates)
        population_.fitness[c.slot] = round_.book.fitness(c.id);
    initial_scores_ = round_log();
    open_trial_round();
}

void Session::open_trial_round() {
    RandomStream rng(cfg_.de.seed, proposal_stream_id(population_.generation));
    auto trials = propose_trials(population_, cfg_.de, rng);
    rng_ = {rng.seed(), rng.stream(), rng.position()};

    Round next;
    next.index = round_.index + 1;
    next.kind = RoundKind::trials;
    std::vector<std::string> ids;
    for (auto& t : trials) {
        ids.push_back(candidate_id(next.index, t.target_index));
        next.candidates.push_back({ids.back(), t.target_index, std::move(t.trial)});
    }
    next.book = ScoreBook(cfg_.scores, std::move(ids));

    // a vector the user already scored is never shown again
    for (const auto& c : next.candidates) {
        for (std::size_t i = 0; i < population_.size(); ++i) {
            if (population_.fitness[i] && population_.members[i].bitwise_equal(c.genome)) {
                next.book.set_cached(c.id, *population_.fitness[i]);
                break;
            }
        }
    }
    round_ = std::move(next);
    state_ = round_.book.complete() ? SessionState::ready_to_advance : SessionState::scoring_trials;
}

void Session::advance() {
    if (state_ == SessionState::finished)
        throw Error(ErrorCode::state_conflict, "session is finished");
    auto waiting = pending();
    if (!waiting.empty()) {
        throw Error(ErrorCode::scores_pending,
                    std::to_string(waiting.size()) + " candidate(s) still need a score", waiting);
    }
    if (state_ != SessionState::ready_to_advance)
        throw Error(ErrorCode::state_conflict, "session is not ready to advance");

    std::vector<TrialCandidate> trials;
    for (const auto& c : round_.candidates)
        trials.push_back({c.slot, c.genome, round_.book.fitness(c.id)});
    auto step = step_generation(population_, trials);

    HistoryEntry entry;
    entry.round = round_.index;
    entry.generation = population_.generation;
    entry.scores = round_log();
    entry.selections = step.selections;
    history_.push_back(std::move(entry));

    for (const auto& sel : step.selections) {
        if (sel.trial_survived)
            member_ids_[sel.slot] = round_.candidates[sel.slot].id;
    }
    population_ = std::move(step.population);
    open_trial_round();
}

Manifest Session::manifest() const {
    Manifest m;
    m.session_id = id_;
    m.generation = population_.generation;
    // scores already given in an unfinished initial round still count
    auto fitness = population_.fitness;
    if (round_.kind == RoundKind::initial) {
        for (const auto& c : round_.candidates)
            fitness[c.slot] = round_.book.entry(c.id).fitness;
    }
    std::vector<std::size_t> order(population_.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& fa = fitness[a];
        const auto& fb = fitness[b];
        if (fa && fb)
            return *fa < *fb;
        return fa.has_value() && !fb.has_value();
    });
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const std::size_t slot = order[rank];
        ManifestEntry e;
        e.rank = rank + 1;
        e.slot = slot;
        e.candidate_id = member_ids_[slot];
        e.fitness = fitness[slot];
        e.phrase = decode(population_.members[slot]);
        e.midi_path = e.candidate_id + ".mid";
        m.entries.push_back(std::move(e));
    }
    return m;
}

Manifest Session::finish() {
    state_ = SessionState::finished;
    return manifest();
}

std::optional<Genome> Session::find_genome(std::string_view id) const {
    for (const auto& c : round_.candidates) {
        if (c.id == id)
            return c.genome;
    }
    for (std::size_t i = 0; i < member_ids_.size(); ++i) {
        if (member_ids_[i] == id)
            return population_.members[i];
    }
    return std::nullopt;
}

MelodyPhrase Session::decode(const Genome& genome) const {
    return decode_genome(genome, cfg_.decode);
}

std::vector<std::uint8_t> Session::render_midi(std::string_view id) const {
    auto genome = find_genome(id);
    if (!genome)
        throw Error(ErrorCode::not_found, "unknown candidate '" + std::string(id) + "'");
    const auto events = apply_expression(decode(*genome), cfg_.expression, cfg_.tpqn);
    return write_smf(events, SmfConfig{cfg_.tpqn, cfg_.decode.bpm, 0});
}

// ---------------------------------------------------------------------------
// persistence

namespace {

json log_to_json(const std::vector<ScoreLogEntry>& log) {
    json arr = json::array();
    for (const auto& e : log) {
        arr.push_back({{"candidate_id", e.candidate_id},
                       {"slot", e.slot},
                       {"score", e.score ? json(*e.score) : json(nullptr)},
                       {"fitness", e.fitness},
                       {"submitted_at_ms", e.submitted_at_ms},
                       {"cached", e.cached}});
    }
    return arr;
}

std::vector<ScoreLogEntry> log_from_json(const json& arr) {
    std::vector<ScoreLogEntry> log;
    for (const auto& e : arr) {
        ScoreLogEntry item;
        item.candidate_id = e.at("candidate_id").get<std::string>();
        item.slot = e.at("slot").get<std::size_t>();
        if (!e.at("score").is_null())
            item.score = e.at("score").get<double>();
        item.fitness = e.at("fitness").get<double>();
        item.submitted_at_ms = e.at("submitted_at_ms").get<std::int64_t>();
        item.cached = e.at("cached").get<bool>();
        log.push_back(std::move(item));
    }
    return log;
}

json genes_to_json(const Genome& g) {
    return json(std::vector<double>(g.genes().begin(), g.genes().end()));
}

Genome genes_from_json(const json& j) {
    return Genome(j.get<std::vector<double>>());
}

void require(bool condition, const std::string& what) {
    if (!condition)
        throw Error(ErrorCode::parse, "corrupted session document: " + what);
}

} // namespace

json Session::to_json() const {
    json members = json::array();
    for (std::size_t i = 0; i < population_.size(); ++i) {
        members.push_back({{"id", member_ids_[i]},
                           {"genes", genes_to_json(population_.members[i])},
                           {"fitness", population_.fitness[i] ? json(*population_.fitness[i]) : json(nullptr)}});
    }

    json candidates = json::array();
    for (const auto& c : round_.candidates) {
        const auto& entry = round_.book.entry(c.id);
        json item{{"id", c.id}, {"slot", c.slot}, {"genes", genes_to_json(c.genome)}, {"cached", entry.cached}};
        item["fitness"] = entry.fitness ? json(*entry.fitness) : json(nullptr);
        item["score"] = entry.human ? json(entry.human->score) : json(nullptr);
        item["submitted_at_ms"] = entry.human ? entry.human->submitted_at_ms : 0;
        candidates.push_back(std::move(item));
    }

    json history = json::array();
    for (const auto& h : history_) {
        json selections = json::array();
        for (const auto& s : h.selections) {
            selections.push_back({{"slot", s.slot},
                                  {"target_fitness", s.target_fitness},
                                  {"trial_fitness", s.trial_fitness},
                                  {"trial_survived", s.trial_survived}});
        }
        history.push_back({{"round", h.round},
                           {"generation", h.generation},
                           {"scores", log_to_json(h.scores)},
                           {"selections", std::move(selections)}});
    }

    return json{
        {"schema", "melodevo.session"},
        {"schema_version", session_schema_version},
        {"session_id", id_},
        {"created_at_ms", created_at_ms_},
        {"state", std::string(state_name(state_))},
        {"config", config_to_json(cfg_)},
        {"rng", {{"seed", rng_.seed}, {"stream", rng_.stream}, {"position", rng_.position}}},
        {"population", {{"generation", population_.generation}, {"members", std::move(members)}}},
        {"round",
         {{"index", round_.index},
          {"kind", round_.kind == RoundKind::initial ? "initial" : "trials"},
          {"candidates", std::move(candidates)}}},
        {"initial_scores", log_to_json(initial_scores_)},
        {"history", std::move(history)},
    };
}

Session Session::from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("schema") || !doc.at("schema").is_string()
        || doc.at("schema").get<std::string>() != "melodevo.session")
        throw Error(ErrorCode::parse, "not a melodevo session document");
    if (!doc.contains("schema_version") || !doc.at("schema_version").is_number_integer())
        throw Error(ErrorCode::parse, "session document has no schema_version");
    const int version = doc.at("schema_version").get<int>();
    if (version != session_schema_version) {
        throw Error(ErrorCode::schema_version, "unsupported session schema version "
                                                   + std::to_string(version) + " (expected "
                                                   + std::to_string(session_schema_version) + ")");
    }

    Session s;
    try {
        s.id_ = doc.at("session_id").get<std::string>();
        s.created_at_ms_ = doc.at("created_at_ms").get<std::int64_t>();
        s.cfg_ = config_from_json(doc.at("config"));
        auto state = parse_state(doc.at("state").get<std::string>());
        require(state.has_value(), "unknown state");
        s.state_ = *state;

        const auto& rng = doc.at("rng");
        s.rng_ = {rng.at("seed").get<std::uint64_t>(), rng.at("stream").get<std::uint64_t>(),
                  rng.at("position").get<std::uint64_t>()};

        const auto& pop = doc.at("population");
        s.population_.generation = pop.at("generation").get<std::uint64_t>();
        for (const auto& m : pop.at("members")) {
            s.member_ids_.push_back(m.at("id").get<std::string>());
            s.population_.members.push_back(genes_from_json(m.at("genes")));
            const auto& f = m.at("fitness");
            s.population_.fitness.push_back(f.is_null() ? std::nullopt : std::optional<double>(f.get<double>()));
        }
        require(s.population_.size() == s.cfg_.de.population_size, "population size mismatch");
        for (const auto& g : s.population_.members)
            require(g.size() == s.cfg_.de.dims, "genome length mismatch");

        const auto& round = doc.at("round");
        s.round_.index = round.at("index").get<std::uint64_t>();
        const auto kind = round.at("kind").get<std::string>();
        require(kind == "initial" || kind == "trials", "unknown round kind");
        s.round_.kind = kind == "initial" ? RoundKind::initial : RoundKind::trials;
        std::vector<std::string> ids;
        for (const auto& c : round.at("candidates")) {
            RoundCandidate rc{c.at("id").get<std::string>(), c.at("slot").get<std::size_t>(),
                              genes_from_json(c.at("genes"))};
            require(rc.slot < s.population_.size(), "candidate slot out of range");
            require(rc.genome.size() == s.cfg_.de.dims, "candidate genome length mismatch");
            ids.push_back(rc.id);
            s.round_.candidates.push_back(std::move(rc));
        }
        require(s.round_.candidates.size() == s.population_.size(), "round size mismatch");
        s.round_.book = ScoreBook(s.cfg_.scores, ids);
        for (const auto& c : round.at("candidates")) {
            const auto id = c.at("id").get<std::string>();
            if (c.at("cached").get<bool>()) {
                s.round_.book.set_cached(id, c.at("fitness").get<double>());
            } else if (!c.at("score").is_null()) {
                s.round_.book.ingest({id, c.at("score").get<double>(), c.at("submitted_at_ms").get<std::int64_t>()});
            }
        }

        s.initial_scores_ = log_from_json(doc.at("initial_scores"));
        for (const auto& h : doc.at("history")) {
            HistoryEntry entry;
            entry.round = h.at("round").get<std::uint64_t>();
            entry.generation = h.at("generation").get<std::uint64_t>();
            entry.scores = log_from_json(h.at("scores"));
            for (const auto& sel : h.at("selections")) {
                entry.selections.push_back({sel.at("slot").get<std::size_t>(), sel.at("target_fitness").get<double>(),
                                            sel.at("trial_fitness").get<double>(),
                                            sel.at("trial_survived").get<bool>()});
            }
            s.history_.push_back(std::move(entry));
        }
        require(s.history_.size() == s.population_.generation, "history length differs from generation");
    } catch (const Error& e) {
        if (e.code() == ErrorCode::schema_version || e.code() == ErrorCode::parse)
            throw;
        throw Error(ErrorCode::parse, std::string("corrupted session document: ") + e.what());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("corrupted session document: ") + e.what());
    }
    return s;
}

std::string Session::save() const {
    return to_json().dump(2) + "\n";
}

Session Session::load(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::parse, std::string("session document is not valid JSON: ") + e.what());
    }
    return from_json(doc);
}

void save_session_file(const Session& session, const std::filesystem::path& path) {
    const auto text = session.save();
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::io, "cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out)
            throw Error(ErrorCode::io, "short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw Error(ErrorCode::io, "cannot replace " + path.string() + ": " + ec.message());
}

Session load_session_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::io, "cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return Session::load(text.str());
}

// ---------------------------------------------------------------------------
// replay

namespace {

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool same_fitness(const std::optional<double>& a, const std::optional<double>& b) {
    if (a.has_value() != b.has_value())
        return false;
    return !a || same_bits(*a, *b);
}

void submit_log(Session& s, const std::vector<ScoreLogEntry>& log) {
    for (const auto& e : log) {
        if (!e.cached && e.score)
            s.submit_score({e.candidate_id, *e.score, e.submitted_at_ms});
    }
}

} // namespace

ReplayReport replay(const Session& session) {
    ReplayReport report;
    auto differ = [&](std::string what) {
        report.ok = false;
        report.differences.push_back(std::move(what));
    };

    Session live = Session::create(session.config(), session.id());
    try {
        submit_log(live, session.initial_scores());
        for (const auto& h : session.history()) {
            submit_log(live, h.scores);
            live.advance();
        }
        for (const auto& c : session.round().candidates) {
            const auto& entry = session.round().book.entry(c.id);
            if (entry.human && !entry.cached && live.round().book.knows(c.id))
                live.submit_score(*entry.human);
        }
        if (session.state() == SessionState::finished)
            live.finish();
    } catch (const Error& e) {
        differ(std::string("replay stopped: ") + e.what());
        return report;
    }

    if (live.state() != session.state())
        differ("state: replay " + std::string(state_name(live.state())) + ", stored "
               + std::string(state_name(session.state())));

    const auto& a = live.population();
    const auto& b = session.population();
    if (a.generation != b.generation)
        differ("generation: replay " + std::to_string(a.generation) + ", stored " + std::to_string(b.generation));
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (!a.members[i].bitwise_equal(b.members[i]))
            differ("population slot " + std::to_string(i) + ": genes differ");
        if (!same_fitness(a.fitness[i], b.fitness[i]))
            differ("population slot " + std::to_string(i) + ": fitness differs");
        if (live.member_ids()[i] != session.member_ids()[i])
            differ("population slot " + std::to_string(i) + ": member id differs");
    }

    const auto& ra = live.round().candidates;
    const auto& rb = session.round().candidates;
    if (ra.size() != rb.size() || live.round().index != session.round().index) {
        differ("current round differs");
    } else {
        for (std::size_t k = 0; k < ra.size(); ++k) {
            if (ra[k].id != rb[k].id || !ra[k].genome.bitwise_equal(rb[k].genome))
                differ("round candidate " + rb[k].id + ": genes differ");
        }
    }

    const auto& ha = live.history();
    const auto& hb = session.history();
    for (std::size_t g = 0; g < std::min(ha.size(), hb.size()); ++g) {
        for (std::size_t k = 0; k < std::min(ha[g].selections.size(), hb[g].selections.size()); ++k) {
            const auto& x = ha[g].selections[k];
            const auto& y = hb[g].selections[k];
            if (!same_bits(x.target_fitness, y.target_fitness) || !same_bits(x.trial_fitness, y.trial_fitness)
                || x.trial_survived != y.trial_survived) {
                differ("generation " + std::to_string(hb[g].generation) + " slot " + std::to_string(y.slot)
                       + ": selection differs");
            }
        }
    }
    return report;
}

} // namespace melodevo
