// Copyright 2026 The melodevo Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <filesystem>
#include <set>
#include <thread>

#include "doctest.h"

#include "score_script.hpp"
#include "service_fixture.hpp"

using namespace melodevo;
using namespace melodevo::testing;
using nlohmann::json;

namespace {

const json small{{"notes", 4}, {"population_size", 5}, {"seed", 5}};

std::string create(httplib::Client& c, const json& cfg = small) {
    auto r = post_json(c, "/sessions", cfg);
    REQUIRE(r);
    REQUIRE(r->status == 201);
    return body_of(r).at("id").get<std::string>();
}

// Scores every pending candidate of the current round with the script.
void score_round(httplib::Client& c, const std::string& id) {
    const auto view = body_of(c.Get("/sessions/" + id + "/round"));
    for (const auto& cand : view.at("candidates")) {
        if (!cand.at("pending").get<bool>())
            continue;
        const double s = scripted_score(phrase_from_view(cand.at("notes"), view.at("bpm").get<double>()));
        auto r = post_json(c, "/sessions/" + id + "/scores", {{"candidate_id", cand.at("id")}, {"score", s}});
        REQUIRE(r->status == 200);
    }
}

} // namespace

TEST_CASE("create and score over HTTP") {
    RunningService svc;
    auto c = svc.client();
    const auto id = create(c);

    auto view = body_of(c.Get("/sessions/" + id + "/round"));
    CHECK(view.at("candidates").size() == 5);
    CHECK(view.at("kind") == "initial");
    CHECK(view.at("candidates")[0].at("notes").size() == 4);

    auto r = post_json(c, "/sessions/" + id + "/scores", {{"candidate_id", "r0-0"}, {"score", 7.5}});
    REQUIRE(r->status == 200);
    auto body = body_of(r);
    CHECK(body.at("pending_count") == 4);
    CHECK(body.at("pending") == json{"r0-1", "r0-2", "r0-3", "r0-4"});

    // rescoring keeps the count
    r = post_json(c, "/sessions/" + id + "/scores", {{"candidate_id", "r0-0"}, {"score", 3}});
    CHECK(body_of(r).at("pending_count") == 4);
}

TEST_CASE("advance with pending scores is refused with the exact pending set") {
    RunningService svc;
    auto c = svc.client();
    const auto id = create(c);
    score_round(c, id);

    auto view = body_of(c.Get("/sessions/" + id + "/round"));
    std::vector<std::string> expected;
    for (const auto& cand : view.at("candidates")) {
        const auto cid = cand.at("id").get<std::string>();
        if (!cand.at("pending").get<bool>())
            continue;
        const auto slot = cand.at("slot").get<int>();
        if (slot == 1 || slot == 3)
            expected.push_back(cid);
        else
            post_json(c, "/sessions/" + id + "/scores", {{"candidate_id", cid}, {"score", 1}});
    }
    REQUIRE_FALSE(expected.empty());
    auto r = c.Post("/sessions/" + id + "/advance");
    REQUIRE(r->status == 409);
    auto err = body_of(r).at("error");
    CHECK(err.at("code") == "scores_pending");
    CHECK(err.at("details").at("pending").get<std::vector<std::string>>() == expected);
    CHECK(body_of(c.Get("/sessions/" + id)).at("population").at("generation") == 0);
}

TEST_CASE("MIDI download") {
    RunningService svc;
    auto c = svc.client();
    const auto id = create(c);
    auto r = c.Get("/sessions/" + id + "/midi/r0-2");
    REQUIRE(r->status == 200);
    CHECK(r->get_header_value("Content-Type") == "audio/midi");
    REQUIRE(r->body.size() > 4);
    CHECK(r->body.substr(0, 4) == "MThd");
    CHECK(c.Get("/sessions/" + id + "/midi/r7-0")->status == 404);
}

TEST_CASE("error responses") {
    RunningService svc;
    auto c = svc.client();
    const auto id = create(c);

    auto r = c.Get("/sessions/nope/round");
    CHECK(r->status == 404);
    CHECK(body_of(r).at("error").at("code") == "not_found");

    r = post_json(c, "/sessions", {{"population_size", 2}});
    CHECK(r->status == 422);
    CHECK(body_of(r).at("error").at("code") == "invalid_config");
    CHECK(body_of(r).at("error").at("details").at("violations").size() >= 1);

    r = c.Post("/sessions", "{not json", "application/json");
    CHECK(r->status == 400);
    CHECK(body_of(r).at("error").at("code") == "malformed_body");

    r = post_json(c, "/sessions/" + id + "/scores", {{"candidate_id", "r0-0"}, {"score", 11}});
    CHECK(r->status == 422);
    CHECK(body_of(r).at("error").at("code") == "invalid_score");
    r = post_json(c, "/sessions/" + id + "/scores", {{"candidate_id", "r0-0"}});
    CHECK(r->status == 422);
    r = post_json(c, "/sessions/" + id + "/scores", {{"candidate_id", "r5-0"}, {"score", 1}});
    CHECK(r->status == 404);

    r = post_json(c, "/sessions/" + id + "/advance", {{"round", 4}});
    CHECK(r->status == 409);
    CHECK(body_of(r).at("error").at("code") == "state_conflict");
}

TEST_CASE("concurrent advances step once") {
    RunningService svc;
    auto c = svc.client();
    const auto id = create(c);
    score_round(c, id);
    score_round(c, id);
    const auto round = body_of(c.Get("/sessions/" + id + "/round")).at("round");

    std::atomic<int> ok{0}, conflict{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&] {
            auto cl = svc.client();
            auto r = post_json(cl, "/sessions/" + id + "/advance", {{"round", round}});
            if (r && r->status == 200)
                ++ok;
            else if (r && r->status == 409)
                ++conflict;
        });
    }
    for (auto& t : threads)
        t.join();
    CHECK(ok == 1);
    CHECK(conflict == 3);
    CHECK(body_of(c.Get("/sessions/" + id)).at("population").at("generation") == 1);
}

TEST_CASE("listing, persistence and finish exports") {
    const auto dir = std::filesystem::temp_directory_path() / "melodevo_service_test";
    std::filesystem::remove_all(dir);
    std::string id;
    json before;
    {
        RunningService svc(ServiceOptions{dir, std::nullopt});
        auto c = svc.client();
        id = create(c);
        create(c);
        score_round(c, id);
        score_round(c, id);
        REQUIRE(c.Post("/sessions/" + id + "/advance")->status == 200);
        auto list = body_of(c.Get("/sessions")).at("sessions");
        CHECK(list.size() == 2);
        before = body_of(c.Get("/sessions/" + id));
    }
    RunningService svc(ServiceOptions{dir, std::nullopt});
    CHECK(svc.service().session_count() == 2);
    auto c = svc.client();
    CHECK(body_of(c.Get("/sessions/" + id)) == before);

    auto r = c.Post("/sessions/" + id + "/finish");
    REQUIRE(r->status == 200);
    auto manifest = body_of(r);
    REQUIRE(manifest.at("entries").size() == 5);
    for (const auto& e : manifest.at("entries")) {
        const auto path = dir / id / e.at("midi_path").get<std::string>();
        CHECK(std::filesystem::exists(path));
        CHECK(c.Get(e.at("midi_url").get<std::string>())->status == 200);
    }
    CHECK(c.Post("/sessions/" + id + "/advance")->status == 409);
    std::filesystem::remove_all(dir);
}
