#include <set>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "arlabel/harness.hpp"
#include "arlabel/service.hpp"
#include "service_script.hpp"

using namespace arlabel;
using arlabel::testing::facing;
using arlabel::testing::parse_ok;
using nlohmann::json;

namespace {

json create(StudyService& svc, const std::string& condition, const std::string& task, int size, std::uint64_t seed)
{
    return parse_ok(svc.create_session(json{{"condition", condition}, {"task", task}, {"size", size}, {"seed", seed}}.dump()));
}

std::map<int, json> objects_by_id(const json& created)
{
    std::map<int, json> out;
    for (const auto& o : created.at("scene").at("objects")) {
        out[o.at("id").get<int>()] = o;
    }
    return out;
}

std::string object_body(int id)
{
    return json{{"object_id", id}}.dump();
}

std::string answer_body(const std::string& answer, double elapsed = 3.5)
{
    return json{{"answer", answer}, {"elapsed_s", elapsed}}.dump();
}

// Object that is well out of view when facing the given one.
int far_from(const std::map<int, json>& objects, int id)
{
    const double az = objects.at(id).at("azimuth_deg");
    for (const auto& [other, o] : objects) {
        if (circular_separation_deg(o.at("azimuth_deg").get<double>(), az) > 90.0) {
            return other;
        }
    }
    return -1;
}

}  // namespace

TEST(Service, CreateSessionReturnsSceneWithoutAnswer)
{
    StudyService svc;
    const json a = create(svc, "angle", "compare", 10, 5);
    EXPECT_EQ(a.at("scene").at("objects").size(), 10u);
    EXPECT_EQ(a.at("condition"), "angle");
    EXPECT_EQ(a.at("seed"), 5);
    EXPECT_EQ(a.at("task").at("kind"), "compare");
    EXPECT_FALSE(a.at("task").contains("correct_answer"));
    EXPECT_EQ(a.at("session_id").get<std::string>().size(), 32u);

    const json b = create(svc, "angle", "compare", 10, 5);
    EXPECT_EQ(a.at("scene"), b.at("scene"));
    EXPECT_NE(a.at("session_id"), b.at("session_id"));
    EXPECT_EQ(svc.session_count(), 2u);
    EXPECT_EQ(json::parse(svc.healthz().body).at("sessions"), 2);
}

TEST(Service, CreateSessionDrawsSeedWhenMissing)
{
    StudyService svc;
    const json a = parse_ok(svc.create_session(R"({"condition":"value","task":"identify","size":20})"));
    EXPECT_EQ(a.at("scene").at("objects").size(), 20u);
    EXPECT_TRUE(a.at("seed").is_number_unsigned());
}

TEST(Service, CreateSessionRejectsBadInput)
{
    StudyService svc;
    for (const char* body : {"", "[]", "not json", R"({"condition":"floating","task":"compare","size":10})",
                             R"({"condition":"angle","task":"rank","size":10})",
                             R"({"condition":"angle","task":"compare","size":15})",
                             R"({"condition":"angle","task":"compare"})",
                             R"({"condition":"angle","task":"compare","size":10,"seed":-3})"}) {
        EXPECT_EQ(svc.create_session(body).status, 400) << body;
    }
    EXPECT_EQ(svc.session_count(), 0u);
}

TEST(Service, LayoutMatchesLibraryPlacement)
{
    StudyService svc;
    for (Strategy s : kAllStrategies) {
        const json created = create(svc, std::string(to_string(s)), "identify", 20, 11);
        const std::string id = created.at("session_id");
        const TaskInstance instance = build_task(TaskKind::identify, generate_scene(SceneConfig{.size = 20}, 11), 11);
        for (double yaw : {0.0, 47.5, 190.0, 333.25}) {
            const ViewState view{yaw, -4.0};
            const auto r = svc.get_layout(id, json(yaw).dump(), std::string("-4"));
            ASSERT_EQ(r.status, 200);
            EXPECT_EQ(r.body, layout_to_json(place(s, instance.scene, view, CanvasSpec{})).dump());
        }
    }
}

TEST(Service, LayoutErrors)
{
    StudyService svc;
    const std::string id = create(svc, "height", "compare", 10, 1).at("session_id");
    EXPECT_EQ(svc.get_layout("0123", std::string("0"), std::string("0")).status, 404);
    EXPECT_EQ(svc.get_layout(id, std::nullopt, std::string("0")).status, 400);
    EXPECT_EQ(svc.get_layout(id, std::string("abc"), std::string("0")).status, 400);
    EXPECT_EQ(svc.get_layout(id, std::string("10deg"), std::string("0")).status, 400);
    EXPECT_EQ(svc.get_layout(id, std::string("nan"), std::string("0")).status, 400);
    EXPECT_EQ(svc.get_layout(id, std::string("0"), std::string("95")).status, 400);
    EXPECT_EQ(svc.get_layout(id, std::string("-720.5"), std::string("+3")).status, 200);
}

TEST(Service, RevealRules)
{
    StudyService svc;
    const json created = create(svc, "value", "summarize", 20, 8);
    const std::string id = created.at("session_id");
    const auto objects = objects_by_id(created);
    const int red_seed = created.at("task").at("clusters").at("red_seed");
    const int blue_seed = created.at("task").at("clusters").at("blue_seed");
    EXPECT_TRUE(created.at("task").at("clusters").at("red").is_null());

    // no layout requested yet
    EXPECT_EQ(svc.reveal(id, object_body(red_seed)).status, 409);

    const int away = far_from(objects, red_seed);
    ASSERT_GE(away, 0);
    const auto [yaw_away, pitch_away] = facing(objects.at(away));
    ASSERT_EQ(svc.get_layout(id, yaw_away, pitch_away).status, 200);
    EXPECT_EQ(svc.reveal(id, object_body(red_seed)).status, 409);

    const auto [yaw, pitch] = facing(objects.at(red_seed));
    const json before = parse_ok(svc.get_layout(id, yaw, pitch));
    int non_seed = -1;
    for (const auto& [oid, o] : objects) {
        if (oid != red_seed && oid != blue_seed) {
            non_seed = oid;
            break;
        }
    }
    EXPECT_EQ(svc.reveal(id, object_body(non_seed)).status, 409);
    EXPECT_EQ(svc.reveal(id, R"({"object_id":"x"})").status, 400);
    EXPECT_EQ(svc.reveal("ffff", object_body(red_seed)).status, 404);

    const json first = parse_ok(svc.reveal(id, object_body(red_seed)));
    const json second = parse_ok(svc.reveal(id, object_body(red_seed)));
    EXPECT_EQ(first, second);
    EXPECT_EQ(first.at("reveal_state"), json::array({red_seed}));

    // seed labels start highlighted; the next layout adds the rest of the red cluster
    const json after = parse_ok(svc.get_layout(id, yaw, pitch));
    auto count_red = [](const json& layout) {
        int n = 0;
        for (const auto& b : layout.at("boxes")) {
            n += b.at("highlight") == "red";
        }
        return n;
    };
    EXPECT_EQ(count_red(before), 1);
    EXPECT_EQ(count_red(after), kRedClusterSize);
}

TEST(Service, RevealOnlyForSummarize)
{
    StudyService svc;
    const json created = create(svc, "angle", "compare", 10, 2);
    const std::string id = created.at("session_id");
    ASSERT_EQ(svc.get_layout(id, std::string("0"), std::string("0")).status, 200);
    const int target = created.at("task").at("target_ids")[0];
    EXPECT_EQ(svc.reveal(id, object_body(target)).status, 409);
}

TEST(Service, AnswerGrading)
{
    StudyService svc;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const json created = create(svc, "boundary", "compare", 10, seed);
        const std::string id = created.at("session_id");
        const TaskInstance instance = build_task(TaskKind::compare, generate_scene(SceneConfig{.size = 10}, seed), seed);
        const std::string right = answer_to_string(instance.correct_answer);
        const std::string wrong = right == "red" ? "blue" : "red";

        const json created2 = create(svc, "boundary", "compare", 10, seed);
        const std::string id2 = created2.at("session_id");

        EXPECT_EQ(parse_ok(svc.submit_answer(id, answer_body(right))).at("correct"), true);
        EXPECT_EQ(parse_ok(svc.submit_answer(id2, answer_body(wrong))).at("correct"), false);
        EXPECT_EQ(svc.submit_answer(id, answer_body(right)).status, 409);
    }
}

TEST(Service, AnswerValidation)
{
    StudyService svc;
    const std::string id = create(svc, "value", "summarize", 10, 3).at("session_id");
    EXPECT_EQ(svc.submit_answer(id, answer_body("purple")).status, 400);
    EXPECT_EQ(svc.submit_answer(id, answer_body("equal", -1.0)).status, 400);
    EXPECT_EQ(svc.submit_answer(id, R"({"answer":"red"})").status, 400);
    EXPECT_EQ(svc.submit_answer("abcd", answer_body("red")).status, 404);
    EXPECT_EQ(svc.submit_answer(id, answer_body("equal", 2.0)).status, 200);
    // answered sessions no longer accept reveals
    EXPECT_EQ(svc.reveal(id, object_body(0)).status, 409);
}

TEST(Service, ExportCsvHasHumanRow)
{
    StudyService svc;
    const json created = create(svc, "angle", "identify", 10, 9);
    const std::string id = created.at("session_id");
    EXPECT_EQ(svc.export_csv(id).body, to_csv({}));
    ASSERT_EQ(svc.submit_answer(id, answer_body("yellow", 4.25)).status, 200);
    const auto r = svc.export_csv(id);
    EXPECT_EQ(r.content_type, "text/csv");
    const auto records = parse_csv(r.body);
    ASSERT_EQ(records.size(), 1u);
    EXPECT_FALSE(records[0].costs.has_value());
    EXPECT_EQ(records[0].condition, Strategy::angle);
    EXPECT_EQ(records[0].task, TaskKind::identify);
    EXPECT_EQ(records[0].size, 10);
    EXPECT_EQ(records[0].seed, 9u);
    EXPECT_DOUBLE_EQ(records[0].proxy_time_s, 4.25);
    EXPECT_NE(r.body.find(",,,,,4.25,yellow,"), std::string::npos);
    EXPECT_EQ(svc.export_csv("beef").status, 404);
}

TEST(Service, SessionsAreIsolated)
{
    StudyService svc;
    const json a = create(svc, "value", "summarize", 20, 8);
    const json b = create(svc, "value", "summarize", 20, 8);
    const std::string ida = a.at("session_id"), idb = b.at("session_id");
    const auto objects = objects_by_id(a);
    const int red_seed = a.at("task").at("clusters").at("red_seed");
    const auto [yaw, pitch] = facing(objects.at(red_seed));
    ASSERT_EQ(svc.get_layout(ida, yaw, pitch).status, 200);
    ASSERT_EQ(svc.reveal(ida, object_body(red_seed)).status, 200);
    EXPECT_NE(svc.get_layout(ida, yaw, pitch).body, svc.get_layout(idb, yaw, pitch).body);
    EXPECT_EQ(svc.submit_answer(ida, answer_body("red")).status, 200);
    EXPECT_EQ(parse_csv(svc.export_csv(idb).body).size(), 0u);
}

TEST(Service, ScriptedClientIsAlwaysGradedCorrect)
{
    StudyService svc;
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const Strategy s = kAllStrategies[seed % kAllStrategies.size()];
        const TaskKind t = kAllTasks[seed % kAllTasks.size()];
        const json created = create(svc, std::string(to_string(s)), std::string(to_string(t)), seed % 2 ? 20 : 10, seed);
        const std::string answer = arlabel::testing::scripted_answer(svc, created);
        EXPECT_EQ(parse_ok(svc.submit_answer(created.at("session_id"), answer_body(answer))).at("correct"), true)
            << "seed " << seed;
    }
}

TEST(Service, ConcurrentRequests)
{
    StudyService svc;
    std::vector<std::thread> threads;
    std::vector<int> failures(4, 0);
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&, t] {
            for (int i = 0; i < 10; ++i) {
                const auto r = svc.create_session(
                    json{{"condition", "value"}, {"task", "compare"}, {"size", 10}, {"seed", t * 100 + i}}.dump());
                if (r.status != 200) {
                    ++failures[t];
                    continue;
                }
                const std::string id = json::parse(r.body).at("session_id");
                failures[t] += svc.get_layout(id, std::to_string(i * 30), std::string("0")).status != 200;
            }
        });
    }
    for (auto& th : threads) {
        th.join();
    }
    EXPECT_EQ(failures, std::vector<int>(4, 0));
    EXPECT_EQ(svc.session_count(), 40u);
}

TEST(ServiceHttp, RoutesOverLoopback)
{
    StudyService svc;
    httplib::Server server;
    svc.bind(server);
    const int port = server.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread listener([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto health = client.Get("/healthz");
    ASSERT_TRUE(health);
    EXPECT_EQ(health->status, 200);
    EXPECT_EQ(json::parse(health->body).at("status"), "ok");

    auto created = client.Post("/session", R"({"condition":"angle","task":"compare","size":10,"seed":4})",
                               "application/json");
    ASSERT_TRUE(created);
    ASSERT_EQ(created->status, 200);
    const json body = json::parse(created->body);
    const std::string id = body.at("session_id");

    auto layout = client.Get("/session/" + id + "/layout?yaw=30&pitch=0");
    ASSERT_TRUE(layout);
    EXPECT_EQ(layout->status, 200);
    EXPECT_EQ(layout->body, svc.get_layout(id, std::string("30"), std::string("0")).body);

    auto bad = client.Get("/session/" + id + "/layout?yaw=north&pitch=0");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 400);
    auto missing = client.Get("/session/abc123/layout?yaw=0&pitch=0");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 404);
    auto nowhere = client.Get("/nowhere");
    ASSERT_TRUE(nowhere);
    EXPECT_EQ(nowhere->status, 404);
    EXPECT_TRUE(json::parse(nowhere->body).contains("error"));

    auto reveal = client.Post("/session/" + id + "/reveal", object_body(0), "application/json");
    ASSERT_TRUE(reveal);
    EXPECT_EQ(reveal->status, 409);

    auto answer = client.Post("/session/" + id + "/answer", answer_body("red", 1.5), "application/json");
    ASSERT_TRUE(answer);
    EXPECT_EQ(answer->status, 200);
    auto csv = client.Get("/session/" + id + "/export.csv");
    ASSERT_TRUE(csv);
    EXPECT_EQ(csv->status, 200);
    EXPECT_EQ(csv->get_header_value("Content-Type"), "text/csv");
    EXPECT_EQ(parse_csv(csv->body).size(), 1u);

    server.stop();
    listener.join();
}
