#include <gtest/gtest.h>

#include "arlabel/agent.hpp"
#include "arlabel/random.hpp"
#include "test_support.hpp"

using namespace arlabel;
using arlabel::testing::make_object;
using arlabel::testing::make_scene;

namespace {

// Identify instance with the target at the given azimuth plus two distractors.
TaskInstance identify_at(double target_az)
{
    Scene s = make_scene({make_object(0, target_az), make_object(1, 150.0, 3.0, 1.2), make_object(2, 30.0, 2.8, 0.9)});
    for (auto& o : s.objects) {
        o.color = ObjectColor::yellow;
    }
    s.object(0).color = ObjectColor::blue;
    s.object(0).highlight = LabelHighlight::green;
    TaskInstance t;
    t.kind = TaskKind::identify;
    t.scene = s;
    t.target_ids = {0};
    t.correct_answer = ObjectColor::blue;
    return t;
}

TaskInstance compare_instance(std::uint64_t seed)
{
    SceneConfig c;
    c.size = seed % 2 ? 20 : 10;
    return build_compare(generate_scene(c, seed), seed);
}

}  // namespace

TEST(MinRotation, Examples)
{
    EXPECT_DOUBLE_EQ(min_rotation(0.0), 0.0);
    EXPECT_DOUBLE_EQ(min_rotation(-90.0), 90.0);
    EXPECT_DOUBLE_EQ(min_rotation(270.0), 90.0);
    EXPECT_DOUBLE_EQ(min_rotation(180.0), 180.0);
    EXPECT_DOUBLE_EQ(min_rotation(-180.0), 180.0);
    EXPECT_DOUBLE_EQ(min_rotation(725.0), 5.0);
}

TEST(ProxyTime, WeightedSum)
{
    CostBreakdown c{120.0, 30.0, 3, 2, 1};
    const AgentConfig a;
    EXPECT_DOUBLE_EQ(proxy_time(c, a), 120.0 / 60.0 + 30.0 / 300.0 + 3 * 0.5 + 2 * 0.3);
}

TEST(Agent, AngleIdentifyTurnsTheShortWay)
{
    const auto rec = run_trial(identify_at(270.0), Strategy::angle, AgentConfig{});
    ASSERT_TRUE(rec.costs);
    EXPECT_DOUBLE_EQ(rec.costs->travel_deg, 90.0);
    EXPECT_EQ(rec.costs->num_travels, 1);
    EXPECT_EQ(rec.costs->labels_read, 1);
    EXPECT_TRUE(rec.correct);
    EXPECT_EQ(rec.answer, Answer{ObjectColor::blue});
}

TEST(Agent, SituatedIdentifyScansClockwise)
{
    const auto rec = run_trial(identify_at(270.0), Strategy::situated, AgentConfig{});
    EXPECT_NEAR(rec.costs->travel_deg, 270.0, 1e-9);
    EXPECT_EQ(rec.costs->num_travels, 1);
    EXPECT_TRUE(rec.correct);
}

TEST(Agent, CounterclockwiseScanReachesLeftTargetSooner)
{
    AgentConfig a;
    a.scan_direction = ScanDirection::counterclockwise;
    const auto rec = run_trial(identify_at(270.0), Strategy::boundary, a);
    EXPECT_NEAR(rec.costs->travel_deg, 90.0, 1e-9);
}

TEST(Agent, TargetAlreadyInViewNeedsNoTravel)
{
    for (Strategy s : kAllStrategies) {
        const auto rec = run_trial(identify_at(0.0), s, AgentConfig{});
        EXPECT_DOUBLE_EQ(rec.costs->travel_deg, 0.0) << to_string(s);
    }
}

TEST(Agent, HeightCreepsToTheIndicatedSide)
{
    const auto rec = run_trial(identify_at(270.0), Strategy::height, AgentConfig{});
    // creeping left never overshoots the target
    EXPECT_NEAR(rec.costs->travel_deg, 90.0, 1e-9);
    const auto value = run_trial(identify_at(90.0), Strategy::value, AgentConfig{});
    EXPECT_NEAR(value.costs->travel_deg, 90.0, 1e-9);
}

TEST(Agent, CompareTravelCounts)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const TaskInstance t = compare_instance(seed);
        for (Strategy s : kAllStrategies) {
            const auto rec = run_trial(t, s, AgentConfig{});
            EXPECT_EQ(rec.costs->num_travels, labels_out_of_view(s) ? 1 : 2) << to_string(s) << " seed " << seed;
            EXPECT_TRUE(rec.correct);
        }
    }
}

TEST(Agent, SummarizeVisitsBothSeeds)
{
    SceneConfig c;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const TaskInstance t = build_summarize(generate_scene(c, seed), seed);
        for (Strategy s : kAllStrategies) {
            const auto rec = run_trial(t, s, AgentConfig{});
            if (labels_out_of_view(s)) {
                EXPECT_EQ(rec.costs->num_travels, 2);
                // two seed labels plus five revealed member labels
                EXPECT_EQ(rec.costs->labels_read, 7);
            } else {
                EXPECT_GE(rec.costs->num_travels, 1);
                EXPECT_LE(rec.costs->num_travels, 2);
            }
            EXPECT_EQ(rec.answer, t.correct_answer);
        }
    }
}

TEST(Agent, RecordsAreConsistent)
{
    Rng rng(3);
    for (int i = 0; i < 30; ++i) {
        const std::uint64_t seed = rng.next();
        SceneConfig c;
        c.size = i % 2 ? 20 : 10;
        const Scene scene = generate_scene(c, seed);
        for (TaskKind k : kAllTasks) {
            const TaskInstance t = build_task(k, scene, seed);
            for (Strategy s : kAllStrategies) {
                const AgentConfig a;
                const auto rec = run_trial(t, s, a);
                ASSERT_TRUE(rec.costs);
                const auto& cb = *rec.costs;
                EXPECT_GE(cb.travel_deg, 0.0);
                EXPECT_GE(cb.gaze_deg, 0.0);
                EXPECT_GE(cb.labels_read, 0);
                EXPECT_GE(cb.context_switches, 0);
                EXPECT_GT(rec.proxy_time_s, 0.0);
                EXPECT_DOUBLE_EQ(rec.proxy_time_s, cb.travel_deg / a.yaw_speed_dps + cb.gaze_deg / a.gaze_speed_dps +
                                                       cb.labels_read * a.label_read_s +
                                                       cb.context_switches * a.context_switch_s);
                EXPECT_TRUE(rec.correct);
                EXPECT_EQ(rec.condition, s);
                EXPECT_EQ(rec.task, k);
                EXPECT_EQ(rec.size, c.size);

                AgentConfig fast = a;
                fast.yaw_speed_dps *= 2.0;
                const auto quicker = run_trial(t, s, fast);
                EXPECT_EQ(quicker.costs, rec.costs);
                if (cb.travel_deg > 0.0) {
                    EXPECT_LT(quicker.proxy_time_s, rec.proxy_time_s);
                }
            }
            EXPECT_LE(run_trial(t, Strategy::angle, AgentConfig{}).costs->travel_deg,
                      k == TaskKind::identify ? run_trial(t, Strategy::situated, AgentConfig{}).costs->travel_deg
                                              : 1e9);
        }
    }
}

TEST(Agent, RejectsUnknownConditionAndBadRates)
{
    const TaskInstance t = identify_at(90.0);
    EXPECT_THROW(run_trial(t, static_cast<Strategy>(17), AgentConfig{}), UnknownCondition);
    AgentConfig bad;
    bad.label_read_s = 0.0;
    EXPECT_THROW(run_trial(t, Strategy::angle, bad), std::invalid_argument);
}
