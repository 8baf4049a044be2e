#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "arlabel/harness.hpp"
#include "arlabel/random.hpp"

using namespace arlabel;

namespace {

// Rank-sum form of the statistic with ranks counted directly:
// rank = (#smaller) + (#equal including self + 1) / 2.
double brute_force_chi2(const std::vector<std::vector<double>>& m)
{
    const double n = static_cast<double>(m.size());
    const std::size_t k = m.front().size();
    std::vector<double> sums(k, 0.0);
    for (const auto& row : m) {
        for (std::size_t j = 0; j < k; ++j) {
            int less = 0, equal = 0;
            for (std::size_t t = 0; t < k; ++t) {
                less += row[t] < row[j];
                equal += row[t] == row[j];
            }
            sums[j] += less + (equal + 1) / 2.0;
        }
    }
    double sq = 0.0;
    for (double r : sums) {
        sq += r * r;
    }
    const double kd = static_cast<double>(k);
    return 12.0 / (n * kd * (kd + 1.0)) * sq - 3.0 * n * (kd + 1.0);
}

TrialRecord record(Strategy c, TaskKind t, int trial, double time)
{
    TrialRecord r;
    r.condition = c;
    r.task = t;
    r.size = 10;
    r.trial_index = trial;
    r.seed = 1000 + trial;
    r.costs = CostBreakdown{10.0 * trial, 1.5, 2, 1, 1};
    r.proxy_time_s = time;
    r.answer = t == TaskKind::summarize ? Answer{ClusterChoice::equal} : Answer{ObjectColor::red};
    r.correct = true;
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Statistics

TEST(MeanCi, Examples)
{
    const auto one = mean_ci95({3.0});
    EXPECT_DOUBLE_EQ(one.mean, 3.0);
    EXPECT_DOUBLE_EQ(one.ci95_halfwidth, 0.0);
    const auto two = mean_ci95({2.0, 4.0});
    EXPECT_DOUBLE_EQ(two.mean, 3.0);
    // s = sqrt(2), n = 2
    EXPECT_NEAR(two.ci95_halfwidth, 1.96, 1e-12);
}

TEST(Friedman, FullTiesGiveZero)
{
    const auto r = friedman({{1, 1, 1}, {2, 2, 2}, {5, 5, 5}});
    EXPECT_DOUBLE_EQ(r.chi2, 0.0);
    EXPECT_EQ(r.df, 2);
    EXPECT_DOUBLE_EQ(r.p, 1.0);
}

TEST(Friedman, ConsistentRankingHandComputed)
{
    // n = 3, k = 3, every row ranked (1, 2, 3): 12*3/12 * (1 + 0 + 1) = 6
    const auto r = friedman({{1, 2, 3}, {10, 20, 30}, {0.1, 0.2, 0.3}});
    EXPECT_NEAR(r.chi2, 6.0, 1e-12);
    EXPECT_EQ(r.df, 2);
    EXPECT_NEAR(r.p, std::exp(-3.0), 1e-6);
}

TEST(Friedman, MatchesBruteForceOnRandomMatrices)
{
    Rng rng(31);
    for (int t = 0; t < 100; ++t) {
        std::vector<std::vector<double>> m(10, std::vector<double>(5));
        for (auto& row : m) {
            for (auto& v : row) {
                // coarse values so ties occur
                v = static_cast<double>(rng.below(6));
            }
        }
        EXPECT_NEAR(friedman(m).chi2, brute_force_chi2(m), 1e-9);
    }
}

TEST(Friedman, DegenerateInputs)
{
    EXPECT_THROW(friedman({{1, 2, 3}}), DegenerateInput);
    EXPECT_THROW(friedman({{1}, {2}}), DegenerateInput);
    EXPECT_THROW(friedman({}), DegenerateInput);
    EXPECT_THROW(friedman({{1, 2}, {1, 2, 3}}), DegenerateInput);
}

TEST(ChiSquare, ClosedForms)
{
    for (double x : {0.1, 0.5, 1.0, 3.84, 6.0, 12.0, 30.0}) {
        EXPECT_NEAR(chi_square_sf(x, 1), std::erfc(std::sqrt(x / 2.0)), 1e-12) << x;
        EXPECT_NEAR(chi_square_sf(x, 2), std::exp(-x / 2.0), 1e-12) << x;
        EXPECT_NEAR(chi_square_sf(x, 4), std::exp(-x / 2.0) * (1.0 + x / 2.0), 1e-12) << x;
    }
    EXPECT_DOUBLE_EQ(chi_square_sf(0.0, 3), 1.0);
    EXPECT_THROW(chi_square_sf(1.0, 0), std::invalid_argument);
}

TEST(ChiSquare, MonotoneInStatistic)
{
    for (int df : {1, 2, 4, 7}) {
        double prev = 1.0;
        for (double x = 0.25; x < 40.0; x += 0.25) {
            const double p = chi_square_sf(x, df);
            EXPECT_LT(p, prev);
            EXPECT_GE(p, 0.0);
            prev = p;
        }
    }
}

TEST(AverageRanks, Ties)
{
    EXPECT_EQ(average_ranks({3.0, 1.0, 3.0, 2.0}), (std::vector<double>{3.5, 1.0, 3.5, 2.0}));
    EXPECT_EQ(average_ranks({5.0, 5.0, 5.0}), (std::vector<double>{2.0, 2.0, 2.0}));
}

TEST(Summaries, GroupedMeans)
{
    std::vector<TrialRecord> recs = {record(Strategy::angle, TaskKind::compare, 0, 2.0),
                                     record(Strategy::angle, TaskKind::compare, 1, 4.0),
                                     record(Strategy::value, TaskKind::compare, 0, 3.0)};
    const auto rows = summarize_records(recs, parse_group_by("condition,task"));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].condition, Strategy::angle);
    EXPECT_EQ(rows[0].n, 2);
    EXPECT_DOUBLE_EQ(rows[0].mean_proxy_time_s, 3.0);
    EXPECT_NEAR(rows[0].ci95_halfwidth_s, 1.96, 1e-12);
    EXPECT_DOUBLE_EQ(rows[0].mean_travel_deg, 5.0);
    EXPECT_FALSE(rows[0].size.has_value());
    EXPECT_EQ(rows[1].condition, Strategy::value);
    EXPECT_DOUBLE_EQ(rows[1].ci95_halfwidth_s, 0.0);
    EXPECT_THROW(parse_group_by("condition,colour"), std::invalid_argument);
}

TEST(Summaries, FriedmanByTask)
{
    std::vector<TrialRecord> recs;
    for (int trial = 0; trial < 3; ++trial) {
        recs.push_back(record(Strategy::situated, TaskKind::compare, trial, 9.0 + trial));
        recs.push_back(record(Strategy::angle, TaskKind::compare, trial, 3.0));
        recs.push_back(record(Strategy::value, TaskKind::compare, trial, 5.0));
    }
    GroupBy by;
    by.condition = false;
    by.size = false;
    const auto tables = friedman_by(recs, by, "proxy_time_s");
    ASSERT_EQ(tables.size(), 1u);
    EXPECT_EQ(tables[0].label, "task=compare");
    EXPECT_EQ(tables[0].blocks, 3);
    EXPECT_EQ(tables[0].conditions, (std::vector<Strategy>{Strategy::situated, Strategy::angle, Strategy::value}));
    EXPECT_NEAR(tables[0].result.chi2, 6.0, 1e-12);
    EXPECT_THROW(friedman_by(recs, by, "speed"), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Experiment runner

TEST(Experiment, FullGridRecordCount)
{
    ExperimentConfig config;
    const auto recs = run_experiment(config);
    EXPECT_EQ(recs.size(), 180u);
    for (const auto& r : recs) {
        EXPECT_TRUE(r.correct);
        EXPECT_EQ(r.seed, cell_seed(42, r.condition, r.task, r.size, r.trial_index));
    }
}

TEST(Experiment, AngleCompareSingleTravel)
{
    ExperimentConfig config;
    config.conditions = {Strategy::angle};
    config.tasks = {TaskKind::compare};
    config.sizes = {10};
    const auto recs = run_experiment(config);
    ASSERT_EQ(recs.size(), 6u);
    for (const auto& r : recs) {
        EXPECT_EQ(r.costs->num_travels, 1);
    }
}

TEST(Experiment, ParallelMatchesSequentialAndOrderIsCanonical)
{
    ExperimentConfig config;
    config.conditions = {Strategy::value, Strategy::situated};
    config.tasks = {TaskKind::summarize, TaskKind::identify};
    config.trials_per_cell = 3;
    const auto seq = run_experiment(config);
    config.jobs = 4;
    const auto par = run_experiment(config);
    EXPECT_EQ(to_csv(seq), to_csv(par));
    EXPECT_EQ(seq.front().condition, Strategy::situated);
    EXPECT_EQ(seq.front().task, TaskKind::identify);
    EXPECT_EQ(seq.size(), 2u * 2u * 2u * 3u);
}

TEST(Experiment, InvalidConfigs)
{
    ExperimentConfig c;
    c.trials_per_cell = 0;
    EXPECT_THROW(run_experiment(c), std::invalid_argument);
    c = {};
    c.sizes = {12};
    EXPECT_THROW(run_experiment(c), std::invalid_argument);
    c = {};
    c.tasks.clear();
    EXPECT_THROW(run_experiment(c), std::invalid_argument);
}

TEST(Experiment, CellSeedsDiffer)
{
    const auto a = cell_seed(42, Strategy::angle, TaskKind::compare, 10, 0);
    EXPECT_NE(a, cell_seed(42, Strategy::angle, TaskKind::compare, 10, 1));
    EXPECT_NE(a, cell_seed(42, Strategy::value, TaskKind::compare, 10, 0));
    EXPECT_NE(a, cell_seed(43, Strategy::angle, TaskKind::compare, 10, 0));
    EXPECT_EQ(a, cell_seed(42, Strategy::angle, TaskKind::compare, 10, 0));
}

// ---------------------------------------------------------------------------
// CSV

TEST(Csv, HeaderExact)
{
    const std::string text = to_csv({});
    EXPECT_EQ(text,
              "trial_id,condition,task,size,seed,travel_deg,gaze_deg,labels_read,context_switches,num_travels,"
              "proxy_time_s,answer,correct\n");
}

TEST(Csv, RoundTripSimulatedRecords)
{
    ExperimentConfig config;
    config.trials_per_cell = 2;
    const auto recs = run_experiment(config);
    EXPECT_EQ(parse_csv(to_csv(recs)), recs);
}

TEST(Csv, HumanRecordsHaveEmptyCostColumns)
{
    TrialRecord r = record(Strategy::height, TaskKind::summarize, 0, 12.25);
    r.costs.reset();
    r.correct = false;
    const std::string text = to_csv({r});
    EXPECT_NE(text.find("0,height,summarize,10,1000,,,,,,12.25,equal,false\n"), std::string::npos);
    EXPECT_EQ(parse_csv(text), std::vector<TrialRecord>{r});
}

TEST(Csv, RejectsMalformedInput)
{
    EXPECT_THROW(parse_csv(std::string{}), std::invalid_argument);
    EXPECT_THROW(parse_csv(std::string("a,b\n")), std::invalid_argument);
    const std::string header = to_csv({});
    EXPECT_THROW(parse_csv(header + "0,angle,compare,10,1,1,1,1,1,1,1.0,red\n"), std::invalid_argument);
    EXPECT_THROW(parse_csv(header + "0,angle,compare,10,1,1,1,1,1,1,1.0,red,maybe\n"), std::invalid_argument);
    EXPECT_THROW(parse_csv(header + "0,angle,compare,10,1,x,1,1,1,1,1.0,red,true\n"), std::invalid_argument);
    EXPECT_THROW(parse_csv(header + "0,angle,compare,10,1,,1,,,,1.0,red,true\n"), std::invalid_argument);
    EXPECT_THROW(parse_csv(header + "0,angle,summarize,10,1,1,1,1,1,1,1.0,yellow,true\n"), std::invalid_argument);
}

TEST(Csv, ShortestRoundTripDoubles)
{
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(2.0), "2");
    const double third = 1.0 / 3.0;
    EXPECT_EQ(std::stod(format_double(third)), third);
}
