#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arlabel/agent.hpp"
#include "arlabel/geometry.hpp"
#include "arlabel/placement.hpp"
#include "arlabel/tasks.hpp"

namespace arlabel {

struct ExperimentConfig {
    std::vector<Strategy> conditions{kAllStrategies.begin(), kAllStrategies.end()};
    std::vector<TaskKind> tasks{kAllTasks.begin(), kAllTasks.end()};
    std::vector<int> sizes{10, 20};
    int trials_per_cell = 6;
    std::uint64_t master_seed = 42;
    AgentConfig agent;
    CanvasSpec canvas;
    /// Worker threads; 0 or 1 runs sequentially. Output does not depend on it.
    int jobs = 1;

    void validate() const;
};

/// Seed of one (condition, task, size, trial) cell.
std::uint64_t cell_seed(std::uint64_t master_seed, Strategy condition, TaskKind task, int size, int trial);

class CellError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One record per cell, ordered by (condition, task, size, trial) in
/// canonical enum order. Failures are rethrown as CellError naming the cell.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// CSV

extern const std::vector<std::string> kCsvColumns;

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records);
std::string to_csv(const std::vector<TrialRecord>& records);
/// Throws std::invalid_argument on malformed input.
std::vector<TrialRecord> parse_csv(std::istream& in);
std::vector<TrialRecord> parse_csv(const std::string& text);

// ---------------------------------------------------------------------------
// Statistics

struct GroupBy {
    bool condition = true;
    bool task = true;
    bool size = true;
};

/// Throws std::invalid_argument for unknown keys. Accepts "condition,task".
GroupBy parse_group_by(const std::string& keys);

struct SummaryRow {
    std::optional<Strategy> condition;
    std::optional<TaskKind> task;
    std::optional<int> size;
    int n = 0;
    double mean_proxy_time_s = 0.0;
    double ci95_halfwidth_s = 0.0;
    double mean_travel_deg = 0.0;
    double mean_num_travels = 0.0;
};

struct MeanCi {
    double mean = 0.0;
    double ci95_halfwidth = 0.0;
};

/// Mean and normal-approximation 95% half-width 1.96 s / sqrt(n); 0 for n == 1.
MeanCi mean_ci95(const std::vector<double>& values);

/// Groups ordered by key. Travel means cover records that carry costs.
std::vector<SummaryRow> summarize_records(const std::vector<TrialRecord>& records, GroupBy by = {});

struct FriedmanResult {
    double chi2 = 0.0;
    int df = 0;
    double p = 1.0;
};

class DegenerateInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Rows are blocks (subjects), columns are conditions. Ties get average
/// ranks; no tie correction is applied to the statistic.
FriedmanResult friedman(const std::vector<std::vector<double>>& matrix);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double x, int df);

/// Within-row average ranks (1-based).
std::vector<double> average_ranks(const std::vector<double>& row);

struct FriedmanTable {
    std::string label;                  // e.g. "task=compare"
    std::vector<Strategy> conditions;   // column order
    int blocks = 0;
    FriedmanResult result;
};

/// Builds complete blocks keyed by (task, size, trial) from records, one
/// test per group of the non-condition keys in `by`. Groups with fewer than
/// two complete blocks or two conditions are skipped.
std::vector<FriedmanTable> friedman_by(const std::vector<TrialRecord>& records, GroupBy by,
                                       const std::string& measure);

/// Values of a CSV measure column for a record ("proxy_time_s", "travel_deg", ...).
double record_measure(const TrialRecord& r, const std::string& measure);

}  // namespace arlabel
