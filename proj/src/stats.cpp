#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include <boost/math/special_functions/gamma.hpp>

#include "arlabel/harness.hpp"

namespace arlabel {

GroupBy parse_group_by(const std::string& keys)
{
    GroupBy by{false, false, false};
    std::istringstream in(keys);
    std::string key;
    while (std::getline(in, key, ',')) {
        if (key == "condition") {
            by.condition = true;
        } else if (key == "task") {
            by.task = true;
        } else if (key == "size") {
            by.size = true;
        } else if (!key.empty()) {
            throw std::invalid_argument("unknown grouping key: " + key);
        }
    }
    return by;
}

MeanCi mean_ci95(const std::vector<double>& values)
{
    MeanCi out;
    const auto n = static_cast<double>(values.size());
    if (values.empty()) {
        return out;
    }
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() < 2) {
        return out;
    }
    double ss = 0.0;
    for (double v : values) {
        ss += (v - out.mean) * (v - out.mean);
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    out.ci95_halfwidth = 1.96 * sd / std::sqrt(n);
    return out;
}

std::vector<SummaryRow> summarize_records(const std::vector<TrialRecord>& records, GroupBy by)
{
    using Key = std::tuple<int, int, int>;
    std::map<Key, std::vector<const TrialRecord*>> groups;
    for (const auto& r : records) {
        const Key key{by.condition ? static_cast<int>(r.condition) : -1, by.task ? static_cast<int>(r.task) : -1,
                      by.size ? r.size : -1};
        groups[key].push_back(&r);
    }

    std::vector<SummaryRow> rows;
    for (const auto& [key, members] : groups) {
        SummaryRow row;
        if (by.condition) row.condition = static_cast<Strategy>(std::get<0>(key));
        if (by.task) row.task = static_cast<TaskKind>(std::get<1>(key));
        if (by.size) row.size = std::get<2>(key);
        row.n = static_cast<int>(members.size());

        std::vector<double> times;
        double travel = 0.0, travels = 0.0;
        int with_costs = 0;
        for (const auto* r : members) {
            times.push_back(r->proxy_time_s);
            if (r->costs) {
                travel += r->costs->travel_deg;
                travels += r->costs->num_travels;
                ++with_costs;
            }
        }
        const MeanCi ci = mean_ci95(times);
        row.mean_proxy_time_s = ci.mean;
        row.ci95_halfwidth_s = ci.ci95_halfwidth;
        if (with_costs > 0) {
            row.mean_travel_deg = travel / with_costs;
            row.mean_num_travels = travels / with_costs;
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<double> average_ranks(const std::vector<double>& row)
{
    const std::size_t k = row.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
    std::vector<double> ranks(k);
    std::size_t i = 0;
    while (i < k) {
        std::size_t j = i;
        while (j + 1 < k && row[order[j + 1]] == row[order[i]]) {
            ++j;
        }
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) {
            ranks[order[t]] = avg;
        }
        i = j + 1;
    }
    return ranks;
}

double chi_square_sf(double x, int df)
{
    if (df < 1) {
        throw std::invalid_argument("chi-square needs df >= 1");
    }
    if (x <= 0.0) {
        return 1.0;
    }
    return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

FriedmanResult friedman(const std::vector<std::vector<double>>& matrix)
{
    const std::size_t n = matrix.size();
    if (n < 2) {
        throw DegenerateInput("Friedman test needs at least two blocks");
    }
    const std::size_t k = matrix.front().size();
    if (k < 2) {
        throw DegenerateInput("Friedman test needs at least two conditions");
    }
    std::vector<double> rank_sums(k, 0.0);
    for (const auto& row : matrix) {
        if (row.size() != k) {
            throw DegenerateInput("Friedman matrix rows differ in length");
        }
        const auto ranks = average_ranks(row);
        for (std::size_t j = 0; j < k; ++j) {
            rank_sums[j] += ranks[j];
        }
    }
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    const double center = (kd + 1.0) / 2.0;
    double spread = 0.0;
    for (double sum : rank_sums) {
        const double mean_rank = sum / nd;
        spread += (mean_rank - center) * (mean_rank - center);
    }
    FriedmanResult res;
    res.chi2 = 12.0 * nd / (kd * (kd + 1.0)) * spread;
    res.df = static_cast<int>(k) - 1;
    res.p = chi_square_sf(res.chi2, res.df);
    return res;
}

double record_measure(const TrialRecord& r, const std::string& measure)
{
    if (measure == "proxy_time_s") {
        return r.proxy_time_s;
    }
    if (!r.costs) {
        throw std::invalid_argument("record has no simulated costs for measure " + measure);
    }
    if (measure == "travel_deg") return r.costs->travel_deg;
    if (measure == "gaze_deg") return r.costs->gaze_deg;
    if (measure == "labels_read") return r.costs->labels_read;
    if (measure == "context_switches") return r.costs->context_switches;
    if (measure == "num_travels") return r.costs->num_travels;
    throw std::invalid_argument("unknown measure: " + measure);
}

std::vector<FriedmanTable> friedman_by(const std::vector<TrialRecord>& records, GroupBy by,
                                       const std::string& measure)
{
    // group key (task, size) restricted to the requested keys; block key (task, size, trial)
    using GroupKey = std::pair<int, int>;
    using BlockKey = std::tuple<int, int, int>;
    std::map<GroupKey, std::map<BlockKey, std::map<Strategy, double>>> groups;
    for (const auto& r : records) {
        const GroupKey g{by.task ? static_cast<int>(r.task) : -1, by.size ? r.size : -1};
        groups[g][BlockKey{static_cast<int>(r.task), r.size, r.trial_index}][r.condition] = record_measure(r, measure);
    }

    std::vector<FriedmanTable> tables;
    for (const auto& [gkey, blocks] : groups) {
        std::set<Strategy> present;
        for (const auto& [bk, cells] : blocks) {
            for (const auto& [cond, v] : cells) {
                present.insert(cond);
            }
        }
        FriedmanTable table;
        table.conditions.assign(present.begin(), present.end());
        std::vector<std::vector<double>> matrix;
        for (const auto& [bk, cells] : blocks) {
            if (cells.size() != present.size()) {
                continue;
            }
            std::vector<double> row;
            for (Strategy c : table.conditions) {
                row.push_back(cells.at(c));
            }
            matrix.push_back(std::move(row));
        }
        if (matrix.size() < 2 || table.conditions.size() < 2) {
            continue;
        }
        std::ostringstream label;
        if (by.task) label << "task=" << to_string(static_cast<TaskKind>(gkey.first));
        if (by.size) label << (by.task ? " " : "") << "size=" << gkey.second;
        table.label = label.str().empty() ? "all" : label.str();
        table.blocks = static_cast<int>(matrix.size());
        table.result = friedman(matrix);
        tables.push_back(std::move(table));
    }
    return tables;
}

}  // namespace arlabel
