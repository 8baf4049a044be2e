#include "arlabel/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "arlabel/random.hpp"
#include "arlabel/scene.hpp"

namespace arlabel {

void ExperimentConfig::validate() const
{
    if (conditions.empty() || tasks.empty() || sizes.empty()) {
        throw std::invalid_argument("conditions, tasks and sizes must be non-empty");
    }
    if (trials_per_cell < 1) {
        throw std::invalid_argument("trials per cell must be at least 1");
    }
    for (int s : sizes) {
        if (s != 10 && s != 20) {
            throw std::invalid_argument("sizes must be 10 or 20");
        }
    }
    if (!agent.valid()) {
        throw std::invalid_argument("agent rates must be strictly positive");
    }
    if (!canvas.valid()) {
        throw std::invalid_argument("invalid canvas");
    }
}

std::uint64_t cell_seed(std::uint64_t master_seed, Strategy condition, TaskKind task, int size, int trial)
{
    std::uint64_t h = combine_seed(master_seed, hash_string(to_string(condition)));
    h = combine_seed(h, hash_string(to_string(task)));
    h = combine_seed(h, static_cast<std::uint64_t>(size));
    return combine_seed(h, static_cast<std::uint64_t>(trial));
}

namespace {

struct Cell {
    Strategy condition;
    TaskKind task;
    int size;
    int trial;
};

template <typename T>
std::vector<T> canonical(const std::vector<T>& items)
{
    std::vector<T> out = items;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TrialRecord run_cell(const ExperimentConfig& config, const Cell& cell)
{
    try {
        const std::uint64_t seed = cell_seed(config.master_seed, cell.condition, cell.task, cell.size, cell.trial);
        SceneConfig scene_config;
        scene_config.size = cell.size;
        const Scene scene = generate_scene(scene_config, seed);
        const TaskInstance instance = build_task(cell.task, scene, seed);
        TrialRecord rec = run_trial(instance, cell.condition, config.agent, config.canvas);
        rec.trial_index = cell.trial;
        rec.seed = seed;
        return rec;
    } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << "cell (condition=" << to_string(cell.condition) << ", task=" << to_string(cell.task)
            << ", size=" << cell.size << ", trial=" << cell.trial << "): " << e.what();
        throw CellError(msg.str());
    }
}

}  // namespace

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config)
{
    config.validate();
    std::vector<Cell> cells;
    for (Strategy c : canonical(config.conditions)) {
        for (TaskKind t : canonical(config.tasks)) {
            for (int s : canonical(config.sizes)) {
                for (int i = 0; i < config.trials_per_cell; ++i) {
                    cells.push_back({c, t, s, i});
                }
            }
        }
    }

    std::vector<TrialRecord> records(cells.size());
    const int workers = std::max(1, std::min<int>(config.jobs, static_cast<int>(cells.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            records[i] = run_cell(config, cells[i]);
        }
        return records;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::size_t failed_at = cells.size();
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < cells.size(); i = next++) {
                try {
                    records[i] = run_cell(config, cells[i]);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    // report the first cell in output order, as a sequential run would
                    if (i < failed_at) {
                        failed_at = i;
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
    return records;
}

// ---------------------------------------------------------------------------

const std::vector<std::string> kCsvColumns = {
    "trial_id", "condition", "task", "size",           "seed",         "travel_deg", "gaze_deg",
    "labels_read", "context_switches", "num_travels", "proxy_time_s", "answer",     "correct",
};

std::string format_double(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) {
        throw std::runtime_error("failed to format double");
    }
    return std::string(buf, end);
}

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records)
{
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
        out << (i ? "," : "") << kCsvColumns[i];
    }
    out << '\n';
    for (const auto& r : records) {
        out << r.trial_index << ',' << to_string(r.condition) << ',' << to_string(r.task) << ',' << r.size << ','
            << r.seed << ',';
        if (r.costs) {
            out << format_double(r.costs->travel_deg) << ',' << format_double(r.costs->gaze_deg) << ','
                << r.costs->labels_read << ',' << r.costs->context_switches << ',' << r.costs->num_travels << ',';
        } else {
            out << ",,,,,";
        }
        out << format_double(r.proxy_time_s) << ',' << answer_to_string(r.answer) << ','
            << (r.correct ? "true" : "false") << '\n';
    }
}

std::string to_csv(const std::vector<TrialRecord>& records)
{
    std::ostringstream out;
    write_csv(out, records);
    return out.str();
}

namespace {

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == sep) {
        fields.emplace_back();
    }
    return fields;
}

template <typename T>
T parse_number(const std::string& s, const char* column)
{
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument(std::string("bad value for ") + column + ": '" + s + "'");
    }
    return value;
}

}  // namespace

std::vector<TrialRecord> parse_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("empty CSV");
    }
    if (split(line, ',') != kCsvColumns) {
        throw std::invalid_argument("unexpected CSV header: " + line);
    }
    std::vector<TrialRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != kCsvColumns.size()) {
            throw std::invalid_argument("wrong field count in CSV row: " + line);
        }
        TrialRecord r;
        r.trial_index = parse_number<int>(f[0], "trial_id");
        r.condition = parse_strategy(f[1]);
        r.task = parse_task_kind(f[2]);
        r.size = parse_number<int>(f[3], "size");
        r.seed = parse_number<std::uint64_t>(f[4], "seed");
        const bool has_costs = !f[5].empty();
        if (has_costs) {
            CostBreakdown c;
            c.travel_deg = parse_number<double>(f[5], "travel_deg");
            c.gaze_deg = parse_number<double>(f[6], "gaze_deg");
            c.labels_read = parse_number<int>(f[7], "labels_read");
            c.context_switches = parse_number<int>(f[8], "context_switches");
            c.num_travels = parse_number<int>(f[9], "num_travels");
            r.costs = c;
        } else if (!f[6].empty() || !f[7].empty() || !f[8].empty() || !f[9].empty()) {
            throw std::invalid_argument("partial cost columns in CSV row: " + line);
        }
        r.proxy_time_s = parse_number<double>(f[10], "proxy_time_s");
        r.answer = parse_answer(r.task, f[11]);
        if (f[12] == "true") {
            r.correct = true;
        } else if (f[12] == "false") {
            r.correct = false;
        } else {
            throw std::invalid_argument("bad value for correct: '" + f[12] + "'");
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<TrialRecord> parse_csv(const std::string& text)
{
    std::istringstream in(text);
    return parse_csv(in);
}

}  // namespace arlabel
