#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "arlabel/harness.hpp"
#include "arlabel/placement.hpp"
#include "arlabel/scene.hpp"
#include "arlabel/service.hpp"

using namespace arlabel;

namespace {

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> items;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            items.push_back(item);
        }
    }
    return items;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& text, Parse parse)
{
    std::vector<T> out;
    for (const auto& item : split_list(text)) {
        out.push_back(parse(item));
    }
    return out;
}

void write_output(const std::string& path, const std::string& content)
{
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    out << content;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string optional_cell(bool present, const std::string& text)
{
    return present ? text : "*";
}

void print_summary(const std::vector<SummaryRow>& rows)
{
    std::cout << "# mean proxy_time_s with normal-approximation 95% CI (1.96 s/sqrt(n))\n";
    std::cout << "condition,task,size,n,mean_proxy_time_s,ci95_halfwidth_s,mean_travel_deg,mean_num_travels\n";
    for (const auto& r : rows) {
        std::cout << optional_cell(r.condition.has_value(), r.condition ? std::string(to_string(*r.condition)) : "")
                  << ',' << optional_cell(r.task.has_value(), r.task ? std::string(to_string(*r.task)) : "") << ','
                  << optional_cell(r.size.has_value(), r.size ? std::to_string(*r.size) : "") << ',' << r.n << ','
                  << format_double(r.mean_proxy_time_s) << ',' << format_double(r.ci95_halfwidth_s) << ','
                  << format_double(r.mean_travel_deg) << ',' << format_double(r.mean_num_travels) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"AR label placement simulator"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run the simulated experiment grid and write a CSV");
    std::string conditions = "situated,boundary,height,angle,value";
    std::string tasks = "identify,compare,summarize";
    std::string sizes = "10,20";
    int trials = 6;
    std::uint64_t seed = 42;
    std::string out_path;
    int jobs = 1;
    run->add_option("--conditions", conditions, "Comma-separated label conditions")->capture_default_str();
    run->add_option("--tasks", tasks, "Comma-separated tasks")->capture_default_str();
    run->add_option("--sizes", sizes, "Comma-separated scene sizes (10, 20)")->capture_default_str();
    run->add_option("--trials", trials, "Trials per cell")->capture_default_str()->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "Master seed")->capture_default_str();
    run->add_option("--out", out_path, "Output CSV path (stdout if omitted)");
    run->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::NonNegativeNumber);

    // stats
    auto* stats = app.add_subcommand("stats", "Summarize a results CSV");
    std::string in_path;
    std::string by = "condition,task";
    std::string friedman_measure;
    stats->add_option("--in", in_path, "Results CSV")->required();
    stats->add_option("--by", by, "Grouping keys among condition,task,size")->capture_default_str();
    stats->add_option("--friedman", friedman_measure, "Run a Friedman test across conditions on this measure");

    // scene
    auto* scene_cmd = app.add_subcommand("scene", "Generate a scene as JSON");
    int scene_size = 10;
    std::uint64_t scene_seed = 42;
    std::string scene_out;
    scene_cmd->add_option("--size", scene_size, "Number of objects (10 or 20)")->capture_default_str();
    scene_cmd->add_option("--seed", scene_seed, "Seed")->capture_default_str();
    scene_cmd->add_option("--out", scene_out, "Output path (stdout if omitted)");

    // layout
    auto* layout_cmd = app.add_subcommand("layout", "Place labels for a scene at a view");
    std::string layout_scene;
    std::string layout_condition;
    double yaw = 0.0;
    double pitch = 0.0;
    std::string layout_out;
    layout_cmd->add_option("--scene", layout_scene, "Scene JSON")->required();
    layout_cmd->add_option("--condition", layout_condition, "Label condition")->required();
    layout_cmd->add_option("--yaw", yaw, "Head yaw in degrees")->capture_default_str();
    layout_cmd->add_option("--pitch", pitch, "Head pitch in degrees")->capture_default_str()->check(
        CLI::Range(-90.0, 90.0));
    layout_cmd->add_option("--out", layout_out, "Output path (stdout if omitted)");

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "Serve the study HTTP API");
    std::string host = "127.0.0.1";
    int port = 8080;
    serve_cmd->add_option("--host", host, "Bind address")->capture_default_str();
    serve_cmd->add_option("--port", port, "Port")->capture_default_str()->check(CLI::Range(1, 65535));

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            ExperimentConfig config;
            config.conditions = parse_list<Strategy>(conditions, parse_strategy);
            config.tasks = parse_list<TaskKind>(tasks, parse_task_kind);
            config.sizes = parse_list<int>(sizes, [](const std::string& s) { return std::stoi(s); });
            config.trials_per_cell = trials;
            config.master_seed = seed;
            config.jobs = jobs;
            write_output(out_path, to_csv(run_experiment(config)));
        } else if (stats->parsed()) {
            const auto records = parse_csv(read_file(in_path));
            if (records.empty()) {
                throw std::runtime_error("no records in " + in_path);
            }
            const GroupBy group = parse_group_by(by);
            print_summary(summarize_records(records, group));
            if (!friedman_measure.empty()) {
                GroupBy blocks = group;
                blocks.condition = false;
                const auto tables = friedman_by(records, blocks, friedman_measure);
                std::cout << "\n# Friedman test across conditions on " << friedman_measure << '\n';
                std::cout << "group,conditions,blocks,chi2,df,p\n";
                for (const auto& t : tables) {
                    std::string names;
                    for (Strategy c : t.conditions) {
                        names += (names.empty() ? "" : "|") + std::string(to_string(c));
                    }
                    std::cout << t.label << ',' << names << ',' << t.blocks << ',' << format_double(t.result.chi2)
                              << ',' << t.result.df << ',' << format_double(t.result.p) << '\n';
                }
            }
        } else if (scene_cmd->parsed()) {
            SceneConfig config;
            config.size = scene_size;
            write_output(scene_out, scene_to_json(generate_scene(config, scene_seed)).dump(2) + "\n");
        } else if (layout_cmd->parsed()) {
            const Scene scene = scene_from_json(nlohmann::json::parse(read_file(layout_scene)));
            ViewState view;
            view.yaw_deg = yaw;
            view.pitch_deg = pitch;
            const auto layout = place(parse_strategy(layout_condition), scene, view, CanvasSpec{});
            write_output(layout_out, layout_to_json(layout).dump(2) + "\n");
        } else if (serve_cmd->parsed()) {
            StudyService service;
            std::cerr << "listening on http://" << host << ':' << port << '\n';
            if (!serve(service, host, port)) {
                throw std::runtime_error("could not bind " + host + ":" + std::to_string(port));
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "arlabel: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
