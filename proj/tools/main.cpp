#include "uniqd/loop.hpp"
#include "uniqd/metrics.hpp"
#include "uniqd/snapshot.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int cmd_run(const std::string& config_path, const std::string& variant,
            const std::string& seed, const std::string& threads, const std::string& out_dir)
{
    uniqd::ExperimentConfig config;
    try {
        config = uniqd::ExperimentConfig::load(config_path);
        if (!variant.empty()) config.variant = uniqd::variant_from_string(variant);
        if (!seed.empty()) config.seed = std::stoull(seed);
        if (!threads.empty()) config.threads = std::stoi(threads);
        if (!out_dir.empty()) config.out_dir = out_dir;
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        const uniqd::RunState state = uniqd::run(config);
        std::cout << "run complete: " << state.metrics.evaluation_count << " evaluations, container size "
                  << state.container.size() << ", artifacts in " << config.out_dir << '\n';
    } catch (const std::exception& e) {
        std::cerr << "run error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}

int cmd_eval(const std::string& snapshot_path, const std::vector<std::string>& tasks,
             const std::string& out_dir, bool plot)
{
    std::vector<uniqd::SnapshotEntry> snapshot;
    std::vector<uniqd::Task> task_list;
    try {
        snapshot = uniqd::read_snapshot(snapshot_path);
        if (snapshot.empty()) throw uniqd::SnapshotError("snapshot has no entries");
        for (const auto& t : tasks) task_list.push_back(uniqd::task_from_string(t));
    } catch (const std::exception& e) {
        std::cerr << "eval error: " << e.what() << '\n';
        return 1;
    }
    const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    fs::create_directories(dir);
    for (uniqd::Task t : task_list) {
        const auto curve = uniqd::metrics::coverage_curve(snapshot, t, 11);
        uniqd::metrics::write_coverage_csv(dir / ("coverage_" + uniqd::to_string(t) + ".csv"),
                                           curve, 0, "snapshot");
        if (plot)
            uniqd::metrics::write_scatter_svg(dir / ("scatter_" + uniqd::to_string(t) + ".svg"),
                                              snapshot, t);
        std::cout << uniqd::to_string(t) << " total coverage: " << curve.coverage.front() << '\n';
    }
    return 0;
}

struct RunRow {
    std::string variant;
    std::uint64_t seed;
    int coverage;
};

int cmd_compare(const std::vector<std::string>& manifest_paths, const std::string& task_name)
{
    uniqd::Task task;
    try {
        task = uniqd::task_from_string(task_name);
    } catch (const std::exception& e) {
        std::cerr << "compare error: " << e.what() << '\n';
        return 1;
    }
    if (manifest_paths.size() < 2) {
        std::cerr << "compare error: need at least 2 manifests\n";
        return 1;
    }

    std::vector<RunRow> rows;
    for (const auto& mp : manifest_paths) {
        try {
            std::ifstream in(mp);
            if (!in) throw std::runtime_error("cannot open " + mp);
            json manifest = json::parse(in);
            const fs::path snap = fs::path(mp).parent_path() / "snapshot.csv";
            const auto snapshot = uniqd::read_snapshot(snap);
            rows.push_back({manifest.at("variant").get<std::string>(),
                            manifest.at("seed").get<std::uint64_t>(),
                            uniqd::metrics::coverage(snapshot, task,
                                                     -std::numeric_limits<double>::infinity())});
        } catch (const std::exception& e) {
            std::cerr << "compare error: " << mp << ": " << e.what() << '\n';
            return 1;
        }
    }

    std::cout << "variant,seed,coverage_" << task_name << '\n';
    for (const auto& r : rows) std::cout << r.variant << ',' << r.seed << ',' << r.coverage << '\n';

    std::map<std::string, std::vector<double>> by_variant;
    for (const auto& r : rows) by_variant[r.variant].push_back(r.coverage);
    auto quantile = [](std::vector<double> v, double q) {
        std::sort(v.begin(), v.end());
        const double pos = q * (v.size() - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double frac = pos - i;
        return i + 1 < v.size() ? v[i] * (1 - frac) + v[i + 1] * frac : v[i];
    };
    std::cout << "variant,median,q25,q75\n";
    for (const auto& [variant, values] : by_variant)
        std::cout << variant << ',' << quantile(values, 0.5) << ',' << quantile(values, 0.25)
                  << ',' << quantile(values, 0.75) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quality-Diversity experiments on a planar unicycle"};
    app.require_subcommand(1);

    std::string config_path, variant, seed, threads, out_dir, snapshot_path, task;
    std::vector<std::string> tasks, manifests;
    bool plot = false;

    CLI::App* run = app.add_subcommand("run", "Execute an experiment from a config file");
    run->add_option("--config", config_path, "Config file path")->required();
    run->add_option("--variant", variant, "Override the config variant");
    run->add_option("--seed", seed, "Override the config seed");
    run->add_option("--threads", threads, "Worker threads (results are thread-count invariant)");
    run->add_option("--out-dir", out_dir, "Override the output directory");

    CLI::App* eval = app.add_subcommand("eval", "Coverage curves for a container snapshot");
    eval->add_option("snapshot", snapshot_path, "snapshot.csv path")->required();
    eval->add_option("--task", tasks, "Tasks to evaluate (nav, forw, turn)")->required();
    eval->add_option("--out-dir", out_dir, "Output directory for curves");
    eval->add_flag("--plot", plot, "Also write an SVG scatter per task");

    CLI::App* compare = app.add_subcommand("compare", "Merge per-seed coverage across manifests");
    compare->add_option("manifests", manifests, "manifest.json paths")->required();
    compare->add_option("--task", task, "Task grid for the comparison")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, variant, seed, threads, out_dir);
    if (eval->parsed()) return cmd_eval(snapshot_path, tasks, out_dir, plot);
    return cmd_compare(manifests, task);
}
