#include "anchorplan/bench.hpp"
#include "anchorplan/config.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using anchorplan::AblationReport;
using anchorplan::RunConfig;

struct Overrides {
    std::vector<std::pair<std::string, std::string>> assignments;

    void apply(RunConfig& config) const {
        for (const auto& [key, value] : assignments) anchorplan::set_config_key(config, key, value);
        config.validate();
    }
};

void add_common_flags(CLI::App* cmd, std::string& config_path, Overrides& overrides) {
    cmd->add_option("--config", config_path, "flat key-value config file");
    const auto push = [&overrides](const std::string& key) {
        return [&overrides, key](const std::string& value) {
            overrides.assignments.emplace_back(key, value);
        };
    };
    cmd->add_option_function<std::string>("--variants", push("variants"),
                                          "comma-separated variant list");
    cmd->add_option_function<std::string>("--seeds", push("seeds"), "comma-separated seeds");
    cmd->add_option_function<std::string>("--episodes", push("episodes"), "episodes per seed");
    cmd->add_option_function<std::string>("--depth", push("depth"), "lookahead depth D");
    cmd->add_option_function<std::string>("--branching", push("branching"), "branching factor B");
    cmd->add_option_function<std::string>("--budget-nodes", push("budget_nodes"),
                                          "node evaluations per planning call");
    cmd->add_option_function<std::string>("--scorer", push("scorer"),
                                          "exact | hybrid+overlap | hybrid+flat | flat");
    cmd->add_option_function<std::string>("--oracle", push("oracle"), "geometric | pixel");
    cmd->add_option_function<std::string>("--jobs", push("jobs"), "worker threads (0 = hardware)");
    cmd->add_option_function<std::string>("--out", push("out_dir"), "output directory");
}

RunConfig resolve_config(const std::string& config_path, const Overrides& overrides) {
    RunConfig config =
        config_path.empty() ? anchorplan::default_config() : anchorplan::load_config_file(config_path);
    overrides.apply(config);
    return config;
}

int run_ablate(const RunConfig& config, bool with_chart) {
    const AblationReport report = anchorplan::run_ablation(config);

    std::filesystem::create_directories(config.out_dir);
    const std::string csv_path = config.out_dir + "/ablation.csv";
    const std::string json_path = config.out_dir + "/ablation.json";
    {
        std::ofstream csv(csv_path, std::ios::binary);
        anchorplan::write_raw_csv(report, csv);
    }
    {
        std::ofstream json(json_path, std::ios::binary);
        anchorplan::write_report_json(report, json);
    }
    if (with_chart) anchorplan::emit_chart(report, config.out_dir + "/ablation.svg");

    for (const auto& row : report.rows) {
        std::printf("%-10s non-mem SR %.3f +/- %.3f   memory SR %.3f +/- %.3f   step5 %.3f",
                    row.variant.c_str(), row.non_mem_sr_mean, row.non_mem_sr_std,
                    row.memory_sr_mean, row.memory_sr_std, row.step5_sr);
        if (row.delta_vs_greedy.has_value())
            std::printf("   delta vs greedy %+.3f", *row.delta_vs_greedy);
        std::printf("\n");
    }
    std::printf("wrote %s, %s%s\n", csv_path.c_str(), json_path.c_str(),
                with_chart ? (", " + config.out_dir + "/ablation.svg").c_str() : "");
    return 0;
}

int run_phase0(const RunConfig& config) {
    const anchorplan::Phase0Report report = anchorplan::verify_phase0(config);
    for (const auto& oracle : report.oracles) {
        std::printf("%s: phase0 %s oracle, %d trajectories, renders %s\n",
                    oracle.bit_identical ? "PASS" : "FAIL", oracle.oracle.c_str(),
                    oracle.trajectories, oracle.bit_identical ? "bit-identical" : "diverged");
    }
    std::printf("phase0 runtime %.3f s\n", report.seconds);
    return report.pass ? 0 : 1;
}

int run_phase1(const RunConfig& config) {
    const anchorplan::Phase1Report report = anchorplan::verify_phase1(config);
    std::printf("%s: bridge angular error max %.3e rad (threshold 1e-9)\n",
                report.angular_pass ? "PASS" : "FAIL", report.max_angular_error_rad);
    std::printf("INFO: bridge latency median %.4f ms (desk budget %.1f ms, reported only)\n",
                report.median_fk_latency_ms, report.latency_budget_ms);
    std::printf("%s: exact-scorer monotonicity %.2f%s (required 1.00)\n",
                report.monotonicity_pass ? "PASS" : "FAIL", report.monotonicity_value,
                report.monotonicity_degenerate ? " (degenerate)" : "");
    return report.pass ? 0 : 1;
}

int run_regress_flat(const RunConfig& config) {
    const anchorplan::FlatRegressionReport report = anchorplan::regression_flat_scorer(config);
    std::printf("root visits:");
    for (int v : report.root_visits) std::printf(" %d", v);
    std::printf("\n%s: sibling visit spread %d (<= 1), returned q_max %.3f (== 0)\n",
                report.pass ? "PASS" : "FAIL", report.max_visit_spread, report.returned_q_max);
    return report.pass ? 0 : 1;
}

int run_chart(const std::string& csv_path, const std::string& out_path) {
    std::ifstream in(csv_path);
    if (!in) {
        std::fprintf(stderr, "chart: cannot open '%s'\n", csv_path.c_str());
        return 1;
    }
    std::vector<anchorplan::RawRow> raw = anchorplan::read_raw_csv(in);

    // The grid shape comes from the rows themselves, so any raw CSV charts.
    std::vector<std::string> variants;
    std::vector<std::uint64_t> seeds;
    int episodes = 0;
    for (const anchorplan::RawRow& row : raw) {
        if (std::find(variants.begin(), variants.end(), row.variant) == variants.end())
            variants.push_back(row.variant);
        if (std::find(seeds.begin(), seeds.end(), row.seed) == seeds.end())
            seeds.push_back(row.seed);
        episodes = std::max(episodes, row.episode + 1);
    }

    const AblationReport report =
        anchorplan::aggregate(std::move(raw), variants, seeds, episodes);
    anchorplan::emit_chart(report, out_path);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Persistent-anchor lookahead planning benchmark harness"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides overrides;

    auto* ablate = app.add_subcommand("ablate", "run the success-rate ablation grid");
    bool with_chart = false;
    ablate->add_flag("--chart", with_chart, "also write the per-step SVG chart");
    add_common_flags(ablate, config_path, overrides);

    auto* phase0 = app.add_subcommand("phase0", "render path-independence verification");
    add_common_flags(phase0, config_path, overrides);

    auto* phase1 = app.add_subcommand("phase1", "kinematic bridge and scoring verification");
    add_common_flags(phase1, config_path, overrides);

    auto* regress = app.add_subcommand("regress-flat", "flat-scorer pure-exploration regression");
    add_common_flags(regress, config_path, overrides);

    auto* chart = app.add_subcommand("chart", "render an SVG chart from a raw ablation CSV");
    std::string chart_in, chart_out = "chart.svg";
    chart->add_option("--in", chart_in, "raw ablation CSV")->required();
    chart->add_option("--svg", chart_out, "output SVG path");
    add_common_flags(chart, config_path, overrides);

    auto* dump = app.add_subcommand("dump-tree", "dump a planning tree after a few actions");
    std::uint64_t dump_seed = 0;
    int dump_actions = 3;
    std::string dump_out;
    dump->add_option("--seed", dump_seed, "episode seed");
    dump->add_option("--actions", dump_actions, "physical actions to execute first");
    dump->add_option("--tree-out", dump_out, "output file (default: stdout)");
    add_common_flags(dump, config_path, overrides);

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig config = resolve_config(config_path, overrides);
        if (ablate->parsed()) return run_ablate(config, with_chart);
        if (phase0->parsed()) return run_phase0(config);
        if (phase1->parsed()) return run_phase1(config);
        if (regress->parsed()) return run_regress_flat(config);
        if (chart->parsed()) return run_chart(chart_in, chart_out);
        if (dump->parsed()) {
            if (dump_out.empty()) {
                anchorplan::dump_demo_tree(config, dump_seed, dump_actions, std::cout);
            } else {
                std::ofstream out(dump_out, std::ios::binary);
                if (!out) {
                    std::fprintf(stderr, "dump-tree: cannot open '%s'\n", dump_out.c_str());
                    return 1;
                }
                anchorplan::dump_demo_tree(config, dump_seed, dump_actions, out);
                std::printf("wrote %s\n", dump_out.c_str());
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
