#pragma once

#include "anchorplan/env.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace anchorplan {

// Everything a harness run needs, loadable from a flat key-value file with
// CLI flag overrides on top. Unknown keys are errors.
struct RunConfig {
    // task geometry
    Vec3 task_a{0.90, 0.00, 0.16};
    Vec3 task_b{0.4763, 0.2750, 0.20};
    Vec3 task_c{-0.0482, 0.9187, 0.18};
    double success_radius = 0.1;
    int actions_per_step = 10;
    double target_radius = 0.05;

    // ablation grid
    std::vector<std::string> variants{"greedy", "mcts-d1", "mcts-d2"};
    std::vector<std::uint64_t> seeds{0, 1, 2};
    int episodes = 30;

    // planner
    int depth = 2;               // used by subcommands that plan directly
    int branching = 4;
    double exploration = 0.02;
    int budget_nodes = 20;
    double zero_epsilon = 1e-6;
    double action_bound = 0.42;
    bool greedy_goal_directed = true;
    bool planner_goal_directed = true;
    std::string memory_source = "anchor";

    // oracle / scorer
    std::string oracle = "geometric";
    std::string scorer = "exact";
    double ee_disc_radius = 0.05;
    double absent_sentinel = 1.0e6;
    int pixel_width = 64;
    int pixel_height = 64;
    double focal_px = 64.0;

    // episode setup
    double init_joint_lo = -0.5;
    double init_joint_hi = 0.5;

    // harness
    int jobs = 0;                // 0 = hardware concurrency
    std::string out_dir = "out";

    Scene make_scene() const;
    E3Task make_task() const;
    EpisodeConfig make_episode_config() const;
    PlanParams make_plan_params() const;
    void validate() const;
};

// Applies one `key = value` assignment; throws std::invalid_argument on an
// unknown key or unparsable value.
void set_config_key(RunConfig& config, const std::string& key, const std::string& value);

// Parses a flat key-value file: one `key = value` per line, '#' comments.
RunConfig load_config_file(const std::string& path);

RunConfig default_config();

} // namespace anchorplan
