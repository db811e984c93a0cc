#include "anchorplan/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace anchorplan {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    const double d = std::stod(value, &used);
    if (used != value.size())
        throw std::invalid_argument("config: bad number for '" + key + "': " + value);
    return d;
}

int parse_int(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size())
        throw std::invalid_argument("config: bad integer for '" + key + "': " + value);
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config: bad boolean for '" + key + "': " + value);
}

Vec3 parse_vec3(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    Vec3 v;
    if (!(in >> v.x >> v.y >> v.z))
        throw std::invalid_argument("config: expected three numbers for '" + key + "': " + value);
    std::string rest;
    if (in >> rest)
        throw std::invalid_argument("config: trailing tokens for '" + key + "': " + value);
    return v;
}

std::vector<std::string> split_csv(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace

void set_config_key(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "task.a") config.task_a = parse_vec3(key, value);
    else if (key == "task.b") config.task_b = parse_vec3(key, value);
    else if (key == "task.c") config.task_c = parse_vec3(key, value);
    else if (key == "task.success_radius") config.success_radius = parse_double(key, value);
    else if (key == "task.actions_per_step") config.actions_per_step = parse_int(key, value);
    else if (key == "target_radius") config.target_radius = parse_double(key, value);
    else if (key == "variants") config.variants = split_csv(value);
    else if (key == "seeds") {
        config.seeds.clear();
        for (const std::string& s : split_csv(value))
            config.seeds.push_back(static_cast<std::uint64_t>(std::stoull(s)));
    }
    else if (key == "episodes") config.episodes = parse_int(key, value);
    else if (key == "depth") config.depth = parse_int(key, value);
    else if (key == "branching") config.branching = parse_int(key, value);
    else if (key == "exploration") config.exploration = parse_double(key, value);
    else if (key == "budget_nodes") config.budget_nodes = parse_int(key, value);
    else if (key == "zero_epsilon") config.zero_epsilon = parse_double(key, value);
    else if (key == "action_bound") config.action_bound = parse_double(key, value);
    else if (key == "greedy_goal_directed") config.greedy_goal_directed = parse_bool(key, value);
    else if (key == "planner_goal_directed") config.planner_goal_directed = parse_bool(key, value);
    else if (key == "memory_source") config.memory_source = value;
    else if (key == "oracle") config.oracle = value;
    else if (key == "scorer") config.scorer = value;
    else if (key == "ee_disc_radius") config.ee_disc_radius = parse_double(key, value);
    else if (key == "absent_sentinel") config.absent_sentinel = parse_double(key, value);
    else if (key == "pixel_width") config.pixel_width = parse_int(key, value);
    else if (key == "pixel_height") config.pixel_height = parse_int(key, value);
    else if (key == "focal_px") config.focal_px = parse_double(key, value);
    else if (key == "init_joint_lo") config.init_joint_lo = parse_double(key, value);
    else if (key == "init_joint_hi") config.init_joint_hi = parse_double(key, value);
    else if (key == "jobs") config.jobs = parse_int(key, value);
    else if (key == "out_dir") config.out_dir = value;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    RunConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        set_config_key(config, key, value);
    }
    config.validate();
    return config;
}

RunConfig default_config() { return RunConfig{}; }

Scene RunConfig::make_scene() const {
    Scene scene;
    scene.targets = {
        SceneTarget{"A", task_a, target_radius},
        SceneTarget{"B", task_b, target_radius},
        SceneTarget{"C", task_c, target_radius},
    };
    scene.intrinsics = CameraIntrinsics{focal_px, static_cast<double>(pixel_width) / 2.0,
                                        static_cast<double>(pixel_height) / 2.0};
    return scene;
}

E3Task RunConfig::make_task() const {
    E3Task task;
    task.a = task_a;
    task.b = task_b;
    task.c = task_c;
    task.success_radius = success_radius;
    task.actions_per_step = actions_per_step;
    return task;
}

PlanParams RunConfig::make_plan_params() const {
    PlanParams params;
    params.depth_limit = depth;
    params.branching = branching;
    params.exploration = exploration;
    params.zero_epsilon = zero_epsilon;
    params.budget = PlanBudget{budget_nodes, std::nullopt};
    return params;
}

EpisodeConfig RunConfig::make_episode_config() const {
    EpisodeConfig ec;
    ec.task = make_task();
    ec.chain = reference_chain_3dof();
    ec.scene = make_scene();
    ec.plan = make_plan_params();
    ec.greedy_sampler = SamplerConfig{action_bound, greedy_goal_directed, 64, 1e-5, true};
    ec.planner_sampler = SamplerConfig{action_bound, planner_goal_directed, 64, 1e-5, true};
    ec.memory_source = memory_source;
    ec.oracle = oracle == "pixel" ? OracleKind::pixel : OracleKind::geometric;
    ec.scorer = scorer;
    ec.ee_disc_radius = ee_disc_radius;
    ec.absent_sentinel = absent_sentinel;
    ec.pixel_width = pixel_width;
    ec.pixel_height = pixel_height;
    ec.init_joint_lo = init_joint_lo;
    ec.init_joint_hi = init_joint_hi;
    return ec;
}

void RunConfig::validate() const {
    if (variants.empty()) throw std::invalid_argument("config: at least one variant required");
    for (const std::string& v : variants) parse_variant(v);
    if (seeds.empty()) throw std::invalid_argument("config: at least one seed required");
    std::set<std::uint64_t> unique_seeds(seeds.begin(), seeds.end());
    if (unique_seeds.size() != seeds.size())
        throw std::invalid_argument("config: seeds must be distinct");
    if (episodes < 1) throw std::invalid_argument("config: episodes must be >= 1");
    if (oracle != "geometric" && oracle != "pixel")
        throw std::invalid_argument("config: oracle must be 'geometric' or 'pixel'");
    if (memory_source != "anchor" && memory_source != "tree-node")
        throw std::invalid_argument("config: memory_source must be 'anchor' or 'tree-node'");
    if (jobs < 0) throw std::invalid_argument("config: jobs must be >= 0");
    make_scene().validate();
    make_task().validate();
    make_scorer(scorer, make_scene(), ee_disc_radius);   // resolvable name check
}

} // namespace anchorplan
