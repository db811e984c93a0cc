#include "anchorplan/env.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <stdexcept>

namespace anchorplan {

Vec3 E3Task::step_goal_position(int step) const {
    switch (step) {
        case 1: return a;
        case 2: return b;
        case 3: return c;
        case 4: return a;
        case 5: return (a + b) * 0.5;
        default: throw std::invalid_argument("E3Task: step must be in 1..5");
    }
}

std::string E3Task::goal_target_id(int step) const {
    switch (step) {
        case 1: return target_ids[0];
        case 2: return target_ids[1];
        case 3: return target_ids[2];
        case 4: return target_ids[0];
        case 5: return "mid(" + target_ids[0] + "," + target_ids[1] + ")";
        default: throw std::invalid_argument("E3Task: step must be in 1..5");
    }
}

bool E3Task::goal_visible(int step) const {
    if (step < 1 || step > 5) throw std::invalid_argument("E3Task: step must be in 1..5");
    return step <= 3;
}

std::vector<std::string> E3Task::hidden_targets(int step) const {
    if (step < 1 || step > 5) throw std::invalid_argument("E3Task: step must be in 1..5");
    if (step == 4) return {target_ids[0]};
    if (step == 5) return {target_ids[0], target_ids[1]};
    return {};
}

void E3Task::validate() const {
    const double ab = (a - b).norm();
    const double bc = (b - c).norm();
    const double ca = (c - a).norm();
    if (ab == 0.0 || bc == 0.0 || ca == 0.0)
        throw std::invalid_argument("E3Task: positions A, B, C must be pairwise distinct");
    if (success_radius <= 0.0) throw std::invalid_argument("E3Task: success_radius must be > 0");
    if (actions_per_step < 1) throw std::invalid_argument("E3Task: actions_per_step must be >= 1");
}

void AnchorMemory::record(int step, const Pose& c2w) {
    if (entries_.contains(step))
        throw std::invalid_argument("AnchorMemory: step already recorded (entries are append-only)");
    entries_.emplace(step, c2w);
}

const Pose& AnchorMemory::at(int step) const {
    auto it = entries_.find(step);
    if (it == entries_.end()) throw std::out_of_range("AnchorMemory: no entry for step");
    return it->second;
}

Frame observe(const E3Task& task, int step, const Pose& c2w, const Scene& scene) {
    const std::vector<std::string> hidden = task.hidden_targets(step);
    GeometricFrame frame;
    frame.ee_position = c2w.translation;
    for (const auto& target : scene.targets) {
        if (std::find(hidden.begin(), hidden.end(), target.id) != hidden.end()) continue;
        frame.visible_targets.emplace_back(target.id, target.position);
    }
    return frame;
}

std::optional<Vec3> goal_from_frame(const Frame& frame, const std::string& target_id) {
    const auto* geo = std::get_if<GeometricFrame>(&frame);
    if (geo == nullptr) return std::nullopt;
    for (const auto& [id, pos] : geo->visible_targets)
        if (id == target_id) return pos;
    return std::nullopt;
}

VariantSpec parse_variant(const std::string& name) {
    if (name == "greedy") return VariantSpec{name, false, 0};
    if (name.rfind("mcts-d", 0) == 0) {
        const std::string depth_str = name.substr(6);
        try {
            const int depth = std::stoi(depth_str);
            if (depth >= 1 && std::to_string(depth) == depth_str) return VariantSpec{name, true, depth};
        } catch (const std::exception&) {
        }
    }
    throw std::invalid_argument("unknown variant '" + name + "' (expected greedy or mcts-d<k>)");
}

StepOutcome run_greedy_step(const E3Task& task, int step, GreedyState& state,
                            ActionSource& sampler, const KinematicChain& chain,
                            const Scene& scene, int branching) {
    const Vec3 true_goal = task.step_goal_position(step);
    StepOutcome outcome;
    for (int action_idx = 0; action_idx < task.actions_per_step; ++action_idx) {
        const Frame frame = observe(task, step, state.c2w, scene);
        const std::optional<Vec3> seen = goal_from_frame(frame, task.goal_target_id(step));
        std::optional<Goal> goal;
        if (seen.has_value()) goal = Goal{*seen, task.goal_target_id(step)};

        const std::vector<Action> candidates = sampler.sample(state.joints, goal, chain, branching);

        // Argmin of immediate distance to the goal seen in the current frame.
        // Without a visible goal every candidate carries the same
        // uninformative constant, so ties resolve to index 0.
        std::size_t chosen = 0;
        if (goal.has_value()) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                JointConfig next = state.joints;
                for (std::size_t j = 0; j < next.size(); ++j) next[j] += candidates[i].delta[j];
                const Pose pose = forward_kinematics(next, chain);
                const double d = (pose.translation - goal->position).norm();
                if (d < best) {
                    best = d;
                    chosen = i;
                }
            }
        }

        for (std::size_t j = 0; j < state.joints.size(); ++j)
            state.joints[j] += candidates[chosen].delta[j];
        state.c2w = forward_kinematics(state.joints, chain);
        outcome.actions_executed += 1;
    }
    outcome.final_distance = (state.c2w.translation - true_goal).norm();
    outcome.success = outcome.final_distance <= task.success_radius;
    return outcome;
}

namespace {

Goal resolve_planner_goal(const E3Task& task, int step, const PlannerState& state,
                          const Scene& scene, const std::string& memory_source) {
    const std::string id = task.goal_target_id(step);
    if (task.goal_visible(step)) {
        const Frame frame = observe(task, step, state.tree.root().pose, scene);
        const std::optional<Vec3> seen = goal_from_frame(frame, id);
        if (!seen.has_value())
            throw std::logic_error("planner: goal scripted visible but absent from the frame");
        return Goal{*seen, id};
    }

    const auto anchor_translation = [&](int s) -> Vec3 {
        if (memory_source == "tree-node") {
            auto it = state.tree.step_anchors().find(s);
            if (it == state.tree.step_anchors().end())
                throw std::logic_error("planner: no tree anchor for step " + std::to_string(s));
            return it->second.translation;
        }
        return state.anchors.at(s).translation;
    };

    if (step == 4) return Goal{anchor_translation(1), id};
    return Goal{(anchor_translation(1) + anchor_translation(2)) * 0.5, id};
}

} // namespace

StepOutcome run_planner_step(const E3Task& task, int step, PlannerState& state,
                             ActionSource& sampler, const KinematicChain& chain,
                             const Scene& scene, WorldModel& oracle, const NodeScorer& scorer,
                             const PlannerStepConfig& config) {
    const Vec3 true_goal = task.step_goal_position(step);
    const Goal goal = resolve_planner_goal(task, step, state, scene, config.memory_source);

    StepOutcome outcome;
    for (int action_idx = 0; action_idx < task.actions_per_step; ++action_idx) {
        const Action action =
            plan(state.tree, goal, oracle, scorer, chain, sampler, config.plan);
        state.tree.advance(action);

        // Anchor update: the promoted child's pose must equal FK of its
        // joints bit-exactly; recomputed every physical action.
        const Pose recomputed = forward_kinematics(state.tree.root().joints, chain);
        if (!(recomputed == state.tree.root().pose))
            throw std::logic_error("planner: anchor pose diverged from forward kinematics");

        if (config.blend_updates) {
            // the oracle's own view of the real camera frame, occlusion applied
            const std::vector<std::string> hidden = task.hidden_targets(step);
            oracle.update_reference(oracle.render_masked(state.tree.root().pose, hidden));
        }
        outcome.actions_executed += 1;
    }

    const Pose& final_pose = state.tree.root().pose;
    state.anchors.record(step, final_pose);
    state.tree.mark_step(step);

    outcome.final_distance = (final_pose.translation - true_goal).norm();
    outcome.success = outcome.final_distance <= task.success_radius;
    return outcome;
}

namespace {

JointConfig draw_initial_joints(Rng& rng, const KinematicChain& chain, double lo, double hi) {
    JointConfig q(chain.dof(), 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double jlo = std::max(lo, chain.links[i].limit_lo);
        const double jhi = std::min(hi, chain.links[i].limit_hi);
        q[i] = rng.uniform(jlo, jhi);
    }
    return q;
}

std::unique_ptr<WorldModel> make_oracle(const EpisodeConfig& config) {
    if (config.oracle == OracleKind::pixel)
        return std::make_unique<PixelOracle>(config.scene, config.pixel_width, config.pixel_height);
    return std::make_unique<GeometricOracle>(config.scene, OcclusionPolicy{},
                                             config.absent_sentinel);
}

} // namespace

EpisodeRecord run_episode(const VariantSpec& variant, std::uint64_t seed, int episode,
                          const EpisodeConfig& config) {
    config.task.validate();
    config.chain.validate();
    config.scene.validate();

    EpisodeRecord record;
    record.variant = variant.name;
    record.seed = seed;
    record.episode = episode;
    record.memory_source = config.memory_source;
    record.blend_active = config.oracle == OracleKind::pixel;

    const std::uint64_t stream = cell_seed(variant.name, seed, episode);
    Rng init_rng(splitmix64(stream));
    const JointConfig q0 =
        draw_initial_joints(init_rng, config.chain, config.init_joint_lo, config.init_joint_hi);

    const std::unique_ptr<WorldModel> oracle = make_oracle(config);
    const std::unique_ptr<NodeScorer> scorer =
        make_scorer(config.scorer, config.scene, config.ee_disc_radius);

    if (!variant.planner) {
        BallActionSampler sampler(config.greedy_sampler, splitmix64(stream ^ 0x5bf03635ull));
        GreedyState state{q0, forward_kinematics(q0, config.chain)};
        for (int step = 1; step <= 5; ++step) {
            record.steps[static_cast<std::size_t>(step - 1)] =
                run_greedy_step(config.task, step, state, sampler, config.chain, config.scene,
                                config.plan.branching);
        }
        return record;
    }

    BallActionSampler sampler(config.planner_sampler, splitmix64(stream ^ 0x5bf03635ull));
    PlannerState state(q0, config.chain);
    PlannerStepConfig step_config;
    step_config.plan = config.plan;
    step_config.plan.depth_limit = variant.depth;
    step_config.memory_source = config.memory_source;
    step_config.blend_updates = record.blend_active;
    for (int step = 1; step <= 5; ++step) {
        record.steps[static_cast<std::size_t>(step - 1)] =
            run_planner_step(config.task, step, state, sampler, config.chain, config.scene,
                             *oracle, *scorer, step_config);
    }
    return record;
}

} // namespace anchorplan
