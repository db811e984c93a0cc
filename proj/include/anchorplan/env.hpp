#pragma once

#include "anchorplan/mcts.hpp"
#include "anchorplan/scorer.hpp"
#include "anchorplan/se3.hpp"
#include "anchorplan/world_model.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace anchorplan {

// Five-step sequential reach: visit A, B, C with the goal visible, then
// return to A and finish at the A-B midpoint with the goal occluded.
struct E3Task {
    Vec3 a, b, c;
    double success_radius = 0.1;   // meters
    int actions_per_step = 10;
    std::array<std::string, 3> target_ids{"A", "B", "C"};

    Vec3 step_goal_position(int step) const;       // step in 1..5
    std::string goal_target_id(int step) const;    // step 5 labels the midpoint
    bool goal_visible(int step) const;             // true for steps 1..3
    std::vector<std::string> hidden_targets(int step) const;
    void validate() const;
};

struct StepOutcome {
    bool success = false;
    double final_distance = 0.0;   // to the true task goal, meters
    int actions_executed = 0;
};

struct EpisodeRecord {
    std::string variant;
    std::uint64_t seed = 0;
    int episode = 0;
    std::array<StepOutcome, 5> steps{};
    bool blend_active = false;
    std::string memory_source;
};

// Append-only step-index -> pose map; entries are never overwritten.
class AnchorMemory {
public:
    void record(int step, const Pose& c2w);   // throws on duplicate step
    bool has(int step) const { return entries_.contains(step); }
    const Pose& at(int step) const;
    const std::map<int, Pose>& entries() const { return entries_; }

private:
    std::map<int, Pose> entries_;
};

// The real camera observation at the given pose: a geometric record of the
// scene with the step's scripted occlusion applied. Both agent variants
// observe through this one function regardless of the rollout oracle in use.
Frame observe(const E3Task& task, int step, const Pose& c2w, const Scene& scene);

// Position of a target in an observed frame, if visible.
std::optional<Vec3> goal_from_frame(const Frame& frame, const std::string& target_id);

struct VariantSpec {
    std::string name;     // "greedy", "mcts-d1", "mcts-d2", ... "mcts-d<k>"
    bool planner = false;
    int depth = 1;        // D for planner variants
};

VariantSpec parse_variant(const std::string& name);

struct GreedyState {
    JointConfig joints;
    Pose c2w;
};

// Reactive baseline: per physical action, sample branching candidates, rate
// each candidate pose by immediate distance to the goal read from the
// current frame, execute the argmin. When the goal is occluded every
// candidate gets the same uninformative constant and the first candidate
// (the stay-still action) executes.
StepOutcome run_greedy_step(const E3Task& task, int step, GreedyState& state,
                            ActionSource& sampler, const KinematicChain& chain,
                            const Scene& scene, int branching);

struct PlannerState {
    SearchTree tree;
    AnchorMemory anchors;

    PlannerState(JointConfig q0, const KinematicChain& chain)
        : tree(std::move(q0), chain) {}
};

struct PlannerStepConfig {
    PlanParams plan;
    std::string memory_source = "anchor";   // "anchor" | "tree-node"
    bool blend_updates = false;              // pixel-oracle runs only
};

// Plan / execute / update anchor / advance root, recording the completion
// pose into the anchor memory. Memory-step goals are reconstructed from the
// configured memory source.
StepOutcome run_planner_step(const E3Task& task, int step, PlannerState& state,
                             ActionSource& sampler, const KinematicChain& chain,
                             const Scene& scene, WorldModel& oracle, const NodeScorer& scorer,
                             const PlannerStepConfig& config);

enum class OracleKind { geometric, pixel };

struct EpisodeConfig {
    E3Task task;
    KinematicChain chain;
    Scene scene;
    PlanParams plan;
    SamplerConfig greedy_sampler{0.4, true, 64, 1e-5, true};
    SamplerConfig planner_sampler{0.4, false, 64, 1e-5, true};
    std::string memory_source = "anchor";
    OracleKind oracle = OracleKind::geometric;
    std::string scorer = "exact";
    double ee_disc_radius = 0.05;
    double absent_sentinel = 1.0e6;
    int pixel_width = 64;
    int pixel_height = 64;
    double init_joint_lo = -0.5;   // initial configuration draw, radians
    double init_joint_hi = 0.5;
};

// Runs steps 1..5 sequentially regardless of intermediate failure; each step
// starts from wherever the previous one ended. Deterministic per
// (variant, seed, episode, config).
EpisodeRecord run_episode(const VariantSpec& variant, std::uint64_t seed, int episode,
                          const EpisodeConfig& config);

} // namespace anchorplan
