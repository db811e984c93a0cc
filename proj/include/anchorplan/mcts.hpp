#pragma once

#include "anchorplan/rng.hpp"
#include "anchorplan/scorer.hpp"
#include "anchorplan/se3.hpp"
#include "anchorplan/world_model.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace anchorplan {

struct Action {
    std::vector<double> delta;   // joint-angle increments (radians)

    double norm() const;
    bool operator==(const Action&) const = default;
};

struct TreeNode {
    std::optional<Action> action;   // none at the root
    JointConfig joints;
    Pose pose;                      // c2w predicted at this node
    double q_max = 0.0;             // max evaluated score in the visited subtree
    int visits = 0;
    int depth = 0;
    bool evaluated = false;         // this node's own pose has been scored
    std::vector<TreeNode> children;
};

struct PlanBudget {
    std::optional<int> max_nodes;            // node evaluations per plan() call
    std::optional<double> max_duration_ms;   // optional wall-clock cap

    void validate() const;   // at least one limit set
};

// Candidate joint-action source. Implementations must be deterministic given
// their own state so planning is reproducible under a fixed seed.
class ActionSource {
public:
    virtual ~ActionSource() = default;
    virtual std::vector<Action> sample(const JointConfig& q, const std::optional<Goal>& goal,
                                       const KinematicChain& chain, int branching) = 0;
};

struct SamplerConfig {
    double action_bound = 0.4;   // joint-space L2 ball radius (radians)
    bool goal_directed = false;  // last candidate becomes a damped Gauss-Newton step to the goal
    int retry_cap = 64;          // consecutive out-of-limit rejections before giving up
    double fd_step = 1e-5;       // finite-difference step for the Jacobian
    bool include_zero = true;    // candidate 0 is the stay-still action
};

// Candidate set: the zero action first, then uniform draws in a joint-space
// ball (rejection-sampled against the chain limits), and, when a goal is
// available and goal_directed is on, one damped Gauss-Newton step toward it.
class BallActionSampler : public ActionSource {
public:
    BallActionSampler(SamplerConfig config, std::uint64_t seed);

    std::vector<Action> sample(const JointConfig& q, const std::optional<Goal>& goal,
                               const KinematicChain& chain, int branching) override;

    const SamplerConfig& config() const { return config_; }

private:
    Action sample_uniform(const JointConfig& q, const KinematicChain& chain, bool fine);
    std::optional<Action> goal_directed(const JointConfig& q, const Goal& goal,
                                        const KinematicChain& chain) const;

    SamplerConfig config_;
    Rng rng_;
};

// UCB1 selection priority. Unvisited children rank above any visited sibling
// (+infinity). Throws std::invalid_argument when parent_visits == 0 or c < 0.
double ucb1(const TreeNode& child, int parent_visits, double exploration);

// Creates branching children on a childless node: sampled action, pose from
// FK(parent joints + delta), depth = parent + 1. Returns the children.
std::vector<TreeNode>& expand(TreeNode& node, ActionSource& sampler, const KinematicChain& chain,
                              int branching, const std::optional<Goal>& goal);

// Renders the node's pose and scores the frame against the goal.
Score evaluate(const TreeNode& node, const WorldModel& oracle, const NodeScorer& scorer,
               const Goal& goal);

// visits += 1 and q_max = max(q_max, leaf_score) along a contiguous
// root-to-leaf path. Throws std::invalid_argument on an empty or
// discontiguous path.
void backpropagate_max(std::span<TreeNode* const> path, Score leaf_score);

// Max-Q child selection with zero-magnitude actions filtered out; ties go to
// the lower child index. Throws std::runtime_error when every child action is
// within zero_epsilon of zero (degenerate sampling).
Action best_action(const TreeNode& root, double zero_epsilon);

// Promotes the child whose action matches `executed` to root: depth 0, every
// descendant depth recomputed, all values/poses/subtrees preserved. Throws
// std::invalid_argument when no child matches.
TreeNode advance_root(TreeNode&& root, const Action& executed);

struct PlanParams {
    int depth_limit = 2;        // D
    int branching = 4;          // B
    double exploration = 0.02;  // c
    double zero_epsilon = 1e-6; // radians
    PlanBudget budget{20, std::nullopt};
};

struct PlanStats {
    int evaluations = 0;           // budgeted search evaluations
    int refresh_evaluations = 0;   // re-scores of stored poses after a goal switch
    int expansions = 0;
};

// Owns the persistent tree across physical actions and steps. Also archives
// the root pose at step completions so stored anchors stay retrievable after
// any number of re-rootings.
class SearchTree {
public:
    SearchTree(JointConfig q0, const KinematicChain& chain);

    TreeNode& root() { return root_; }
    const TreeNode& root() const { return root_; }

    void advance(const Action& executed);

    void mark_step(int step);
    const std::map<int, Pose>& step_anchors() const { return step_anchors_; }

    // plan() re-scores stored poses when the goal moves; tracked here.
    const std::optional<Goal>& scored_goal() const { return scored_goal_; }

    friend Action plan(SearchTree& tree, const Goal& goal, const WorldModel& oracle,
                       const NodeScorer& scorer, const KinematicChain& chain,
                       ActionSource& sampler, const PlanParams& params, PlanStats* stats);

private:
    TreeNode root_;
    std::map<int, Pose> step_anchors_;
    std::optional<Goal> scored_goal_;
};

// One receding-horizon planning call: repeated {select / expand / evaluate
// one node / max-backpropagate} until the budget is exhausted, then Max-Q
// action selection. Deterministic given the sampler state.
Action plan(SearchTree& tree, const Goal& goal, const WorldModel& oracle,
            const NodeScorer& scorer, const KinematicChain& chain, ActionSource& sampler,
            const PlanParams& params, PlanStats* stats = nullptr);

// Structured text dump: node id, parent id, depth, visits, q_max, translation.
void dump_tree(const TreeNode& root, std::ostream& out);

// Traversal checks used by verification suites.
bool depths_consistent(const TreeNode& root);
int max_depth(const TreeNode& root);

} // namespace anchorplan
