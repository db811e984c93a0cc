#include "anchorplan/mcts.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace anchorplan {

double Action::norm() const {
    double s = 0.0;
    for (double d : delta) s += d * d;
    return std::sqrt(s);
}

void PlanBudget::validate() const {
    if (!max_nodes.has_value() && !max_duration_ms.has_value())
        throw std::invalid_argument("PlanBudget: at least one limit must be set");
    if (max_nodes.has_value() && *max_nodes < 1)
        throw std::invalid_argument("PlanBudget: max_nodes must be positive");
    if (max_duration_ms.has_value() && *max_duration_ms <= 0.0)
        throw std::invalid_argument("PlanBudget: max_duration_ms must be positive");
}

BallActionSampler::BallActionSampler(SamplerConfig config, std::uint64_t seed)
    : config_(config), rng_(seed) {
    if (config_.action_bound <= 0.0)
        throw std::invalid_argument("BallActionSampler: action_bound must be > 0");
    if (config_.retry_cap < 1)
        throw std::invalid_argument("BallActionSampler: retry_cap must be >= 1");
}

Action BallActionSampler::sample_uniform(const JointConfig& q, const KinematicChain& chain,
                                         bool fine) {
    const std::size_t n = q.size();
    int rejections = 0;
    while (true) {
        // Uniform direction. Coarse draws take a uniform magnitude in
        // (0, a_max] for transit-scale motion; fine draws taper the
        // magnitude (a_max * u^3) to supply the small corrective steps a
        // uniform-in-volume ball almost never proposes.
        Action a;
        a.delta.resize(n);
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            a.delta[i] = rng_.uniform(-1.0, 1.0);
            norm2 += a.delta[i] * a.delta[i];
        }
        if (norm2 > 1.0 || norm2 < 1e-12) continue;   // keep direction unbiased
        const double u = rng_.next_double();
        const double radius = config_.action_bound * (fine ? u * u * u : u);
        const double scale = radius / std::sqrt(norm2);
        JointConfig next = q;
        for (std::size_t i = 0; i < n; ++i) {
            a.delta[i] *= scale;
            next[i] += a.delta[i];
        }
        if (within_limits(next, chain)) return a;
        if (++rejections >= config_.retry_cap)
            throw std::runtime_error("BallActionSampler: retry cap hit, sampling near joint limits degenerate");
    }
}

std::optional<Action> BallActionSampler::goal_directed(const JointConfig& q, const Goal& goal,
                                                       const KinematicChain& chain) const {
    const std::size_t n = q.size();
    const Vec3 ee = forward_kinematics(q, chain).translation;
    const double d0 = (ee - goal.position).norm();
    const Vec3 residual = goal.position - ee;

    // Finite-difference Jacobian of the end-effector position.
    std::vector<std::array<double, 3>> jac(n);
    for (std::size_t i = 0; i < n; ++i) {
        JointConfig qp = q, qm = q;
        qp[i] = std::min(qp[i] + config_.fd_step, chain.links[i].limit_hi);
        qm[i] = std::max(qm[i] - config_.fd_step, chain.links[i].limit_lo);
        const double span = qp[i] - qm[i];
        if (span <= 0.0) return std::nullopt;
        const Vec3 pp = forward_kinematics(qp, chain).translation;
        const Vec3 pm = forward_kinematics(qm, chain).translation;
        jac[i] = {(pp.x - pm.x) / span, (pp.y - pm.y) / span, (pp.z - pm.z) / span};
    }

    // Damped least-squares step: (J^T J + lambda I) delta = J^T residual.
    std::vector<std::vector<double>> lhs(n, std::vector<double>(n, 0.0));
    std::vector<double> rhs(n, 0.0);
    const double lambda = 1e-4;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += jac[i][static_cast<std::size_t>(k)] *
                                              jac[j][static_cast<std::size_t>(k)];
            lhs[i][j] = s + (i == j ? lambda : 0.0);
        }
        rhs[i] = jac[i][0] * residual.x + jac[i][1] * residual.y + jac[i][2] * residual.z;
    }
    // Gaussian elimination with partial pivoting; n is the chain DOF (tiny).
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(lhs[row][col]) > std::abs(lhs[pivot][col])) pivot = row;
        if (std::abs(lhs[pivot][col]) < 1e-12) return std::nullopt;
        std::swap(lhs[col], lhs[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = lhs[row][col] / lhs[col][col];
            for (std::size_t k = col; k < n; ++k) lhs[row][k] -= f * lhs[col][k];
            rhs[row] -= f * rhs[col];
        }
    }
    std::vector<double> delta(n, 0.0);
    for (std::size_t row = n; row-- > 0;) {
        double s = rhs[row];
        for (std::size_t k = row + 1; k < n; ++k) s -= lhs[row][k] * delta[k];
        delta[row] = s / lhs[row][row];
    }

    double delta_norm = 0.0;
    for (double v : delta) delta_norm += v * v;
    delta_norm = std::sqrt(delta_norm);
    if (delta_norm < 1e-12) return std::nullopt;
    double scale = delta_norm > config_.action_bound ? config_.action_bound / delta_norm : 1.0;

    // Backtrack until the step respects limits and actually shrinks distance.
    for (int halvings = 0; halvings < 12; ++halvings) {
        Action a;
        a.delta.resize(n);
        JointConfig next = q;
        for (std::size_t i = 0; i < n; ++i) {
            a.delta[i] = delta[i] * scale;
            next[i] += a.delta[i];
        }
        if (within_limits(next, chain)) {
            const double d1 = (forward_kinematics(next, chain).translation - goal.position).norm();
            if (d1 < d0) return a;
        }
        scale *= 0.5;
    }
    return std::nullopt;
}

std::vector<Action> BallActionSampler::sample(const JointConfig& q, const std::optional<Goal>& goal,
                                              const KinematicChain& chain, int branching) {
    if (branching < 1) throw std::invalid_argument("BallActionSampler: branching must be >= 1");
    std::vector<Action> out;
    out.reserve(static_cast<std::size_t>(branching));
    // The stay-still action is always on offer at index 0. A reactive argmin
    // agent rests on it once converged (and under zero-information ties);
    // Max-Q selection filters it out, which is the zero-action trap the
    // planner's action filter exists for.
    if (config_.include_zero) out.push_back(Action{std::vector<double>(q.size(), 0.0)});
    std::optional<Action> directed;
    if (config_.goal_directed && goal.has_value()) directed = goal_directed(q, *goal, chain);
    const int uniform_count = branching - static_cast<int>(out.size()) -
                              (directed.has_value() ? 1 : 0);
    for (int i = 0; i < uniform_count; ++i)
        out.push_back(sample_uniform(q, chain, /*fine=*/i % 2 == 1));
    if (directed.has_value()) out.push_back(*directed);
    return out;
}

double ucb1(const TreeNode& child, int parent_visits, double exploration) {
    if (parent_visits <= 0) throw std::invalid_argument("ucb1: parent_visits must be positive");
    if (exploration < 0.0) throw std::invalid_argument("ucb1: exploration constant must be >= 0");
    if (child.visits == 0) return std::numeric_limits<double>::infinity();
    return child.q_max + exploration * std::sqrt(std::log(static_cast<double>(parent_visits)) /
                                                 static_cast<double>(child.visits));
}

std::vector<TreeNode>& expand(TreeNode& node, ActionSource& sampler, const KinematicChain& chain,
                              int branching, const std::optional<Goal>& goal) {
    if (!node.children.empty()) throw std::invalid_argument("expand: node already has children");
    std::vector<Action> actions = sampler.sample(node.joints, goal, chain, branching);
    node.children.reserve(actions.size());
    for (Action& action : actions) {
        TreeNode child;
        child.joints = node.joints;
        for (std::size_t i = 0; i < action.delta.size(); ++i) child.joints[i] += action.delta[i];
        child.pose = forward_kinematics(child.joints, chain);
        child.depth = node.depth + 1;
        child.action = std::move(action);
        node.children.push_back(std::move(child));
    }
    return node.children;
}

Score evaluate(const TreeNode& node, const WorldModel& oracle, const NodeScorer& scorer,
               const Goal& goal) {
    return scorer.score(oracle.render(node.pose), node.pose, goal);
}

void backpropagate_max(std::span<TreeNode* const> path, Score leaf_score) {
    if (path.empty()) throw std::invalid_argument("backpropagate_max: empty path");
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const TreeNode* parent = path[i];
        const TreeNode* next = path[i + 1];
        const bool is_child = std::any_of(parent->children.begin(), parent->children.end(),
                                          [&](const TreeNode& c) { return &c == next; });
        if (!is_child) throw std::invalid_argument("backpropagate_max: discontiguous path");
    }
    for (TreeNode* node : path) {
        node->visits += 1;
        node->q_max = std::max(node->q_max, leaf_score.value);
    }
}

Action best_action(const TreeNode& root, double zero_epsilon) {
    const TreeNode* best = nullptr;
    for (const TreeNode& child : root.children) {
        if (!child.action.has_value() || child.action->norm() <= zero_epsilon) continue;
        if (best == nullptr || child.q_max > best->q_max) best = &child;
    }
    if (best == nullptr)
        throw std::runtime_error("best_action: every child action is zero-magnitude (degenerate sampling)");
    return *best->action;
}

namespace {

void reset_depths(TreeNode& node, int depth) {
    node.depth = depth;
    for (TreeNode& child : node.children) reset_depths(child, depth + 1);
}

} // namespace

TreeNode advance_root(TreeNode&& root, const Action& executed) {
    auto it = std::find_if(root.children.begin(), root.children.end(),
                           [&](const TreeNode& c) { return c.action == executed; });
    if (it == root.children.end())
        throw std::invalid_argument("advance_root: no child matches the executed action");
    TreeNode next = std::move(*it);
    reset_depths(next, 0);
    return next;
}

SearchTree::SearchTree(JointConfig q0, const KinematicChain& chain) {
    root_.joints = std::move(q0);
    root_.pose = forward_kinematics(root_.joints, chain);
}

void SearchTree::advance(const Action& executed) {
    root_ = advance_root(std::move(root_), executed);
}

void SearchTree::mark_step(int step) {
    if (step_anchors_.contains(step))
        throw std::invalid_argument("SearchTree::mark_step: step already recorded");
    step_anchors_.emplace(step, root_.pose);
}

namespace {

bool same_goal(const std::optional<Goal>& a, const Goal& b) {
    return a.has_value() && a->position == b.position && a->target_id == b.target_id;
}

// Re-scores every previously evaluated pose against the new goal and rebuilds
// q_max bottom-up. Stored poses are kinematic predictions; rendering them
// against the new goal is what lets the tree's memory be re-used.
double refresh_scores(TreeNode& node, const Goal& goal, const WorldModel& oracle,
                      const NodeScorer& scorer, PlanStats& stats) {
    double best = -1.0;
    if (node.evaluated) {
        best = evaluate(node, oracle, scorer, goal).value;
        stats.refresh_evaluations += 1;
    }
    for (TreeNode& child : node.children) {
        const double sub = refresh_scores(child, goal, oracle, scorer, stats);
        best = std::max(best, sub);
    }
    node.q_max = best < 0.0 ? 0.0 : best;
    return node.q_max;
}

} // namespace

Action plan(SearchTree& tree, const Goal& goal, const WorldModel& oracle,
            const NodeScorer& scorer, const KinematicChain& chain, ActionSource& sampler,
            const PlanParams& params, PlanStats* stats) {
    params.budget.validate();
    if (params.depth_limit < 1) throw std::invalid_argument("plan: depth_limit must be >= 1");
    if (params.branching < 1) throw std::invalid_argument("plan: branching must be >= 1");

    PlanStats local;
    PlanStats& st = stats != nullptr ? *stats : local;
    st = PlanStats{};

    if (!same_goal(tree.scored_goal_, goal)) {
        if (tree.root_.evaluated || !tree.root_.children.empty())
            refresh_scores(tree.root_, goal, oracle, scorer, st);
        tree.scored_goal_ = goal;
    }

    const auto start = std::chrono::steady_clock::now();
    const auto budget_left = [&]() {
        if (params.budget.max_nodes.has_value() && st.evaluations >= *params.budget.max_nodes)
            return false;
        if (params.budget.max_duration_ms.has_value()) {
            const double elapsed =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
            if (elapsed >= *params.budget.max_duration_ms) return false;
        }
        return true;
    };

    while (budget_left()) {
        std::vector<TreeNode*> path;
        TreeNode* node = &tree.root_;
        path.push_back(node);
        while (!node->children.empty()) {
            TreeNode* chosen = nullptr;
            double chosen_value = -std::numeric_limits<double>::infinity();
            for (TreeNode& child : node->children) {
                const double value = ucb1(child, std::max(node->visits, 1), params.exploration);
                if (value > chosen_value) {   // strict: ties resolve to the lowest index
                    chosen = &child;
                    chosen_value = value;
                }
            }
            node = chosen;
            path.push_back(node);
        }

        // Childless endpoint: the root expands immediately; an already
        // evaluated node below the depth limit expands; everything else is
        // evaluated in place (first visit or depth-limit re-evaluation).
        const bool expandable =
            node->depth < params.depth_limit && (node == &tree.root_ || node->visits > 0);
        if (expandable) {
            expand(*node, sampler, chain, params.branching, goal);
            st.expansions += 1;
            node = &node->children.front();
            path.push_back(node);
        }

        const Score score = evaluate(*node, oracle, scorer, goal);
        node->evaluated = true;
        st.evaluations += 1;
        backpropagate_max(path, score);
    }

    return best_action(tree.root_, params.zero_epsilon);
}

namespace {

int dump_node(const TreeNode& node, int parent_id, int& next_id, std::ostream& out) {
    const int id = next_id++;
    char line[160];
    std::snprintf(line, sizeof(line), "%d %d %d %d %.6f %.6f %.6f %.6f\n", id, parent_id,
                  node.depth, node.visits, node.q_max, node.pose.translation.x,
                  node.pose.translation.y, node.pose.translation.z);
    out << line;
    for (const TreeNode& child : node.children) dump_node(child, id, next_id, out);
    return id;
}

} // namespace

void dump_tree(const TreeNode& root, std::ostream& out) {
    out << "# id parent_id depth visits q_max tx ty tz\n";
    int next_id = 0;
    dump_node(root, -1, next_id, out);
}

namespace {

bool depths_consistent_rec(const TreeNode& node, int expected) {
    if (node.depth != expected) return false;
    for (const TreeNode& child : node.children)
        if (!depths_consistent_rec(child, expected + 1)) return false;
    return true;
}

} // namespace

bool depths_consistent(const TreeNode& root) { return depths_consistent_rec(root, 0); }

int max_depth(const TreeNode& root) {
    int best = root.depth;
    for (const TreeNode& child : root.children) best = std::max(best, max_depth(child));
    return best;
}

} // namespace anchorplan
