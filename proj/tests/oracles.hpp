#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they check.

#include "anchorplan/mcts.hpp"
#include "anchorplan/rng.hpp"
#include "anchorplan/se3.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace testing_oracles {

using namespace anchorplan;

// --- quaternion route for rotation angles -------------------------------

struct Quat {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;
};

inline Quat quat_from_matrix(const Mat3& m) {
    Quat q;
    const double tr = m.trace();
    if (tr > 0.0) {
        const double s = std::sqrt(tr + 1.0) * 2.0;
        q.w = 0.25 * s;
        q.x = (m.at(2, 1) - m.at(1, 2)) / s;
        q.y = (m.at(0, 2) - m.at(2, 0)) / s;
        q.z = (m.at(1, 0) - m.at(0, 1)) / s;
    } else if (m.at(0, 0) > m.at(1, 1) && m.at(0, 0) > m.at(2, 2)) {
        const double s = std::sqrt(1.0 + m.at(0, 0) - m.at(1, 1) - m.at(2, 2)) * 2.0;
        q.w = (m.at(2, 1) - m.at(1, 2)) / s;
        q.x = 0.25 * s;
        q.y = (m.at(0, 1) + m.at(1, 0)) / s;
        q.z = (m.at(0, 2) + m.at(2, 0)) / s;
    } else if (m.at(1, 1) > m.at(2, 2)) {
        const double s = std::sqrt(1.0 + m.at(1, 1) - m.at(0, 0) - m.at(2, 2)) * 2.0;
        q.w = (m.at(0, 2) - m.at(2, 0)) / s;
        q.x = (m.at(0, 1) + m.at(1, 0)) / s;
        q.y = 0.25 * s;
        q.z = (m.at(1, 2) + m.at(2, 1)) / s;
    } else {
        const double s = std::sqrt(1.0 + m.at(2, 2) - m.at(0, 0) - m.at(1, 1)) * 2.0;
        q.w = (m.at(1, 0) - m.at(0, 1)) / s;
        q.x = (m.at(0, 2) + m.at(2, 0)) / s;
        q.y = (m.at(1, 2) + m.at(2, 1)) / s;
        q.z = 0.25 * s;
    }
    return q;
}

// Geodesic angle via the quaternion dot product.
inline double quat_angle(const Mat3& a, const Mat3& b) {
    const Quat qa = quat_from_matrix(a);
    const Quat qb = quat_from_matrix(b);
    double dot = std::abs(qa.w * qb.w + qa.x * qb.x + qa.y * qb.y + qa.z * qb.z);
    if (dot > 1.0) dot = 1.0;
    return 2.0 * std::acos(dot);
}

inline Mat3 random_rotation(Rng& rng) {
    Vec3 axis;
    do {
        axis = Vec3{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    } while (axis.norm() < 1e-3 || axis.norm() > 1.0);
    axis = axis * (1.0 / axis.norm());
    return axis_angle(axis, rng.uniform(-kPi, kPi));
}

// --- random-tree harness for the max-backprop check ---------------------

// Builds a random tree shape, replays random root-to-node backpropagations
// through the library, and recomputes every node's expected q_max as the
// max leaf score over the paths that passed through it.
struct RandomTreeTrial {
    struct Shadow {
        double expected_q = 0.0;
        int expected_visits = 0;
    };
    TreeNode root;
    std::vector<TreeNode*> nodes;        // preorder
    std::vector<Shadow> shadows;         // parallel to nodes

    static void collect(TreeNode& n, std::vector<TreeNode*>& out) {
        out.push_back(&n);
        for (TreeNode& c : n.children) collect(c, out);
    }

    static RandomTreeTrial build(Rng& rng, int max_depth, int max_branching) {
        RandomTreeTrial t;
        t.root.joints = {0.0};
        struct Item {
            TreeNode* node;
            int depth;
        };
        std::vector<Item> frontier{{&t.root, 0}};
        while (!frontier.empty()) {
            Item item = frontier.back();
            frontier.pop_back();
            if (item.depth >= max_depth) continue;
            const int kids = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_branching + 1));
            for (int k = 0; k < kids; ++k) {
                TreeNode child;
                child.action = Action{{0.1 * (k + 1)}};
                child.depth = item.depth + 1;
                item.node->children.push_back(std::move(child));
            }
            for (TreeNode& c : item.node->children) frontier.push_back({&c, item.depth + 1});
        }
        collect(t.root, t.nodes);
        t.shadows.resize(t.nodes.size());
        return t;
    }

    std::size_t index_of(const TreeNode* n) const {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i] == n) return i;
        return nodes.size();
    }

    // Picks a random root-to-somewhere path.
    std::vector<TreeNode*> random_path(Rng& rng) {
        std::vector<TreeNode*> path{&root};
        TreeNode* cur = &root;
        while (!cur->children.empty() && (rng.next_u64() % 4) != 0) {
            cur = &cur->children[rng.next_u64() % cur->children.size()];
            path.push_back(cur);
        }
        return path;
    }

    void apply_expected(const std::vector<TreeNode*>& path, double score) {
        for (TreeNode* n : path) {
            Shadow& s = shadows[index_of(n)];
            s.expected_visits += 1;
            s.expected_q = std::max(s.expected_q, score);
        }
    }

    bool consistent() const {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i]->q_max != shadows[i].expected_q) return false;
            if (nodes[i]->visits != shadows[i].expected_visits) return false;
        }
        return true;
    }
};

// --- deterministic per-configuration action source ----------------------

// Returns the same candidate set for the same joint configuration, so an
// exhaustive enumerator can reproduce exactly the action space plan() saw.
class HashedActionSource : public ActionSource {
public:
    HashedActionSource(std::uint64_t salt, double bound) : salt_(salt), bound_(bound) {}

    std::vector<Action> sample(const JointConfig& q, const std::optional<Goal>&,
                               const KinematicChain&, int branching) override {
        std::uint64_t h = salt_;
        for (double v : q) {
            const auto quantized = static_cast<std::int64_t>(std::llround(v * 1e9));
            h = splitmix64(h ^ static_cast<std::uint64_t>(quantized));
        }
        Rng rng(h);
        std::vector<Action> out;
        for (int b = 0; b < branching; ++b) {
            Action a;
            a.delta.resize(q.size());
            for (double& d : a.delta) d = rng.uniform(-bound_, bound_);
            out.push_back(std::move(a));
        }
        return out;
    }

private:
    std::uint64_t salt_;
    double bound_;
};

// Brute-force value of every depth<=2 action sequence from q0; returns the
// first action of the best sequence (ties to the lower index).
inline Action enumerate_depth2_best(HashedActionSource& source, const JointConfig& q0,
                                    const KinematicChain& chain, const Goal& goal, int branching,
                                    double zero_epsilon) {
    const std::vector<Action> first = source.sample(q0, std::nullopt, chain, branching);
    double best_value = -1.0;
    std::size_t best_index = 0;
    bool found = false;
    for (std::size_t i = 0; i < first.size(); ++i) {
        if (first[i].norm() <= zero_epsilon) continue;
        JointConfig q1 = q0;
        for (std::size_t j = 0; j < q1.size(); ++j) q1[j] += first[i].delta[j];
        const Pose p1 = forward_kinematics(q1, chain);
        double value = exact_distance_score(p1, goal).value;
        for (const Action& second : source.sample(q1, std::nullopt, chain, branching)) {
            JointConfig q2 = q1;
            for (std::size_t j = 0; j < q2.size(); ++j) q2[j] += second.delta[j];
            value = std::max(value,
                             exact_distance_score(forward_kinematics(q2, chain), goal).value);
        }
        if (!found || value > best_value) {
            found = true;
            best_value = value;
            best_index = i;
        }
    }
    return first[best_index];
}

} // namespace testing_oracles
