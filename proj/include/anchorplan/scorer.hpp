#pragma once

#include "anchorplan/se3.hpp"
#include "anchorplan/world_model.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace anchorplan {

struct Score {
    double value = 0.0;   // invariant: in [0, 1]
};

struct Goal {
    Vec3 position;
    std::string target_id;
};

// max(0, 1 - d3D) with d3D in meters.
Score exact_distance_score(const Pose& c2w, const Goal& goal);

// semantic * max(0, 1 - d3D): the multiplicative depth penalty never raises
// a score above either factor.
Score hybrid_score(Score semantic, const Pose& c2w, const Goal& goal);

class SemanticScorer {
public:
    virtual ~SemanticScorer() = default;
    // Throws std::invalid_argument on an unsupported frame variant.
    virtual Score score(const Frame& frame, const Goal& goal) const = 0;
    virtual std::string_view name() const = 0;
};

// Overlap of the end-effector disc and the goal target disc in top-down (x, y)
// projection, normalized by the goal disc area. Deliberately depth-blind: an
// end effector hovering straight above the target scores full overlap.
// Supports geometric frames; the goal disc comes from the frame's visible
// targets, so an occluded goal scores 0.
class DiscOverlapScorer : public SemanticScorer {
public:
    DiscOverlapScorer(Scene scene, double ee_radius = 0.05);

    Score score(const Frame& frame, const Goal& goal) const override;
    std::string_view name() const override { return "overlap"; }

private:
    Scene scene_;
    double ee_radius_;
};

// Constant 0 for every frame: the degenerate semantic regime where the
// reward landscape is completely flat.
class FlatSemanticScorer : public SemanticScorer {
public:
    Score score(const Frame&, const Goal&) const override { return Score{0.0}; }
    std::string_view name() const override { return "flat"; }
};

// Node-level scoring consumed by the search engine: frame plus predicted pose.
class NodeScorer {
public:
    virtual ~NodeScorer() = default;
    virtual Score score(const Frame& frame, const Pose& c2w, const Goal& goal) const = 0;
    virtual std::string_view name() const = 0;
};

class ExactNodeScorer : public NodeScorer {
public:
    Score score(const Frame&, const Pose& c2w, const Goal& goal) const override {
        return exact_distance_score(c2w, goal);
    }
    std::string_view name() const override { return "exact"; }
};

class HybridNodeScorer : public NodeScorer {
public:
    HybridNodeScorer(std::shared_ptr<const SemanticScorer> semantic, std::string name);

    Score score(const Frame& frame, const Pose& c2w, const Goal& goal) const override {
        return hybrid_score(semantic_->score(frame, goal), c2w, goal);
    }
    std::string_view name() const override { return name_; }

private:
    std::shared_ptr<const SemanticScorer> semantic_;
    std::string name_;
};

class FlatNodeScorer : public NodeScorer {
public:
    Score score(const Frame&, const Pose&, const Goal&) const override { return Score{0.0}; }
    std::string_view name() const override { return "flat"; }
};

// Names accepted by the harness config: exact, hybrid+overlap, hybrid+flat, flat.
std::unique_ptr<NodeScorer> make_scorer(std::string_view name, const Scene& scene,
                                        double ee_disc_radius = 0.05);

struct MonotonicityResult {
    double value = 0.0;      // Spearman rank correlation of score vs -distance
    bool degenerate = false; // all scores tied; value is 0 by convention
};

// Rank correlation between the scorer's output and negated goal distance over
// the samples. Requires >= 10 samples with distinct distances (throws
// std::invalid_argument otherwise). A perfectly distance-monotone scorer
// yields exactly 1.0.
MonotonicityResult monotonicity(const NodeScorer& scorer, const WorldModel& oracle,
                                std::span<const Pose> pose_samples, const Goal& goal);

} // namespace anchorplan
