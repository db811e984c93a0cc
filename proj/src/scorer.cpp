#include "anchorplan/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace anchorplan {

Score exact_distance_score(const Pose& c2w, const Goal& goal) {
    const double d = (c2w.translation - goal.position).norm();
    return Score{std::max(0.0, 1.0 - d)};
}

Score hybrid_score(Score semantic, const Pose& c2w, const Goal& goal) {
    const double d = (c2w.translation - goal.position).norm();
    return Score{semantic.value * std::max(0.0, 1.0 - d)};
}

DiscOverlapScorer::DiscOverlapScorer(Scene scene, double ee_radius)
    : scene_(std::move(scene)), ee_radius_(ee_radius) {
    if (ee_radius_ <= 0.0) throw std::invalid_argument("DiscOverlapScorer: ee_radius must be > 0");
}

namespace {

// Intersection area of two discs with center distance d.
double disc_intersection_area(double r1, double r2, double d) {
    if (d >= r1 + r2) return 0.0;
    const double rmin = std::min(r1, r2);
    if (d <= std::abs(r1 - r2)) return kPi * rmin * rmin;
    const double a1 = r1 * r1 * std::acos((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1));
    const double a2 = r2 * r2 * std::acos((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2));
    const double k = 0.5 * std::sqrt(std::max(0.0, (-d + r1 + r2) * (d + r1 - r2) *
                                                    (d - r1 + r2) * (d + r1 + r2)));
    return a1 + a2 - k;
}

} // namespace

Score DiscOverlapScorer::score(const Frame& frame, const Goal& goal) const {
    const auto* geo = std::get_if<GeometricFrame>(&frame);
    if (geo == nullptr)
        throw std::invalid_argument("DiscOverlapScorer: unsupported frame variant");
    const SceneTarget* target = scene_.find(goal.target_id);
    if (target == nullptr) return Score{0.0};
    const Vec3* seen = nullptr;
    for (const auto& [id, pos] : geo->visible_targets)
        if (id == goal.target_id) { seen = &pos; break; }
    if (seen == nullptr) return Score{0.0};   // goal not in view: nothing to overlap

    const double dx = geo->ee_position.x - seen->x;
    const double dy = geo->ee_position.y - seen->y;
    const double d = std::sqrt(dx * dx + dy * dy);
    const double area = disc_intersection_area(ee_radius_, target->radius, d);
    const double goal_area = kPi * target->radius * target->radius;
    return Score{std::clamp(area / goal_area, 0.0, 1.0)};
}

HybridNodeScorer::HybridNodeScorer(std::shared_ptr<const SemanticScorer> semantic, std::string name)
    : semantic_(std::move(semantic)), name_(std::move(name)) {
    if (!semantic_) throw std::invalid_argument("HybridNodeScorer: null semantic scorer");
}

std::unique_ptr<NodeScorer> make_scorer(std::string_view name, const Scene& scene,
                                        double ee_disc_radius) {
    if (name == "exact") return std::make_unique<ExactNodeScorer>();
    if (name == "flat") return std::make_unique<FlatNodeScorer>();
    if (name == "hybrid+overlap")
        return std::make_unique<HybridNodeScorer>(
            std::make_shared<DiscOverlapScorer>(scene, ee_disc_radius), "hybrid+overlap");
    if (name == "hybrid+flat")
        return std::make_unique<HybridNodeScorer>(std::make_shared<FlatSemanticScorer>(),
                                                  "hybrid+flat");
    throw std::invalid_argument("make_scorer: unknown scorer '" + std::string(name) + "'");
}

namespace {

// Average ranks (1-based); ties share the mean rank. For n around 100 the
// arithmetic below stays exact in doubles, so identical rankings correlate
// to exactly 1.0.
std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double shared = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) { ma += a[i]; mb += b[i]; }
    ma /= n;
    mb /= n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va == 0.0 || vb == 0.0) return 0.0;
    // va * vb is exact for rank vectors of this size, so equal rankings
    // divide to exactly 1.
    return cov / std::sqrt(va * vb);
}

} // namespace

MonotonicityResult monotonicity(const NodeScorer& scorer, const WorldModel& oracle,
                                std::span<const Pose> pose_samples, const Goal& goal) {
    if (pose_samples.size() < 10)
        throw std::invalid_argument("monotonicity: need at least 10 pose samples");

    std::vector<double> distances;
    std::vector<double> scores;
    distances.reserve(pose_samples.size());
    scores.reserve(pose_samples.size());
    for (const Pose& pose : pose_samples) {
        distances.push_back((pose.translation - goal.position).norm());
        scores.push_back(scorer.score(oracle.render(pose), pose, goal).value);
    }
    const bool distances_degenerate =
        std::all_of(distances.begin(), distances.end(),
                    [&](double d) { return d == distances.front(); });
    if (distances_degenerate)
        throw std::invalid_argument("monotonicity: all sample distances equal");

    const bool scores_degenerate =
        std::all_of(scores.begin(), scores.end(), [&](double s) { return s == scores.front(); });
    if (scores_degenerate) return MonotonicityResult{0.0, true};

    std::vector<double> neg_distance(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i) neg_distance[i] = -distances[i];

    const std::vector<double> score_ranks = average_ranks(scores);
    const std::vector<double> dist_ranks = average_ranks(neg_distance);
    return MonotonicityResult{pearson(score_ranks, dist_ranks), false};
}

} // namespace anchorplan
