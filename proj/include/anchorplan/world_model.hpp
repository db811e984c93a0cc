#pragma once

#include "anchorplan/se3.hpp"

#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace anchorplan {

struct GeometricFrame {
    Vec3 ee_position;
    // (target id, world position), in scene order, occluded targets removed
    std::vector<std::pair<std::string, Vec3>> visible_targets;

    bool operator==(const GeometricFrame&) const = default;
};

struct PixelFrame {
    int width = 0;
    int height = 0;
    std::vector<double> intensities;   // row-major, values in [0, 1]

    double at(int x, int y) const { return intensities[static_cast<std::size_t>(y * width + x)]; }
    bool operator==(const PixelFrame&) const = default;
};

using Frame = std::variant<GeometricFrame, PixelFrame>;

bool frames_equal(const Frame& a, const Frame& b);

struct ReferenceLatent {
    std::vector<double> values;

    bool operator==(const ReferenceLatent&) const = default;
};

// z_new = alpha * encoded + (1 - alpha) * z_ref, elementwise.
ReferenceLatent blend(const ReferenceLatent& z_ref, const ReferenceLatent& encoded, double alpha);

struct SceneTarget {
    std::string id;
    Vec3 position;
    double radius = 0.05;   // meters
};

struct CameraIntrinsics {
    double focal_px = 64.0;
    double cx = 32.0;
    double cy = 32.0;
};

struct Scene {
    std::vector<SceneTarget> targets;
    CameraIntrinsics intrinsics;

    const SceneTarget* find(std::string_view id) const;
    void validate() const;   // radii > 0, distinct ids
};

// A target is visible iff it is not hidden by the caller's script, its
// camera-frame depth lies in [near, far], and (when the frustum test is on)
// its center projects inside the pixel grid. The geometric oracle defaults to
// an open frustum so scripted occlusion is the only gate in benchmark runs.
struct OcclusionPolicy {
    bool frustum_test = false;
    double near_depth = 1e-6;
    double far_depth = std::numeric_limits<double>::infinity();
    int frustum_width = 64;
    int frustum_height = 64;
};

// Rollout oracle: render a predicted observation for any queried c2w pose.
// Immutable after construction except for the reference latent and alpha
// (single writer, any number of concurrent render/encode readers).
class WorldModel {
public:
    virtual ~WorldModel() = default;

    virtual Frame render(const Pose& c2w) const = 0;
    virtual Frame render_masked(const Pose& c2w, std::span<const std::string> hidden) const = 0;
    virtual ReferenceLatent encode(const Frame& frame) const = 0;
    virtual std::string_view name() const = 0;

    double alpha() const { return alpha_; }
    void set_alpha(double alpha);   // throws std::out_of_range outside [0, 1]

    const ReferenceLatent& reference_latent() const { return z_ref_; }
    void set_reference_latent(ReferenceLatent z) { z_ref_ = std::move(z); }

    // z_ref <- alpha * encoded_real + (1 - alpha) * z_ref
    ReferenceLatent blend_reference(const ReferenceLatent& z_ref, const ReferenceLatent& encoded_real) const {
        return blend(z_ref, encoded_real, alpha_);
    }

    // Blends the encoding of an observed real frame into the stored latent.
    void update_reference(const Frame& real_frame);

private:
    double alpha_ = 0.7;
    ReferenceLatent z_ref_;
};

// Ground-truth positions, no pixel work; render cost is O(#targets).
class GeometricOracle : public WorldModel {
public:
    GeometricOracle(Scene scene, OcclusionPolicy policy = {},
                    double absent_sentinel = 1.0e6);

    Frame render(const Pose& c2w) const override;
    Frame render_masked(const Pose& c2w, std::span<const std::string> hidden) const override;
    ReferenceLatent encode(const Frame& frame) const override;
    std::string_view name() const override { return "geometric"; }

    const Scene& scene() const { return scene_; }
    double absent_sentinel() const { return sentinel_; }

private:
    Scene scene_;
    OcclusionPolicy policy_;
    double sentinel_;
};

// Pinhole projection of the scene; each target is a filled disc, drawn
// far-to-near so closer targets overwrite.
class PixelOracle : public WorldModel {
public:
    PixelOracle(Scene scene, int width = 64, int height = 64,
                double background = 0.0, double target_intensity = 1.0,
                int downsample = 8);

    Frame render(const Pose& c2w) const override;
    Frame render_masked(const Pose& c2w, std::span<const std::string> hidden) const override;
    ReferenceLatent encode(const Frame& frame) const override;
    std::string_view name() const override { return "pixel"; }

    const Scene& scene() const { return scene_; }
    double background() const { return background_; }
    int latent_dim() const { return downsample_ * downsample_; }

private:
    Scene scene_;
    int width_;
    int height_;
    double background_;
    double target_intensity_;
    int downsample_;
};

// ASCII PGM (P2) export of a pixel frame, for debugging.
void write_pgm(const PixelFrame& frame, std::ostream& out);

} // namespace anchorplan
