#include "anchorplan/world_model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

namespace anchorplan {

bool frames_equal(const Frame& a, const Frame& b) {
    return a == b;
}

ReferenceLatent blend(const ReferenceLatent& z_ref, const ReferenceLatent& encoded, double alpha) {
    if (z_ref.values.size() != encoded.values.size())
        throw std::invalid_argument("blend: latent dimension mismatch");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::out_of_range("blend: alpha outside [0, 1]");
    ReferenceLatent out;
    out.values.resize(z_ref.values.size());
    for (std::size_t i = 0; i < z_ref.values.size(); ++i)
        out.values[i] = alpha * encoded.values[i] + (1.0 - alpha) * z_ref.values[i];
    return out;
}

const SceneTarget* Scene::find(std::string_view id) const {
    for (const auto& t : targets)
        if (t.id == id) return &t;
    return nullptr;
}

void Scene::validate() const {
    std::set<std::string> ids;
    for (const auto& t : targets) {
        if (t.radius <= 0.0) throw std::invalid_argument("scene: target '" + t.id + "' radius must be > 0");
        if (!ids.insert(t.id).second) throw std::invalid_argument("scene: duplicate target id '" + t.id + "'");
    }
    if (intrinsics.focal_px <= 0.0) throw std::invalid_argument("scene: focal length must be > 0");
}

void WorldModel::set_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::out_of_range("set_alpha: alpha outside [0, 1]");
    alpha_ = alpha;
}

void WorldModel::update_reference(const Frame& real_frame) {
    const ReferenceLatent encoded = encode(real_frame);
    if (z_ref_.values.empty()) z_ref_.values.assign(encoded.values.size(), 0.0);
    z_ref_ = blend(z_ref_, encoded, alpha_);
}

namespace {

bool contains(std::span<const std::string> hidden, const std::string& id) {
    return std::find(hidden.begin(), hidden.end(), id) != hidden.end();
}

struct CameraPoint {
    Vec3 p_cam;
    double depth;
};

CameraPoint to_camera(const Pose& c2w, const Vec3& world) {
    const Vec3 p = c2w.rotation.transposed() * (world - c2w.translation);
    return {p, p.z};
}

bool passes_occlusion(const Pose& c2w, const Vec3& position, const OcclusionPolicy& policy,
                      const CameraIntrinsics& intr) {
    const CameraPoint cp = to_camera(c2w, position);
    if (!policy.frustum_test) return true;
    if (cp.depth < policy.near_depth || cp.depth > policy.far_depth) return false;
    const double u = intr.focal_px * cp.p_cam.x / cp.depth + intr.cx;
    const double v = intr.focal_px * cp.p_cam.y / cp.depth + intr.cy;
    return u >= 0.0 && u < static_cast<double>(policy.frustum_width) &&
           v >= 0.0 && v < static_cast<double>(policy.frustum_height);
}

} // namespace

GeometricOracle::GeometricOracle(Scene scene, OcclusionPolicy policy, double absent_sentinel)
    : scene_(std::move(scene)), policy_(policy), sentinel_(absent_sentinel) {
    scene_.validate();
}

Frame GeometricOracle::render(const Pose& c2w) const {
    return render_masked(c2w, {});
}

Frame GeometricOracle::render_masked(const Pose& c2w, std::span<const std::string> hidden) const {
    GeometricFrame frame;
    frame.ee_position = c2w.translation;
    for (const auto& target : scene_.targets) {
        if (contains(hidden, target.id)) continue;
        if (!passes_occlusion(c2w, target.position, policy_, scene_.intrinsics)) continue;
        frame.visible_targets.emplace_back(target.id, target.position);
    }
    return frame;
}

ReferenceLatent GeometricOracle::encode(const Frame& frame) const {
    const auto* geo = std::get_if<GeometricFrame>(&frame);
    if (geo == nullptr)
        throw std::invalid_argument("GeometricOracle::encode: frame variant mismatch");
    ReferenceLatent latent;
    latent.values.reserve(3 + 3 * scene_.targets.size());
    latent.values.push_back(geo->ee_position.x);
    latent.values.push_back(geo->ee_position.y);
    latent.values.push_back(geo->ee_position.z);
    for (const auto& target : scene_.targets) {
        const Vec3* found = nullptr;
        for (const auto& [id, pos] : geo->visible_targets)
            if (id == target.id) { found = &pos; break; }
        if (found != nullptr) {
            latent.values.push_back(found->x);
            latent.values.push_back(found->y);
            latent.values.push_back(found->z);
        } else {
            latent.values.push_back(sentinel_);
            latent.values.push_back(sentinel_);
            latent.values.push_back(sentinel_);
        }
    }
    return latent;
}

PixelOracle::PixelOracle(Scene scene, int width, int height, double background,
                         double target_intensity, int downsample)
    : scene_(std::move(scene)), width_(width), height_(height),
      background_(background), target_intensity_(target_intensity), downsample_(downsample) {
    scene_.validate();
    if (width_ <= 0 || height_ <= 0) throw std::invalid_argument("PixelOracle: bad resolution");
    if (downsample_ <= 0 || width_ % downsample_ != 0 || height_ % downsample_ != 0)
        throw std::invalid_argument("PixelOracle: downsample must divide the resolution");
}

Frame PixelOracle::render(const Pose& c2w) const {
    return render_masked(c2w, {});
}

Frame PixelOracle::render_masked(const Pose& c2w, std::span<const std::string> hidden) const {
    PixelFrame frame;
    frame.width = width_;
    frame.height = height_;
    frame.intensities.assign(static_cast<std::size_t>(width_ * height_), background_);

    struct Disc {
        double u, v, radius_px, depth;
    };
    std::vector<Disc> discs;
    for (const auto& target : scene_.targets) {
        if (contains(hidden, target.id)) continue;
        const CameraPoint cp = to_camera(c2w, target.position);
        if (cp.depth <= 1e-9) continue;
        const double u = scene_.intrinsics.focal_px * cp.p_cam.x / cp.depth + scene_.intrinsics.cx;
        const double v = scene_.intrinsics.focal_px * cp.p_cam.y / cp.depth + scene_.intrinsics.cy;
        const double radius_px = scene_.intrinsics.focal_px * target.radius / cp.depth;
        discs.push_back({u, v, radius_px, cp.depth});
    }
    // far to near so nearer discs overwrite
    std::stable_sort(discs.begin(), discs.end(),
                     [](const Disc& a, const Disc& b) { return a.depth > b.depth; });
    for (const auto& d : discs) {
        const int x0 = std::max(0, static_cast<int>(std::floor(d.u - d.radius_px - 1.0)));
        const int x1 = std::min(width_ - 1, static_cast<int>(std::ceil(d.u + d.radius_px + 1.0)));
        const int y0 = std::max(0, static_cast<int>(std::floor(d.v - d.radius_px - 1.0)));
        const int y1 = std::min(height_ - 1, static_cast<int>(std::ceil(d.v + d.radius_px + 1.0)));
        const double r2 = d.radius_px * d.radius_px;
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double dx = (static_cast<double>(x) + 0.5) - d.u;
                const double dy = (static_cast<double>(y) + 0.5) - d.v;
                if (dx * dx + dy * dy <= r2)
                    frame.intensities[static_cast<std::size_t>(y * width_ + x)] = target_intensity_;
            }
        }
    }
    return frame;
}

ReferenceLatent PixelOracle::encode(const Frame& frame) const {
    const auto* px = std::get_if<PixelFrame>(&frame);
    if (px == nullptr)
        throw std::invalid_argument("PixelOracle::encode: frame variant mismatch");
    if (px->width != width_ || px->height != height_)
        throw std::invalid_argument("PixelOracle::encode: frame resolution mismatch");
    const int bx = width_ / downsample_;
    const int by = height_ / downsample_;
    ReferenceLatent latent;
    latent.values.resize(static_cast<std::size_t>(downsample_ * downsample_), 0.0);
    for (int gy = 0; gy < downsample_; ++gy) {
        for (int gx = 0; gx < downsample_; ++gx) {
            double sum = 0.0;
            for (int y = gy * by; y < (gy + 1) * by; ++y)
                for (int x = gx * bx; x < (gx + 1) * bx; ++x)
                    sum += px->at(x, y);
            latent.values[static_cast<std::size_t>(gy * downsample_ + gx)] =
                sum / static_cast<double>(bx * by);
        }
    }
    return latent;
}

void write_pgm(const PixelFrame& frame, std::ostream& out) {
    out << "P2\n" << frame.width << " " << frame.height << "\n255\n";
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            const int v = static_cast<int>(std::lround(std::clamp(frame.at(x, y), 0.0, 1.0) * 255.0));
            out << v << (x + 1 == frame.width ? "" : " ");
        }
        out << "\n";
    }
}

} // namespace anchorplan
