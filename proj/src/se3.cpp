#include "anchorplan/se3.hpp"

#include <stdexcept>
#include <string>

namespace anchorplan {

double Mat3::determinant() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) -
           m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Mat3 axis_angle(const Vec3& unit_axis, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double t = 1.0 - c;
    const double ax = unit_axis.x, ay = unit_axis.y, az = unit_axis.z;
    Mat3 r;
    r.at(0, 0) = t * ax * ax + c;
    r.at(0, 1) = t * ax * ay - s * az;
    r.at(0, 2) = t * ax * az + s * ay;
    r.at(1, 0) = t * ax * ay + s * az;
    r.at(1, 1) = t * ay * ay + c;
    r.at(1, 2) = t * ay * az - s * ax;
    r.at(2, 0) = t * ax * az - s * ay;
    r.at(2, 1) = t * ay * az + s * ax;
    r.at(2, 2) = t * az * az + c;
    return r;
}

bool is_rotation(const Mat3& r, double tol) {
    const Mat3 gram = r.transposed() * r;
    const Mat3 id = Mat3::identity();
    for (int i = 0; i < 9; ++i) {
        if (std::abs(gram.m[static_cast<std::size_t>(i)] - id.m[static_cast<std::size_t>(i)]) > tol)
            return false;
    }
    return std::abs(r.determinant() - 1.0) <= tol;
}

Mat3 orthonormalized(const Mat3& r) {
    Vec3 c0{r.at(0, 0), r.at(1, 0), r.at(2, 0)};
    Vec3 c1{r.at(0, 1), r.at(1, 1), r.at(2, 1)};
    const double n0 = c0.norm();
    if (n0 == 0.0) throw std::invalid_argument("orthonormalized: degenerate rotation matrix");
    c0 = c0 * (1.0 / n0);
    c1 = c1 - c0 * c0.dot(c1);
    const double n1 = c1.norm();
    if (n1 == 0.0) throw std::invalid_argument("orthonormalized: degenerate rotation matrix");
    c1 = c1 * (1.0 / n1);
    const Vec3 c2 = c0.cross(c1);
    Mat3 out;
    out.at(0, 0) = c0.x; out.at(1, 0) = c0.y; out.at(2, 0) = c0.z;
    out.at(0, 1) = c1.x; out.at(1, 1) = c1.y; out.at(2, 1) = c1.z;
    out.at(0, 2) = c2.x; out.at(1, 2) = c2.y; out.at(2, 2) = c2.z;
    return out;
}

Pose make_pose(const Mat3& rotation, const Vec3& translation) {
    return Pose{orthonormalized(rotation), translation};
}

Pose compose(const Pose& a, const Pose& b) {
    return Pose{a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

double translation_distance(const Pose& a, const Pose& b) {
    return (a.translation - b.translation).norm();
}

double angular_distance(const Pose& a, const Pose& b) {
    if (a.rotation == b.rotation) return 0.0;
    const Mat3 rel = a.rotation.transposed() * b.rotation;
    const double sx = 0.5 * (rel.at(2, 1) - rel.at(1, 2));
    const double sy = 0.5 * (rel.at(0, 2) - rel.at(2, 0));
    const double sz = 0.5 * (rel.at(1, 0) - rel.at(0, 1));
    const double s = std::sqrt(sx * sx + sy * sy + sz * sz);
    const double c = 0.5 * (rel.trace() - 1.0);
    return std::atan2(s, c);
}

void KinematicChain::validate() const {
    if (links.empty()) throw std::invalid_argument("chain: no links");
    for (std::size_t i = 0; i < links.size(); ++i) {
        const auto& link = links[i];
        if (std::abs(link.axis.norm() - 1.0) > 1e-9)
            throw std::invalid_argument("chain: link " + std::to_string(i) + " axis is not unit length");
        if (!(link.limit_lo < link.limit_hi))
            throw std::invalid_argument("chain: link " + std::to_string(i) + " limits must satisfy lo < hi");
    }
    if (!is_rotation(cam_offset.rotation))
        throw std::invalid_argument("chain: cam_offset rotation is not orthonormal");
}

KinematicChain reference_chain_3dof() {
    KinematicChain chain;
    chain.links = {
        ChainLink{{0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}},
        ChainLink{{0.0, 1.0, 0.0}, {0.5, 0.0, 0.0}},
        ChainLink{{0.0, 1.0, 0.0}, {0.5, 0.0, 0.0}},
    };
    chain.cam_offset = Pose{};
    return chain;
}

bool within_limits(const JointConfig& q, const KinematicChain& chain) {
    if (q.size() != chain.links.size()) return false;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] < chain.links[i].limit_lo || q[i] > chain.links[i].limit_hi) return false;
    }
    return true;
}

Pose forward_kinematics(const JointConfig& q, const KinematicChain& chain) {
    if (q.size() != chain.links.size())
        throw std::invalid_argument("forward_kinematics: expected " + std::to_string(chain.links.size()) +
                                    " joint angles, got " + std::to_string(q.size()));
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] < chain.links[i].limit_lo || q[i] > chain.links[i].limit_hi)
            throw std::domain_error("forward_kinematics: joint " + std::to_string(i) + " outside limits");
    }
    Pose pose;
    for (std::size_t i = 0; i < chain.links.size(); ++i) {
        const auto& link = chain.links[i];
        const Mat3 r = axis_angle(link.axis, q[i]);
        pose = compose(pose, Pose{r, r * link.offset});
    }
    return compose(pose, chain.cam_offset);
}

} // namespace anchorplan
