#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace anchorplan {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Vec3&) const = default;

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

// Row-major 3x3 matrix; only what the pose math needs.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return {}; }

    double at(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }
    double& at(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += at(i, k) * o.at(k, j);
                r.at(i, j) = s;
            }
        return r;
    }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.at(i, j) = at(j, i);
        return r;
    }

    double trace() const { return m[0] + m[4] + m[8]; }
    double determinant() const;

    bool operator==(const Mat3&) const = default;
};

// Rodrigues rotation about a unit axis.
Mat3 axis_angle(const Vec3& unit_axis, double angle);

bool is_rotation(const Mat3& r, double tol = 1e-9);

// Gram-Schmidt re-orthonormalization. Applied when poses are built from
// external data; compositions never re-normalize.
Mat3 orthonormalized(const Mat3& r);

struct Pose {
    Mat3 rotation = Mat3::identity();
    Vec3 translation{};

    bool operator==(const Pose&) const = default;
};

Pose make_pose(const Mat3& rotation, const Vec3& translation);

Pose compose(const Pose& a, const Pose& b);

double translation_distance(const Pose& a, const Pose& b);

// Geodesic angle between the two rotations, in [0, pi]. Uses the
// atan2(|skew|, cos) form so nearly-equal rotations evaluate near machine
// epsilon instead of sqrt(epsilon).
double angular_distance(const Pose& a, const Pose& b);

using JointConfig = std::vector<double>;

struct ChainLink {
    Vec3 axis;                // unit rotation axis, in the parent link frame
    Vec3 offset;              // translation to the next joint, in this link's rotated frame (m)
    double limit_lo = -kPi;   // radians
    double limit_hi = kPi;
};

struct KinematicChain {
    std::vector<ChainLink> links;
    Pose cam_offset;          // fixed wrist-to-camera transform

    std::size_t dof() const { return links.size(); }
    void validate() const;    // throws std::invalid_argument
};

// Base revolute about z, two revolute about y carrying 0.5 m x-offsets,
// identity camera offset. Reach is the unit ball around the base.
KinematicChain reference_chain_3dof();

bool within_limits(const JointConfig& q, const KinematicChain& chain);

// Camera-to-world pose of the chain at q. Pure function: identical q gives a
// bit-identical Pose. Throws std::invalid_argument on dimension mismatch and
// std::domain_error on joint-limit violation (never clamps).
Pose forward_kinematics(const JointConfig& q, const KinematicChain& chain);

} // namespace anchorplan
