#include "anchorplan/se3.hpp"
#include "anchorplan/rng.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <stdexcept>

using namespace anchorplan;

namespace {

JointConfig random_config(Rng& rng, const KinematicChain& chain) {
    JointConfig q(chain.dof(), 0.0);
    for (std::size_t i = 0; i < q.size(); ++i)
        q[i] = rng.uniform(chain.links[i].limit_lo, chain.links[i].limit_hi);
    return q;
}

} // namespace

TEST_CASE("forward kinematics of the reference chain at canonical configurations") {
    const KinematicChain chain = reference_chain_3dof();

    const Pose zero = forward_kinematics({0.0, 0.0, 0.0}, chain);
    CHECK(zero.translation.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(zero.translation.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(zero.translation.z == doctest::Approx(0.0).epsilon(1e-12));

    const Pose quarter = forward_kinematics({kPi / 2.0, 0.0, 0.0}, chain);
    CHECK(quarter.translation.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(quarter.translation.y == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(quarter.translation.z == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("zero-length links accumulate no translation") {
    KinematicChain chain;
    chain.links = {ChainLink{{0, 0, 1}, {0, 0, 0}}, ChainLink{{0, 1, 0}, {0, 0, 0}}};
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        const Pose p = forward_kinematics({rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)}, chain);
        CHECK(p.translation.norm() == doctest::Approx(0.0).epsilon(1e-15));
    }
}

TEST_CASE("forward kinematics rejects bad inputs") {
    const KinematicChain chain = reference_chain_3dof();
    CHECK_THROWS_AS((void)forward_kinematics({0.0, 0.0}, chain), std::invalid_argument);
    CHECK_THROWS_AS((void)forward_kinematics({0.0, 0.0, 0.0, 0.0}, chain), std::invalid_argument);
    CHECK_THROWS_AS((void)forward_kinematics({4.0, 0.0, 0.0}, chain), std::domain_error);
    CHECK_THROWS_AS((void)forward_kinematics({0.0, -3.5, 0.0}, chain), std::domain_error);
}

TEST_CASE("forward kinematics is a pure function") {
    const KinematicChain chain = reference_chain_3dof();
    const JointConfig q{0.3, -0.7, 1.1};
    const Pose first = forward_kinematics(q, chain);
    Rng rng(7);
    for (int i = 0; i < 100; ++i) (void)forward_kinematics(random_config(rng, chain), chain);
    const Pose again = forward_kinematics(q, chain);
    CHECK(again == first);   // bit-identical
}

TEST_CASE("compose identities and translations") {
    Rng rng(3);
    Pose p;
    p.rotation = testing_oracles::random_rotation(rng);
    p.translation = Vec3{0.3, -0.2, 0.9};

    CHECK(compose(p, Pose{}) == p);
    CHECK(compose(Pose{}, p) == p);

    const Pose a{Mat3::identity(), {1.0, 0.0, 0.0}};
    const Pose b{Mat3::identity(), {0.0, 1.0, 0.0}};
    const Pose ab = compose(a, b);
    CHECK(ab.translation == Vec3{1.0, 1.0, 0.0});
}

TEST_CASE("compose is associative within round-off") {
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        Pose a{testing_oracles::random_rotation(rng),
               {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}};
        Pose b{testing_oracles::random_rotation(rng),
               {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}};
        Pose c{testing_oracles::random_rotation(rng),
               {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}};
        const Pose left = compose(compose(a, b), c);
        const Pose right = compose(a, compose(b, c));
        CHECK(translation_distance(left, right) < 1e-12);
        CHECK(angular_distance(left, right) < 1e-12);
    }
}

TEST_CASE("translation distance basics") {
    Pose a, b;
    CHECK(translation_distance(a, a) == 0.0);
    b.translation = {0.3, 0.0, 0.0};
    CHECK(translation_distance(a, b) == doctest::Approx(0.3).epsilon(1e-15));
    a.translation = {1.0, 1.0, 0.0};
    b.translation = {0.0, 0.0, 0.0};
    CHECK(translation_distance(a, b) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("translation distance satisfies the triangle inequality") {
    Rng rng(17);
    for (int i = 0; i < 1000; ++i) {
        Pose a, b, c;
        a.translation = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        b.translation = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        c.translation = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        CHECK(translation_distance(a, c) <=
              translation_distance(a, b) + translation_distance(b, c) + 1e-12);
    }
}

TEST_CASE("angular distance identities and half turn") {
    Pose a;
    CHECK(angular_distance(a, a) == 0.0);

    Pose half;
    half.rotation = axis_angle({0, 0, 1}, kPi);
    CHECK(angular_distance(a, half) == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("angular distance matches the quaternion dot-product oracle") {
    Rng rng(23);
    for (int i = 0; i < 200; ++i) {
        Pose a{testing_oracles::random_rotation(rng), {}};
        Pose b{testing_oracles::random_rotation(rng), {}};
        const double expected = testing_oracles::quat_angle(a.rotation, b.rotation);
        CHECK(std::abs(angular_distance(a, b) - expected) < 1e-9);
    }
}

TEST_CASE("axis-angle rotations are orthonormal with determinant one") {
    Rng rng(29);
    for (int i = 0; i < 100; ++i) {
        const Mat3 r = testing_oracles::random_rotation(rng);
        CHECK(is_rotation(r, 1e-9));
    }
}

TEST_CASE("make_pose re-orthonormalizes drifted rotations") {
    Rng rng(31);
    Mat3 drifted = testing_oracles::random_rotation(rng);
    for (auto& v : drifted.m) v += 1e-7;
    CHECK_FALSE(is_rotation(drifted, 1e-9));
    const Pose fixed = make_pose(drifted, {0, 0, 0});
    CHECK(is_rotation(fixed.rotation, 1e-9));
}

TEST_CASE("chain validation rejects malformed chains") {
    KinematicChain chain = reference_chain_3dof();
    CHECK_NOTHROW(chain.validate());

    KinematicChain bad_axis = chain;
    bad_axis.links[1].axis = {0.0, 2.0, 0.0};
    CHECK_THROWS_AS(bad_axis.validate(), std::invalid_argument);

    KinematicChain bad_limits = chain;
    bad_limits.links[0].limit_lo = 1.0;
    bad_limits.links[0].limit_hi = -1.0;
    CHECK_THROWS_AS(bad_limits.validate(), std::invalid_argument);

    KinematicChain empty;
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
}
