#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "picard/su21.hpp"
#include "picard/wirtinger.hpp"

using namespace picard;

namespace {

BallPoint random_point(std::mt19937_64& rng, double max_radius = 0.8) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double rad = max_radius * std::sqrt(unit(rng));
    const double split = unit(rng);
    return BallPoint{std::polar(rad * std::sqrt(split), angle(rng)),
                     std::polar(rad * std::sqrt(1.0 - split), angle(rng))};
}

}  // namespace

TEST_CASE("membership diagnostics") {
    const auto id_report = check_membership(Mat3::identity());
    CHECK(id_report.passes());
    CHECK(id_report.form_residual == 0.0);
    CHECK(id_report.det_residual == 0.0);

    Mat3 rot;
    rot(0, 0) = std::polar(1.0, 0.7);
    rot(1, 1) = std::polar(1.0, 0.7);
    rot(2, 2) = std::polar(1.0, -1.4);
    CHECK(check_membership(rot).passes());

    // H itself preserves the form but has determinant -1.
    const auto h_report = check_membership(hyp_form());
    CHECK_FALSE(h_report.passes());
    CHECK(h_report.form_residual == 0.0);
    CHECK(std::abs(h_report.det_residual - 2.0) < 1e-15);

    CHECK_THROWS_AS(GroupElement(hyp_form()), membership_error);
}

TEST_CASE("action basics") {
    const GroupElement id(Mat3::identity());
    const BallPoint p{cplx{0.3, 0.2}, cplx{-0.1, 0.4}};
    const BallPoint q = act(id, p);
    CHECK(std::abs(q.z1 - p.z1) == 0.0);
    CHECK(std::abs(q.z2 - p.z2) == 0.0);

    for (double t : {0.25, 1.0, 2.0}) {
        const BallPoint img = act(boost(t), BallPoint{0.0, 0.0});
        CHECK(std::abs(img.z1 - std::tanh(t)) < 1e-15);
        CHECK(std::abs(img.z2) == 0.0);
        CHECK(std::abs(hyp_distance(BallPoint{0.0, 0.0}, img) - 2.0 * t) < 1e-10);
    }

    const BallPoint fixed = act(rotation(0.9), BallPoint{0.0, 0.0});
    CHECK(std::abs(fixed.z1) == 0.0);
    CHECK(std::abs(fixed.z2) == 0.0);

    // rotation(2pi/3) is the scalar cube root of unity; it acts trivially.
    const GroupElement omega = rotation(2.0 * std::numbers::pi / 3.0);
    const BallPoint moved = act(omega, p);
    CHECK(std::abs(moved.z1 - p.z1) < 1e-15);
    CHECK(std::abs(moved.z2 - p.z2) < 1e-15);

    // A vanishing denominator only arises off the group.
    Mat3 bad = Mat3::identity();
    bad(2, 2) = 0.0;
    bad(2, 0) = 1.0;
    const GroupElement fake = GroupElement::unchecked(bad);
    CHECK_THROWS_AS(act(fake, BallPoint{0.0, 0.0}), singular_action_error);
}

TEST_CASE("composition and cocycle property") {
    std::mt19937_64 rng(5);
    const auto moderate = [&rng]() {
        for (;;) {
            const GroupElement g = random_element(rng());
            if (std::abs(g.d()) <= 8.0) return g;
        }
    };
    for (int i = 0; i < 200; ++i) {
        const GroupElement g = moderate();
        const GroupElement h = moderate();
        const BallPoint p = random_point(rng);
        const BallPoint via_product = act(g * h, p);
        const BallPoint via_steps = act(g, act(h, p));
        CHECK(std::abs(via_product.z1 - via_steps.z1) < 1e-10);
        CHECK(std::abs(via_product.z2 - via_steps.z2) < 1e-10);
        const cplx lhs = cocycle(g * h, p);
        const cplx rhs = cocycle(g, act(h, p)) * cocycle(h, p);
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(rhs));
    }
}

TEST_CASE("cocycle values and norm identity") {
    const BallPoint origin{0.0, 0.0};
    CHECK(cocycle(GroupElement(Mat3::identity()), origin) == cplx{1.0, 0.0});
    CHECK(std::abs(cocycle(boost(1.0), origin) - std::cosh(1.0)) < 1e-15);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        GroupElement g = random_element(rng());
        while (std::abs(g.d()) > 8.0) g = random_element(rng());
        const BallPoint p = random_point(rng);
        const BallPoint gp = act(g, p);
        const double lhs = gp.one_minus_norm_sq() * std::norm(cocycle(g, p));
        CHECK(std::abs(lhs - p.one_minus_norm_sq()) < 1e-12);
    }
}

TEST_CASE("isometry of the action") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 1000; ++i) {
        const GroupElement g = random_element(rng());
        const BallPoint p = random_point(rng);
        const BallPoint q = random_point(rng);
        CHECK(std::abs(hyp_distance(act(g, p), act(g, q)) - hyp_distance(p, q)) < 1e-10);
    }
}

TEST_CASE("jacobian of the action") {
    const GroupElement id(Mat3::identity());
    const BallPoint p{cplx{0.1, 0.2}, cplx{0.3, 0.0}};
    const ActionJacobian jid = action_jacobian(id, p);
    CHECK(std::abs(jid.det() - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(jid.d12) == 0.0);

    const ActionJacobian jb = action_jacobian(boost(1.0), BallPoint{0.0, 0.0});
    const double expected = std::pow(std::cosh(1.0), -3.0);
    CHECK(std::abs(jb.det() - cplx{expected, 0.0}) < 1e-12);

    std::mt19937_64 rng(19);
    for (int i = 0; i < 500; ++i) {
        const GroupElement g = random_element(rng());
        const BallPoint z = random_point(rng);
        const cplx q3 = cplx_pow_int(cocycle(g, z), 3);
        CHECK(std::abs(action_jacobian(g, z).det() * q3 - cplx{1.0, 0.0}) < 1e-9);
    }
}

TEST_CASE("jacobian against finite differences") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 40; ++i) {
        const GroupElement g = random_element(rng());
        const BallPoint z = random_point(rng, 0.6);
        const ActionJacobian j = action_jacobian(g, z);
        const double h = 1e-6;
        const auto w1 = [&](const BallPoint& q) { return act(g, q).z1; };
        const auto w2 = [&](const BallPoint& q) { return act(g, q).z2; };
        CHECK(std::abs(wirtinger_fd(w1, z, Wirtinger::dz1, h) - j.d11) < 1e-7);
        CHECK(std::abs(wirtinger_fd(w1, z, Wirtinger::dz2, h) - j.d12) < 1e-7);
        CHECK(std::abs(wirtinger_fd(w2, z, Wirtinger::dz1, h) - j.d21) < 1e-7);
        CHECK(std::abs(wirtinger_fd(w2, z, Wirtinger::dz2, h) - j.d22) < 1e-7);
        // Holomorphy: the conjugate derivatives vanish.
        CHECK(std::abs(wirtinger_fd(w1, z, Wirtinger::dz1_bar, h)) < 1e-7);
        CHECK(std::abs(wirtinger_fd(w2, z, Wirtinger::dz2_bar, h)) < 1e-7);
    }
}

TEST_CASE("boost one-parameter subgroup") {
    CHECK(boost(0.0).matrix().max_abs_diff(Mat3::identity()) == 0.0);
    const Mat3 lhs = (boost(0.7) * boost(0.5)).matrix();
    CHECK(lhs.max_abs_diff(boost(1.2).matrix()) < 1e-12);
    CHECK(boost(1.0).matrix().max_abs_diff(boost(-1.0).inverse().matrix()) < 1e-15);
}

TEST_CASE("rotation elements") {
    CHECK(rotation(0.0).matrix().max_abs_diff(Mat3::identity()) == 0.0);
    const GroupElement r = rotation(2.0 * std::numbers::pi / 3.0);
    const Mat3 cubed = (r * r * r).matrix();
    CHECK(cubed.max_abs_diff(Mat3::identity()) < 1e-14);
}

TEST_CASE("random elements satisfy every block relation") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 1000; ++i) {
        const GroupElement g = random_element(rng());
        const auto rep = check_membership(g.matrix());
        CHECK(rep.form_residual <= 1e-10);
        CHECK(rep.det_residual <= 1e-10);
        CHECK(rep.relation_residual <= 1e-9);
        CHECK(std::abs(g.d()) >= 1.0 - 1e-10);
        CHECK(a_entry_ratio(g) <= 1.0);
        // Membership is stable under conjugate transpose.
        CHECK(check_membership(g.matrix().adjoint()).passes());
        // Inverse via the form is a two-sided inverse.
        CHECK((g * g.inverse()).matrix().max_abs_diff(Mat3::identity()) < 1e-10);
    }
}
