#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "picard/wirtinger.hpp"

using namespace picard;

TEST_CASE("holomorphic coordinate") {
    const auto f = [](const BallPoint& p) { return p.z1; };
    const BallPoint p{cplx{0.2, 0.1}, cplx{-0.3, 0.05}};
    CHECK(std::abs(wirtinger_fd(f, p, Wirtinger::dz1, 1e-5) - cplx{1.0, 0.0}) < 1e-10);
    CHECK(std::abs(wirtinger_fd(f, p, Wirtinger::dz1_bar, 1e-5)) < 1e-10);
    CHECK(std::abs(wirtinger_fd(f, p, Wirtinger::dz2, 1e-5)) < 1e-10);
}

TEST_CASE("squared modulus") {
    const auto f = [](const BallPoint& p) { return cplx{std::norm(p.z1), 0.0}; };
    const BallPoint p{cplx{0.2, -0.4}, cplx{0.1, 0.0}};
    CHECK(std::abs(wirtinger_fd(f, p, Wirtinger::dz1, 1e-5) - std::conj(p.z1)) < 1e-10);
    CHECK(std::abs(wirtinger_fd2(f, p, 1, 1, 1e-4) - cplx{1.0, 0.0}) < 1e-7);
    CHECK(std::abs(wirtinger_fd2(f, p, 1, 2, 1e-4)) < 1e-7);
}

TEST_CASE("inverse weight power against hand-differentiated forms") {
    const int m = 9;
    const auto f = [&](const BallPoint& p) {
        return cplx{std::pow(p.one_minus_norm_sq(), -m), 0.0};
    };
    const BallPoint p{cplx{0.2, 0.0}, cplx{0.1, 0.0}};
    const double u = p.one_minus_norm_sq();

    const cplx dz1 = double(m) * std::conj(p.z1) * std::pow(u, -m - 1);
    const cplx dz1b = double(m) * p.z1 * std::pow(u, -m - 1);
    const cplx d11 =
        double(m) * std::pow(u, -m - 1) + double(m) * (m + 1.0) * std::norm(p.z1) * std::pow(u, -m - 2);
    const cplx d12 = double(m) * (m + 1.0) * p.z1 * std::conj(p.z2) * std::pow(u, -m - 2);

    const double h = 1e-5 * u;
    CHECK(std::abs(wirtinger_fd(f, p, Wirtinger::dz1, h) - dz1) < 1e-7 * std::abs(dz1));
    CHECK(std::abs(wirtinger_fd(f, p, Wirtinger::dz1_bar, h) - dz1b) < 1e-7 * std::abs(dz1b));
    CHECK(std::abs(wirtinger_fd2(f, p, 1, 1, h) - d11) < 1e-6 * std::abs(d11));
    // d^2/dz2 dzbar1 = m(m+1) z2 conj(z1) u^{-m-2}; index order check.
    const cplx d21 = double(m) * (m + 1.0) * p.z2 * std::conj(p.z1) * std::pow(u, -m - 2);
    CHECK(std::abs(wirtinger_fd2(f, p, 2, 1, h) - d21) < 1e-6 * std::abs(d21));
    CHECK(std::abs(wirtinger_fd2(f, p, 1, 2, h) - d12) < 1e-6 * std::abs(d12));
}

TEST_CASE("stencil leaving the ball is rejected") {
    const BallPoint near{cplx{0.999999, 0.0}, cplx{0.0, 0.0}};
    const auto f = [](const BallPoint& p) { return p.z1; };
    CHECK_THROWS_AS(wirtinger_fd(f, near, Wirtinger::dz1, 1e-3), step_too_large_error);
    CHECK_THROWS_AS(wirtinger_fd(f, near, Wirtinger::dz1, 0.0), std::invalid_argument);
}
