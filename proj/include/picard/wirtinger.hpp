#pragma once

#include <cmath>
#include <stdexcept>

#include "picard/complex_ball.hpp"

namespace picard {

enum class Wirtinger { dz1, dz2, dz1_bar, dz2_bar };

struct step_too_large_error : std::domain_error {
    using std::domain_error::domain_error;
};

namespace detail {

inline BallPoint shift(const BallPoint& p, int coord, double dx, double dy) {
    const cplx delta{dx, dy};
    return coord == 1 ? BallPoint{p.z1 + delta, p.z2} : BallPoint{p.z1, p.z2 + delta};
}

inline void require_margin(const BallPoint& p, double reach) {
    const double r = std::sqrt(p.norm_sq()) + reach;
    if (!(r * r < 1.0 - ball_boundary_guard))
        throw step_too_large_error("wirtinger_fd: stencil exits the ball");
}

}  // namespace detail

// Central-difference Wirtinger derivative: d/dz = (d_x - i d_y)/2 and
// d/dzbar = (d_x + i d_y)/2 in the real coordinates of the chosen slot.
template <typename F>
cplx wirtinger_fd(F&& f, const BallPoint& p, Wirtinger which, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("wirtinger_fd: step must be positive");
    detail::require_margin(p, 2.0 * h);
    const int coord = (which == Wirtinger::dz1 || which == Wirtinger::dz1_bar) ? 1 : 2;
    const bool conjugate = (which == Wirtinger::dz1_bar || which == Wirtinger::dz2_bar);
    const cplx fx =
        (f(detail::shift(p, coord, h, 0.0)) - f(detail::shift(p, coord, -h, 0.0))) / (2.0 * h);
    const cplx fy =
        (f(detail::shift(p, coord, 0.0, h)) - f(detail::shift(p, coord, 0.0, -h))) / (2.0 * h);
    const cplx iy = cplx{0.0, 1.0} * fy;
    return conjugate ? 0.5 * (fx + iy) : 0.5 * (fx - iy);
}

// d^2/(dz_i dzbar_j) by nesting two first-order stencils.
template <typename F>
cplx wirtinger_fd2(F&& f, const BallPoint& p, int i, int j, double h) {
    if (i < 1 || i > 2 || j < 1 || j > 2)
        throw std::invalid_argument("wirtinger_fd2: indices must be 1 or 2");
    detail::require_margin(p, 4.0 * h);
    const Wirtinger inner = (j == 1) ? Wirtinger::dz1_bar : Wirtinger::dz2_bar;
    const Wirtinger outer = (i == 1) ? Wirtinger::dz1 : Wirtinger::dz2;
    const auto g = [&](const BallPoint& q) { return wirtinger_fd(f, q, inner, h); };
    return wirtinger_fd(g, p, outer, h);
}

}  // namespace picard
