#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "picard/quadrature.hpp"

namespace picard {

using cplx = std::complex<double>;

inline constexpr double ball_boundary_guard = 1e-12;

// x^n by binary exponentiation.
inline double real_pow_int(double x, unsigned n) {
    double acc = 1.0;
    double base = x;
    while (n) {
        if (n & 1u) acc *= base;
        base *= base;
        n >>= 1u;
    }
    return acc;
}

// z^n by binary exponentiation; integer powers never touch a branch cut,
// unlike exp(n log z).
inline cplx cplx_pow_int(cplx z, unsigned n) {
    cplx acc{1.0, 0.0};
    cplx base = z;
    while (n) {
        if (n & 1u) acc *= base;
        base *= base;
        n >>= 1u;
    }
    return acc;
}

// A point of the open unit ball in C^2. Construction rejects points with
// |z|^2 >= 1 - 1e-12 so every downstream 1/(1-|z|^2) power stays finite.
struct BallPoint {
    cplx z1, z2;

    BallPoint(cplx a, cplx b) : z1(a), z2(b) {
        if (!(norm_sq() < 1.0 - ball_boundary_guard))
            throw std::domain_error("BallPoint: |z|^2 must stay below 1 - 1e-12");
    }

    double norm_sq() const { return std::norm(z1) + std::norm(z2); }

    // 1 - |z|^2 with the dominant coordinate folded into a (1-a)(1+a)
    // product; the naive form cancels near the boundary and this quantity
    // is raised to powers ~3k downstream.
    double one_minus_norm_sq() const {
        const double n1 = std::norm(z1);
        const double n2 = std::norm(z2);
        if (n1 >= n2) {
            const double a = std::abs(z1);
            return (1.0 - a) * (1.0 + a) - n2;
        }
        const double a = std::abs(z2);
        return (1.0 - a) * (1.0 + a) - n1;
    }
};

// Homogeneous coordinates of a ball point; v3 == 1 when produced by lift().
struct Lift {
    cplx v1, v2, v3;
};

inline Lift lift(const BallPoint& p) { return Lift{p.z1, p.z2, cplx{1.0, 0.0}}; }

// Signature-(2,1) pairing v1(p) conj(v1(q)) + v2(p) conj(v2(q)) - v3(p) conj(v3(q)).
inline cplx hyp_inner(const Lift& p, const Lift& q) {
    return p.v1 * std::conj(q.v1) + p.v2 * std::conj(q.v2) - p.v3 * std::conj(q.v3);
}

// Geodesic distance: cosh^2(d/2) = <p,q><q,p> / (<p,p><q,q>), with the
// ratio clamped to [1, inf) to absorb rounding. Points coinciding to 1e-12
// per coordinate return exactly zero; the pairing and the balanced
// 1 - |z|^2 round differently, which would otherwise leave ~1e-8 residue
// at coincident points.
inline double hyp_distance(const BallPoint& p, const BallPoint& q) {
    if (std::abs(p.z1 - q.z1) <= 1e-12 && std::abs(p.z2 - q.z2) <= 1e-12) return 0.0;
    const cplx ip = hyp_inner(lift(p), lift(q));
    double ratio = std::norm(ip) / (p.one_minus_norm_sq() * q.one_minus_norm_sq());
    if (ratio < 1.0) ratio = 1.0;
    return 2.0 * std::acosh(std::sqrt(ratio));
}

// Density of the hyperbolic volume form against Lebesgue measure on C^2
// under the (i/2)^2 convention: 1/(1-|z|^2)^3.
inline double volume_density(const BallPoint& p) {
    const double u = p.one_minus_norm_sq();
    return 1.0 / (u * u * u);
}

enum class VolumeConvention { closed_form, integrated };

// Volume of a geodesic ball of radius r. The closed-form convention returns
// 2*pi*sinh^4(r/2); the integrated convention evaluates the radial
// quadrature of the volume density over the Euclidean ball of radius
// tanh(r/2), whose constant works out to pi^2/2 instead of 2*pi. The two
// disagree by the constant only, and counting bounds consume sinh^4 ratios,
// where it cancels.
inline double ball_volume(double r, VolumeConvention convention) {
    if (r < 0.0) throw std::invalid_argument("ball_volume: negative radius");
    if (convention == VolumeConvention::closed_form) {
        const double s = std::sinh(0.5 * r);
        return 2.0 * std::numbers::pi * s * s * s * s;
    }
    if (r == 0.0) return 0.0;
    const double rho = std::tanh(0.5 * r);
    // area(S^3) = 2 pi^2 times the radial profile s^3 / (1-s^2)^3.
    const auto radial = [](double s) {
        const double u = (1.0 - s) * (1.0 + s);
        return s * s * s / (u * u * u);
    };
    const QuadratureResult q = integrate(radial, 0.0, rho, 1e-12, 1 << 14);
    return 2.0 * std::numbers::pi * std::numbers::pi * q.value;
}

// Weight-m Petersson scaling (1-|z|^2)^m.
inline double petersson_factor(const BallPoint& p, int m) {
    if (m < 0) throw std::invalid_argument("petersson_factor: negative weight");
    return real_pow_int(p.one_minus_norm_sq(), static_cast<unsigned>(m));
}

}  // namespace picard
