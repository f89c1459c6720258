#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "picard/complex_ball.hpp"
#include "picard/quadrature.hpp"

namespace picard {

// Several estimates carry different constants in the statement and in the
// body of the proof; both are implemented and selectable.
enum class BoundVariant { statement, proof };

// Packing bound on the orbit counting function:
//   N(z, w; delta) <= sinh^4((2 delta + r)/4) / sinh^4(r/4),
// r a lower bound for the displacement of every counted non-identity element.
inline double counting_bound(double delta, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("counting_bound: r must be positive");
    if (delta < 0.0) throw std::invalid_argument("counting_bound: negative delta");
    const double num = std::sinh(0.25 * (2.0 * delta + r));
    const double den = std::sinh(0.25 * r);
    const double q = num / den;
    return q * q * q * q;
}

namespace detail {

// cosh(x)^p for possibly large p, evaluated in log space.
inline double cosh_pow(double x, double p) { return std::exp(p * std::log(std::cosh(x))); }

inline double sinh4(double x) {
    const double s = std::sinh(x);
    return s * s * s * s;
}

// Integrand of the counting-measure tail: f(rho) sinh^3((2rho+r)/4) cosh((2rho+r)/4)
// with f(rho) = cosh^{-m}(rho/2).
inline double tail_integrand(double rho, int m, double r) {
    const double decay = cosh_pow(0.5 * rho, -double(m));
    if (decay == 0.0) return 0.0;
    const double arg = 0.25 * (2.0 * rho + r);
    const double s = std::sinh(arg);
    return decay * s * s * s * std::cosh(arg);
}

}  // namespace detail

// Closed-form majorant for the tail integral from delta (the derivation
// behind the far-regime third term): 32 cosh^4(r/4) C / ((m-6) sinh^4(r/4)
// cosh^{m-6}(delta/2)). Requires m > 6.
inline double tail_majorant_far(int m, double delta, double r, double constant = 1.0) {
    if (m <= 6) throw std::invalid_argument("tail_majorant_far: needs m > 6");
    const double c4 = std::cosh(0.25 * r);
    return 32.0 * c4 * c4 * c4 * c4 * constant /
           (double(m - 6) * detail::sinh4(0.25 * r) * detail::cosh_pow(0.5 * delta, double(m - 6)));
}

// Majorant for the bare integral from 3r/4 (near-regime derivation):
// 32 / ((m-8) cosh^{m-8}(3r/8)). Requires m > 8. The statement prints
// cosh^{m-8}(3r/4) instead; the proof's 3r/8 is the default.
inline double tail_majorant_near(int m, double r, BoundVariant variant = BoundVariant::proof) {
    if (m <= 8) throw std::invalid_argument("tail_majorant_near: needs m > 8");
    const double arg = variant == BoundVariant::proof ? 0.375 * r : 0.75 * r;
    return 32.0 / (double(m - 8) * detail::cosh_pow(arg, double(m - 8)));
}

// Majorant for the diagonal tail from delta = r with the C / sinh^4(r/4)
// prefactor: 32 C / ((m-8) sinh^4(r/4) cosh^{m-8}(r/2)). Requires m > 8.
inline double tail_majorant_diag(int m, double r, double constant = 1.0) {
    if (m <= 8) throw std::invalid_argument("tail_majorant_diag: needs m > 8");
    return 32.0 * constant /
           (double(m - 8) * detail::sinh4(0.25 * r) * detail::cosh_pow(0.5 * r, double(m - 8)));
}

// Rigorous bound on the discarded tail of a truncated weight-m series:
// everything at distance > delta is controlled by the boundary term
// f(delta) N-bound(delta) plus the integral of f against the packing bound.
struct TruncationCertificate {
    double delta_cut = 0.0;
    double boundary_term = 0.0;
    double tail_integral_term = 0.0;
    double total_tail = 0.0;
    std::optional<double> closed_form_majorant;  // for the integral term; absent when m <= 6
    bool exhaustive = true;
};

inline TruncationCertificate tail_certificate(int m, double delta, double r, double constant,
                                              bool exhaustive = true) {
    if (m < 5) throw std::invalid_argument("tail_certificate: needs weight m >= 5");
    if (!(r > 0.0)) throw std::invalid_argument("tail_certificate: r must be positive");
    if (!(delta > 0.5 * r))
        throw std::invalid_argument("tail_certificate: hypothesis delta > r/2 violated");
    TruncationCertificate cert;
    cert.delta_cut = delta;
    cert.exhaustive = exhaustive;
    cert.boundary_term =
        constant * detail::cosh_pow(0.5 * delta, -double(m)) * counting_bound(delta, r);
    const QuadratureResult q = integrate_tail(
        [m, r](double rho) { return detail::tail_integrand(rho, m, r); }, delta, 1e-8);
    cert.tail_integral_term = constant * q.value / detail::sinh4(0.25 * r);
    cert.total_tail = cert.boundary_term + cert.tail_integral_term;
    if (m > 6) {
        cert.closed_form_majorant = tail_majorant_far(m, delta, r, constant);
        if (cert.tail_integral_term > *cert.closed_form_majorant)
            throw std::logic_error("tail_certificate: quadrature exceeded its majorant");
    }
    return cert;
}

// Off-diagonal kernel bound in the far regime d >= 3r/4. The statement and
// the proof carry different constants in the second and third terms; the
// proof variant is the default.
struct OffDiagonalBound {
    double first = 0.0, second = 0.0, third = 0.0;
    double total() const { return first + second + third; }
};

inline OffDiagonalBound far_kernel_bound(double d, int k, double r, double constant,
                                         BoundVariant variant = BoundVariant::proof) {
    if (k < 3) throw std::invalid_argument("far_kernel_bound: needs k >= 3");
    if (!(r > 0.0)) throw std::invalid_argument("far_kernel_bound: r must be positive");
    if (d < 0.75 * r - 1e-15)
        throw std::invalid_argument("far_kernel_bound: regime requires d >= 3r/4");
    const double m = 3.0 * k;
    const double coth = 1.0 / std::tanh(0.25 * r);
    OffDiagonalBound b;
    b.first = constant / detail::cosh_pow(0.5 * d, m);
    if (variant == BoundVariant::proof) {
        const double coth4 = coth * coth * coth * coth;
        b.second = 16.0 * coth4 * constant / detail::cosh_pow(0.5 * d, m - 4.0);
        b.third = 32.0 * coth4 * constant / ((m - 6.0) * detail::cosh_pow(0.5 * d, m - 6.0));
    } else {
        b.second = 16.0 * coth * constant / detail::cosh_pow(0.5 * d, m);
        b.third = 32.0 * constant / ((m - 6.0) * detail::cosh_pow(0.5 * d, m - 6.0));
    }
    return b;
}

// Off-diagonal kernel bound in the near regime d < 3r/4.
inline OffDiagonalBound near_kernel_bound(double d, int k, double r, double constant,
                                          BoundVariant variant = BoundVariant::proof) {
    if (k < 3) throw std::invalid_argument("near_kernel_bound: needs k >= 3");
    if (!(r > 0.0)) throw std::invalid_argument("near_kernel_bound: r must be positive");
    if (!(d < 0.75 * r)) throw std::invalid_argument("near_kernel_bound: regime requires d < 3r/4");
    const double m = 3.0 * k;
    const double s4 = detail::sinh4(0.25 * r);
    OffDiagonalBound b;
    b.first = constant / detail::cosh_pow(0.5 * d, m);
    const double packing = detail::sinh4(0.625 * r) * constant / (s4 * detail::cosh_pow(0.5 * d, m));
    if (variant == BoundVariant::proof) {
        b.second = packing;
        b.third = 32.0 * constant / ((m - 8.0) * s4 * detail::cosh_pow(0.375 * r, m - 8.0));
    } else {
        b.second = 2.0 * packing;
        b.third = 32.0 * constant / (std::tanh(0.25 * r) * (m - 8.0) * s4 *
                                     detail::cosh_pow(0.75 * r, m - 8.0));
    }
    return b;
}

// Diagonal majorant C~ = C (1 + packing + tail); finite for 3k > 8 and
// decreasing to C as k grows.
struct CTilde {
    double value = 0.0;
    double leading = 0.0;
    double packing_term = 0.0;
    double tail_term = 0.0;
};

inline CTilde c_tilde(int k, double r, double constant) {
    if (k < 3) throw std::invalid_argument("c_tilde: needs k >= 3 (3k > 8)");
    if (!(r > 0.0)) throw std::invalid_argument("c_tilde: r must be positive");
    const double m = 3.0 * k;
    CTilde ct;
    ct.leading = constant;
    ct.packing_term =
        constant * detail::sinh4(0.75 * r) / (detail::sinh4(0.25 * r) * detail::cosh_pow(0.5 * r, m));
    ct.tail_term = 32.0 * constant /
                   ((m - 8.0) * detail::sinh4(0.25 * r) * detail::cosh_pow(0.5 * r, m - 8.0));
    ct.value = ct.leading + ct.packing_term + ct.tail_term;
    return ct;
}

// Envelope form of the off-diagonal decay: the regime-appropriate bound
// re-expressed over k^2 cosh^{-(3k-8)}(d/2). amplitude is the prefactor A
// such that envelope = A k^2 / cosh^{3k-8}(d/2).
struct EnvelopeBound {
    double envelope = 0.0;
    double amplitude = 0.0;
};

inline EnvelopeBound kernel_envelope_bound(double d, int k, double r, double constant,
                                           BoundVariant variant = BoundVariant::proof) {
    const OffDiagonalBound b = d >= 0.75 * r ? far_kernel_bound(d, k, r, constant, variant)
                                             : near_kernel_bound(d, k, r, constant, variant);
    EnvelopeBound e;
    e.envelope = b.total();
    e.amplitude = e.envelope * detail::cosh_pow(0.5 * d, 3.0 * k - 8.0) / (double(k) * double(k));
    return e;
}

// Volume-ratio bound 120961 (C~/C)^3 k^4 log k.
// The log-free k^4 form (conjectured optimal) is reported alongside.
struct RatioBound {
    double value = 0.0;       // with the log factor
    double k4_variant = 0.0;  // without it
};

inline RatioBound volume_ratio_bound(int k, double r, double constant) {
    if (k < 3) throw std::invalid_argument("volume_ratio_bound: needs k >= 3");
    const double ct = c_tilde(k, r, constant).value / constant;
    const double k4 = double(k) * double(k) * double(k) * double(k);
    RatioBound rb;
    rb.k4_variant = 120961.0 * ct * ct * ct * k4;
    rb.value = rb.k4_variant * std::log(double(k));
    return rb;
}

// The z-explicit pre-log step of the same derivation:
//   9 k^2 / pi^2 + (2 C~/C)^3 15120 k^4 / (1-|z|^2).
// Reads the compactness step as an explicit 1/(1-|z|^2) instead of log k.
inline double volume_ratio_pointwise_bound(int k, double r, double constant,
                                           double one_minus_norm_sq) {
    if (!(one_minus_norm_sq > 0.0))
        throw std::invalid_argument("volume_ratio_pointwise_bound: needs 1-|z|^2 > 0");
    const double ct = c_tilde(k, r, constant).value / constant;
    const double k2 = double(k) * double(k);
    const double lead = 9.0 * k2 / (std::numbers::pi * std::numbers::pi);
    const double amp = 2.0 * ct;
    return lead + amp * amp * amp * 15120.0 * k2 * k2 / one_minus_norm_sq;
}

// Gradient bound for the weight-m diagonal series: 6 m C~ / (1-|z|^2)^{m+1}.
inline double kernel_gradient_bound(int m, double one_minus_norm_sq, double ctilde) {
    return 6.0 * double(m) * ctilde /
           real_pow_int(one_minus_norm_sq, static_cast<unsigned>(m + 1));
}

// Mixed-second-derivative bound (24m + 12m(m+1)) C~ / (1-|z|^2)^{m+2}; the
// proof variant carries 12m(m/3+1) in the second constant.
inline double kernel_hessian_bound(int m, double one_minus_norm_sq, double ctilde,
                                   BoundVariant variant = BoundVariant::statement) {
    const double second =
        variant == BoundVariant::statement ? 12.0 * m * (m + 1.0) : 12.0 * m * (m / 3.0 + 1.0);
    return (24.0 * m + second) * ctilde /
           real_pow_int(one_minus_norm_sq, static_cast<unsigned>(m + 2));
}

// Measured-vs-bound record.
struct BoundReport {
    std::string quantity;
    double measured = 0.0;
    double bound = 0.0;
    std::string regime;
    bool satisfied = false;
    double margin = 0.0;
};

inline BoundReport verify(const std::string& quantity, double measured, double bound,
                          const std::string& regime = "") {
    BoundReport rep;
    rep.quantity = quantity;
    rep.measured = measured;
    rep.bound = bound;
    rep.regime = regime;
    rep.margin = bound - measured;
    rep.satisfied = rep.margin >= -1e-12;
    return rep;
}

// Elementary hyperbolic inequalities used by the tail derivations; each
// returns rhs - lhs, nonnegative on the stated domain.
inline double lemma_shift_margin(double rho, double r) {
    return 2.0 * std::cosh(0.25 * r) * std::cosh(0.5 * rho) - std::sinh(0.25 * (2.0 * rho + r));
}

// Valid for rho >= 3r/4.
inline double lemma_double_angle_margin(double rho, double r) {
    return 2.0 * std::sinh(0.5 * rho) * std::cosh(0.5 * rho) - std::sinh(0.25 * (2.0 * rho + r));
}

// Valid for rho >= 3r/4.
inline double lemma_cosh_margin(double rho, double r) {
    const double c = std::cosh(0.5 * rho);
    return 2.0 * c * c - std::cosh(0.25 * (2.0 * rho + r));
}

// Tail integrand exposed for oracle comparisons.
inline double counting_tail_integrand(double rho, int m, double r) {
    return detail::tail_integrand(rho, m, r);
}

}  // namespace picard
