#pragma once

#include <numbers>
#include <optional>
#include <vector>

#include "picard/orbit.hpp"
#include "picard/summation.hpp"

namespace picard {

// The series constant C_{X,m}; every metric-level quantity is invariant
// under rescaling it.
struct KernelConstant {
    double value = 1.0;
    explicit KernelConstant(double c = 1.0) : value(c) {
        if (!(c > 0.0)) throw std::invalid_argument("KernelConstant: must be positive");
    }
};

struct LedgerEntry {
    double dist;     // d(z, gamma w)
    double modulus;  // Petersson-weighted term modulus, equals C / cosh^m(dist/2)
};

struct KernelValue {
    cplx raw;           // truncated series with unit constant
    double petersson;   // C (1-|z|^2)^{m/2} (1-|w|^2)^{m/2} |raw|
    std::size_t term_count = 0;
    std::optional<std::vector<LedgerEntry>> per_term_ledger;
};

struct degenerate_kernel_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

struct LinearPart {
    cplx n1, n2, q;  // (A p + B, C p + D)
};

inline LinearPart linear_part(const GroupElement& g, const BallPoint& p) {
    return LinearPart{g.a(1, 1) * p.z1 + g.a(1, 2) * p.z2 + g.b(1),
                      g.a(2, 1) * p.z1 + g.a(2, 2) * p.z2 + g.b(2),
                      g.c(1) * p.z1 + g.c(2) * p.z2 + g.d()};
}

inline void require_weight(int m) {
    if (m < 1) throw std::invalid_argument("kernel: weight must be at least 1");
}

inline bool same_point(const BallPoint& a, const BallPoint& b) {
    return std::abs(a.z1 - b.z1) <= 1e-12 && std::abs(a.z2 - b.z2) <= 1e-12;
}

inline void require_diagonal(const Orbit& orbit) {
    if (!same_point(orbit.center, orbit.base))
        throw std::invalid_argument("kernel: diagonal orbit (z == w) required");
}

inline double weight_scale(const BallPoint& z, const BallPoint& w, int m) {
    // (1-|z|^2)^{m/2} (1-|w|^2)^{m/2}
    return real_pow_int(std::sqrt(z.one_minus_norm_sq() * w.one_minus_norm_sq()),
                        static_cast<unsigned>(m));
}

}  // namespace detail

// Single series term 1 / ((-<z~, (gw)~>) conj(Cw+D))^m. The conjugate on the
// cocycle leg keeps the term antiholomorphic in w; on the diagonal this is
// exactly the block-expanded series form (see diagonal_series_term).
inline cplx kernel_term(const GroupElement& g, const BallPoint& z, const BallPoint& w, int m) {
    detail::require_weight(m);
    const BallPoint gw = act(g, w);
    const cplx ip = hyp_inner(lift(z), lift(gw));
    const cplx base = -ip * std::conj(cocycle(g, w));
    return 1.0 / cplx_pow_int(base, static_cast<unsigned>(m));
}

// The same diagonal term computed through the block expansion
// (conj(Cz+D) - conj(Az+B)_1 z1 - conj(Az+B)_2 z2)^{-m}; an independent
// arithmetic route used to cross-check kernel_term.
inline cplx diagonal_series_term(const GroupElement& g, const BallPoint& z, int m) {
    detail::require_weight(m);
    const auto lp = detail::linear_part(g, z);
    const cplx f = std::conj(lp.q) - std::conj(lp.n1) * z.z1 - std::conj(lp.n2) * z.z2;
    return 1.0 / cplx_pow_int(f, static_cast<unsigned>(m));
}

// Truncated kernel series over the orbit, summed in the orbit's distance
// order with a deterministic tree reduction.
inline KernelValue kernel_sum(const Orbit& orbit, int m, KernelConstant constant,
                              bool with_ledger = false) {
    detail::require_weight(m);
    const double scale = detail::weight_scale(orbit.center, orbit.base, m);
    std::vector<cplx> terms;
    terms.reserve(orbit.elements.size());
    KernelValue kv;
    if (with_ledger) kv.per_term_ledger.emplace();
    for (const auto& e : orbit.elements) {
        const cplx t = kernel_term(e.g, orbit.center, orbit.base, m);
        terms.push_back(t);
        if (with_ledger)
            kv.per_term_ledger->push_back(
                LedgerEntry{e.dist, constant.value * scale * std::abs(t)});
    }
    kv.raw = pairwise_sum(std::span<const cplx>(terms.data(), terms.size()));
    kv.petersson = constant.value * scale * std::abs(kv.raw);
    kv.term_count = terms.size();
    return kv;
}

enum class KernelDeriv { dz1, dz2, dz1_bar, dz2_bar };

// First Wirtinger derivatives of the diagonal series, term by term:
//   d/dz_j:    m conj((Az+B)_j) / F^{m+1}
//   d/dzbar_j: m (Az+B)_j / conj(F)^{m+1}
// with F the diagonal denominator base. Exact for the truncated sum in the
// holomorphic directions; the conjugate direction matches the truncated sum
// whenever the orbit is closed under inversion.
inline cplx kernel_grad(const Orbit& orbit, int m, KernelConstant constant, KernelDeriv which) {
    detail::require_weight(m);
    detail::require_diagonal(orbit);
    const BallPoint& z = orbit.center;
    std::vector<cplx> terms;
    terms.reserve(orbit.elements.size());
    const auto mu = static_cast<unsigned>(m);
    for (const auto& e : orbit.elements) {
        const auto lp = detail::linear_part(e.g, z);
        const cplx f = std::conj(lp.q) - std::conj(lp.n1) * z.z1 - std::conj(lp.n2) * z.z2;
        cplx t;
        switch (which) {
            case KernelDeriv::dz1:
                t = double(m) * std::conj(lp.n1) / cplx_pow_int(f, mu + 1);
                break;
            case KernelDeriv::dz2:
                t = double(m) * std::conj(lp.n2) / cplx_pow_int(f, mu + 1);
                break;
            case KernelDeriv::dz1_bar:
                t = double(m) * lp.n1 / cplx_pow_int(std::conj(f), mu + 1);
                break;
            case KernelDeriv::dz2_bar:
                t = double(m) * lp.n2 / cplx_pow_int(std::conj(f), mu + 1);
                break;
        }
        terms.push_back(t);
    }
    return constant.value * pairwise_sum(std::span<const cplx>(terms.data(), terms.size()));
}

// Mixed second derivative d^2/(dz_i dzbar_j) of the diagonal series:
//   m a_ji / conj(F)^{m+1} - m(m+1) (Az+B)_j (c_i - a_1i zbar1 - a_2i zbar2) / conj(F)^{m+2}.
inline cplx kernel_hessian(const Orbit& orbit, int m, KernelConstant constant, int i, int j) {
    detail::require_weight(m);
    detail::require_diagonal(orbit);
    if (i < 1 || i > 2 || j < 1 || j > 2)
        throw std::invalid_argument("kernel_hessian: indices must be 1 or 2");
    const BallPoint& z = orbit.center;
    std::vector<cplx> terms;
    terms.reserve(orbit.elements.size());
    const auto mu = static_cast<unsigned>(m);
    for (const auto& e : orbit.elements) {
        const auto lp = detail::linear_part(e.g, z);
        const cplx fbar = lp.q - lp.n1 * std::conj(z.z1) - lp.n2 * std::conj(z.z2);
        const cplx nj = (j == 1) ? lp.n1 : lp.n2;
        const cplx gi =
            e.g.c(i) - e.g.a(1, i) * std::conj(z.z1) - e.g.a(2, i) * std::conj(z.z2);
        const cplx first = double(m) * e.g.a(j, i) / cplx_pow_int(fbar, mu + 1);
        const cplx second =
            double(m) * double(m + 1) * nj * gi / cplx_pow_int(fbar, mu + 2);
        terms.push_back(first - second);
    }
    return constant.value * pairwise_sum(std::span<const cplx>(terms.data(), terms.size()));
}

struct BergmanMatrix {
    cplx m11, m12, m21, m22;
    cplx det() const { return m11 * m22 - m12 * m21; }
};

// Diagnostic decomposition of the volume-form ratio. The ratio is computed
// from the 2x2 determinant; T1..T4 regroup the same expansion (T1 the pure
// k^2 part, T2/T3 the mixed groups, T4 the cubic cross terms recomputed
// canonically from the determinant). det(m) and (T1+T2+T3+T4)/pi^2 agree.
struct MetricRatio {
    BergmanMatrix m;
    cplx t1, t2, t3, t4;
    double ratio = 0.0;
};

namespace detail {

struct DiagonalDerivatives {
    cplx b;                    // C * raw
    cplx g1, g2, g1b, g2b;     // first derivatives, scaled by C
    cplx h11, h12, h21, h22;   // mixed second derivatives h_ij = d^2/(dz_i dzbar_j)
};

inline DiagonalDerivatives diagonal_derivatives(const Orbit& orbit, int m,
                                                KernelConstant constant) {
    DiagonalDerivatives d;
    d.b = constant.value * kernel_sum(orbit, m, constant).raw;
    if (d.b.real() <= 0.0)
        throw degenerate_kernel_error("bergman_matrix: nonpositive diagonal kernel value");
    d.g1 = kernel_grad(orbit, m, constant, KernelDeriv::dz1);
    d.g2 = kernel_grad(orbit, m, constant, KernelDeriv::dz2);
    d.g1b = kernel_grad(orbit, m, constant, KernelDeriv::dz1_bar);
    d.g2b = kernel_grad(orbit, m, constant, KernelDeriv::dz2_bar);
    d.h11 = kernel_hessian(orbit, m, constant, 1, 1);
    d.h12 = kernel_hessian(orbit, m, constant, 1, 2);
    d.h21 = kernel_hessian(orbit, m, constant, 2, 1);
    d.h22 = kernel_hessian(orbit, m, constant, 2, 2);
    return d;
}

struct HypHessian {
    cplx h11, h12, h21, h22;  // d^2 (-log(1-|z|^2)) / dz_i dzbar_j
};

inline HypHessian hyp_hessian(const BallPoint& z) {
    const double u = z.one_minus_norm_sq();
    const double u2 = u * u;
    HypHessian h;
    h.h11 = (u + std::norm(z.z1)) / u2;
    h.h22 = (u + std::norm(z.z2)) / u2;
    h.h12 = z.z2 * std::conj(z.z1) / u2;
    h.h21 = z.z1 * std::conj(z.z2) / u2;
    return h;
}

inline BergmanMatrix assemble_matrix(const DiagonalDerivatives& d, const HypHessian& hh, int k) {
    const cplx b2 = d.b * d.b;
    const double w = 3.0 * k;
    const double inv_pi = 1.0 / std::numbers::pi;
    BergmanMatrix mm;
    mm.m11 = inv_pi * (-w * hh.h11 + d.h11 / d.b - d.g1 * d.g1b / b2);
    mm.m12 = inv_pi * (-w * hh.h12 + d.h12 / d.b - d.g1 * d.g2b / b2);
    mm.m21 = inv_pi * (-w * hh.h21 + d.h21 / d.b - d.g2 * d.g1b / b2);
    mm.m22 = inv_pi * (-w * hh.h22 + d.h22 / d.b - d.g2 * d.g2b / b2);
    return mm;
}

}  // namespace detail

// Entries of the Bergman volume determinant at weight m = 3k:
//   m_ij = ( -3k hhat_ij + d^2 log B / (dz_i dzbar_j) ) / pi
// where hhat is the complex Hessian of -log(1-|z|^2). Homogeneous of degree
// zero in the kernel constant.
inline BergmanMatrix bergman_matrix(const BallPoint& z, int k, const Orbit& orbit,
                                    KernelConstant constant) {
    if (k < 1) throw std::invalid_argument("bergman_matrix: k must be positive");
    detail::require_diagonal(orbit);
    if (!detail::same_point(orbit.center, z))
        throw std::invalid_argument("bergman_matrix: orbit not centred at z");
    const auto d = detail::diagonal_derivatives(orbit, 3 * k, constant);
    return detail::assemble_matrix(d, detail::hyp_hessian(z), k);
}

// Ratio of the Bergman volume form to the hyperbolic one at z:
//   ratio = (1-|z|^2)^3 |det m| = (1-|z|^2)^3 |T1+T2+T3+T4| / pi^2.
inline MetricRatio volume_ratio(const BallPoint& z, int k, const Orbit& orbit,
                                KernelConstant constant) {
    if (k < 1) throw std::invalid_argument("volume_ratio: k must be positive");
    detail::require_diagonal(orbit);
    if (!detail::same_point(orbit.center, z))
        throw std::invalid_argument("volume_ratio: orbit not centred at z");
    const auto d = detail::diagonal_derivatives(orbit, 3 * k, constant);
    const auto hh = detail::hyp_hessian(z);
    const double u = z.one_minus_norm_sq();
    const double u3 = u * u * u;
    const cplx b2 = d.b * d.b;
    const cplx b3 = b2 * d.b;
    const double w = 3.0 * k;

    MetricRatio out;
    out.m = detail::assemble_matrix(d, hh, k);
    out.ratio = u3 * std::abs(out.m.det());

    out.t1 = 9.0 * double(k) * double(k) / u3;
    out.t2 = -w / d.b *
             (hh.h11 * d.h22 + hh.h22 * d.h11 - hh.h12 * d.h21 - hh.h21 * d.h12);
    out.t3 = w / b2 *
                 (hh.h11 * d.g2 * d.g2b + hh.h22 * d.g1 * d.g1b - hh.h12 * d.g2 * d.g1b -
                  hh.h21 * d.g1 * d.g2b) +
             (d.h11 * d.h22 - d.h12 * d.h21) / b2;
    out.t4 = (-d.h11 * d.g2 * d.g2b - d.h22 * d.g1 * d.g1b + d.h12 * d.g2 * d.g1b +
              d.h21 * d.g1 * d.g2b) /
             b3;
    return out;
}

}  // namespace picard
