#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

#include "picard/complex_ball.hpp"

namespace picard {

// Row-major 3x3 complex matrix; just enough arithmetic for SU(2,1) work.
struct Mat3 {
    std::array<cplx, 9> e{};

    cplx& operator()(int r, int c) { return e[static_cast<std::size_t>(3 * r + c)]; }
    const cplx& operator()(int r, int c) const { return e[static_cast<std::size_t>(3 * r + c)]; }

    static Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }

    Mat3 adjoint() const {
        Mat3 m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m(r, c) = std::conj((*this)(c, r));
        return m;
    }

    cplx det() const {
        const Mat3& m = *this;
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }

    double max_abs_diff(const Mat3& o) const {
        double worst = 0.0;
        for (int i = 0; i < 9; ++i)
            worst = std::max(worst, std::abs(e[static_cast<std::size_t>(i)] -
                                             o.e[static_cast<std::size_t>(i)]));
        return worst;
    }

    friend Mat3 operator*(const Mat3& a, const Mat3& b) {
        Mat3 m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                m(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c) + a(r, 2) * b(2, c);
        return m;
    }

    friend Mat3 operator*(cplx s, const Mat3& a) {
        Mat3 m = a;
        for (auto& x : m.e) x *= s;
        return m;
    }
};

// The signature-(2,1) form H = diag(1, 1, -1).
inline Mat3 hyp_form() {
    Mat3 h = Mat3::identity();
    h(2, 2) = -1.0;
    return h;
}

inline Mat3 inverse3(const Mat3& m) {
    const cplx d = m.det();
    if (std::abs(d) < 1e-300) throw std::domain_error("inverse3: singular matrix");
    Mat3 inv;
    inv(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / d;
    inv(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / d;
    inv(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / d;
    inv(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / d;
    inv(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / d;
    inv(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / d;
    inv(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / d;
    inv(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / d;
    inv(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / d;
    return inv;
}

inline constexpr double membership_tolerance = 1e-10;
inline constexpr double reprojection_trigger = 5e-12;

// Residual diagnostics for g* H g = H, det g = 1, and the column/row
// relations obtained by expanding both unitarity identities.
struct MembershipReport {
    double form_residual = 0.0;      // max-norm of g* H g - H
    double det_residual = 0.0;       // |det g - 1|
    double relation_residual = 0.0;  // worst of the six block relations

    bool passes() const {
        return form_residual <= membership_tolerance && det_residual <= membership_tolerance;
    }
};

inline MembershipReport check_membership(const Mat3& g) {
    MembershipReport rep;
    const Mat3 h = hyp_form();
    rep.form_residual = (g.adjoint() * h * g).max_abs_diff(h);
    rep.det_residual = std::abs(g.det() - cplx{1.0, 0.0});

    const auto sq = [](cplx v) { return std::norm(v); };
    // Columns: |a_1i|^2 + |a_2i|^2 - |c_i|^2 = 1, |D|^2 - |b_1|^2 - |b_2|^2 = 1.
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        worst = std::max(worst, std::abs(sq(g(0, i)) + sq(g(1, i)) - sq(g(2, i)) - 1.0));
    worst = std::max(worst, std::abs(sq(g(2, 2)) - sq(g(0, 2)) - sq(g(1, 2)) - 1.0));
    // Rows: |a_i1|^2 + |a_i2|^2 - |b_i|^2 = 1, |D|^2 - |c_1|^2 - |c_2|^2 = 1.
    for (int i = 0; i < 2; ++i)
        worst = std::max(worst, std::abs(sq(g(i, 0)) + sq(g(i, 1)) - sq(g(i, 2)) - 1.0));
    worst = std::max(worst, std::abs(sq(g(2, 2)) - sq(g(2, 0)) - sq(g(2, 1)) - 1.0));
    rep.relation_residual = worst;
    return rep;
}

// One polar-iteration step towards the H-unitary manifold followed by a
// det-1 rescale. For a member g, g^{-1} = H g* H, so the correction
// averages g with H (g*)^{-1} H. The rescale is skipped when the measured
// det deviation sits below its own rounding level (~eps * scale^3);
// rescaling by noise would only displace the matrix.
inline Mat3 reproject_su21(const Mat3& g) {
    const Mat3 h = hyp_form();
    const Mat3 corrected = h * inverse3(g.adjoint()) * h;
    Mat3 avg;
    for (int i = 0; i < 9; ++i)
        avg.e[static_cast<std::size_t>(i)] =
            0.5 * (g.e[static_cast<std::size_t>(i)] + corrected.e[static_cast<std::size_t>(i)]);
    double s = 1.0;
    for (const cplx& x : avg.e) s = std::max(s, std::abs(x));
    const cplx d = avg.det();
    if (std::abs(d - cplx{1.0, 0.0}) <=
        256.0 * std::numeric_limits<double>::epsilon() * s * s * s)
        return avg;
    const cplx scale = std::polar(std::cbrt(std::abs(d)), std::arg(d) / 3.0);
    return (cplx{1.0, 0.0} / scale) * avg;
}

struct membership_error : std::domain_error {
    MembershipReport report;
    membership_error(const std::string& msg, MembershipReport rep)
        : std::domain_error(msg), report(rep) {}
};

struct singular_action_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Residual level resolvable at the entry scale of m; evaluating g* H g
// costs eps * scale^2 per entry and det g costs eps * scale^3, so far-out
// orbit elements cannot certify the absolute 1e-10 criterion.
inline double residual_floor(const Mat3& m) {
    double s = 1.0;
    for (const cplx& x : m.e) s = std::max(s, std::abs(x));
    return std::max(membership_tolerance,
                    1024.0 * std::numeric_limits<double>::epsilon() * s * s * s);
}

// An element of SU(2,1) with the block reading A (2x2), B (2x1), C (1x2),
// D (scalar). Construction validates membership; matrices that drift past
// 5e-12 but stay within the resolvable residual are pulled back by one
// polar step, so long generator products keep their invariants.
class GroupElement {
  public:
    explicit GroupElement(const Mat3& m) : m_(m) {
        MembershipReport rep = check_membership(m_);
        const double tol = residual_floor(m_);
        double drift = std::max(rep.form_residual, rep.det_residual);
        if (drift > reprojection_trigger && drift <= 1e3 * tol) {
            m_ = reproject_su21(m_);
            rep = check_membership(m_);
            drift = std::max(rep.form_residual, rep.det_residual);
        }
        if (drift > tol) throw membership_error("GroupElement: matrix is not in SU(2,1)", rep);
    }

    static GroupElement unchecked(const Mat3& m) { return GroupElement(m, 0); }

    const Mat3& matrix() const { return m_; }

    // Block accessors (1-based, matching the usual a_ij / b_i / c_i naming).
    cplx a(int i, int j) const { return m_(i - 1, j - 1); }
    cplx b(int i) const { return m_(i - 1, 2); }
    cplx c(int i) const { return m_(2, i - 1); }
    cplx d() const { return m_(2, 2); }

    GroupElement inverse() const {
        // Exact for members: g^{-1} = H g* H.
        const Mat3 h = hyp_form();
        return GroupElement::unchecked(h * m_.adjoint() * h);
    }

    friend GroupElement operator*(const GroupElement& x, const GroupElement& y) {
        return GroupElement(x.m_ * y.m_);
    }

  private:
    GroupElement(const Mat3& m, int) : m_(m) {}
    Mat3 m_;
};

// Denominator of the fractional-linear action: c1 z1 + c2 z2 + D.
inline cplx cocycle(const GroupElement& g, const BallPoint& p) {
    return g.c(1) * p.z1 + g.c(2) * p.z2 + g.d();
}

inline BallPoint act(const GroupElement& g, const BallPoint& p) {
    const cplx q = cocycle(g, p);
    if (std::abs(q) < 1e-14)
        throw singular_action_error("act: vanishing denominator (input is not a group member)");
    const cplx n1 = g.a(1, 1) * p.z1 + g.a(1, 2) * p.z2 + g.b(1);
    const cplx n2 = g.a(2, 1) * p.z1 + g.a(2, 2) * p.z2 + g.b(2);
    return BallPoint{n1 / q, n2 / q};
}

// Holomorphic Jacobian of z -> gz; its determinant is cocycle(g,z)^{-3}.
struct ActionJacobian {
    cplx d11, d12, d21, d22;
    cplx det() const { return d11 * d22 - d12 * d21; }
};

inline ActionJacobian action_jacobian(const GroupElement& g, const BallPoint& p) {
    const cplx q = cocycle(g, p);
    const cplx q2 = q * q;
    const cplx n1 = g.a(1, 1) * p.z1 + g.a(1, 2) * p.z2 + g.b(1);
    const cplx n2 = g.a(2, 1) * p.z1 + g.a(2, 2) * p.z2 + g.b(2);
    ActionJacobian j;
    j.d11 = (g.a(1, 1) * q - n1 * g.c(1)) / q2;
    j.d12 = (g.a(1, 2) * q - n1 * g.c(2)) / q2;
    j.d21 = (g.a(2, 1) * q - n2 * g.c(1)) / q2;
    j.d22 = (g.a(2, 2) * q - n2 * g.c(2)) / q2;
    return j;
}

// Hyperbolic translation along the first coordinate axis; translation
// length 2t through the origin.
inline GroupElement boost(double t) {
    Mat3 m = Mat3::identity();
    m(0, 0) = std::cosh(t);
    m(0, 2) = std::sinh(t);
    m(2, 0) = std::sinh(t);
    m(2, 2) = std::cosh(t);
    return GroupElement(m);
}

// diag(e^{i theta}, e^{i theta}, e^{-2 i theta}); fixes the origin and acts
// as multiplication by e^{3 i theta}.
inline GroupElement rotation(double theta) {
    Mat3 m;
    m(0, 0) = std::polar(1.0, theta);
    m(1, 1) = std::polar(1.0, theta);
    m(2, 2) = std::polar(1.0, -2.0 * theta);
    return GroupElement(m);
}

// Diagnostic for the |a_ji| <= 2|D| coefficient bound used in the second
// derivative estimates; returns the worst ratio |a_ji| / (2|D|).
inline double a_entry_ratio(const GroupElement& g) {
    const double den = 2.0 * std::abs(g.d());
    double worst = 0.0;
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) worst = std::max(worst, std::abs(g.a(i, j)) / den);
    return worst;
}

namespace detail {

inline cplx form_inner(const Mat3& h, const std::array<cplx, 3>& u, const std::array<cplx, 3>& v) {
    // <u, v> = v* H u for column vectors u, v.
    cplx acc = 0.0;
    for (int r = 0; r < 3; ++r) {
        cplx hu = 0.0;
        for (int c = 0; c < 3; ++c) hu += h(r, c) * u[static_cast<std::size_t>(c)];
        acc += std::conj(v[static_cast<std::size_t>(r)]) * hu;
    }
    return acc;
}

}  // namespace detail

// Random H-unitary matrix by indefinite Gram-Schmidt: draw complex normal
// vectors, orthonormalize the two positive-norm slots first and the
// negative slot last, rescale by a cube root of the determinant. Draws
// whose self-pairing has the wrong sign or magnitude below 1e-6 are
// rejected; if a near-null earlier slot starves a later one, the whole
// frame is discarded and redrawn.
inline GroupElement random_element(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const Mat3 h = hyp_form();

    const auto draw = [&]() {
        std::array<cplx, 3> v;
        for (auto& x : v) x = cplx{normal(rng), normal(rng)};
        return v;
    };

    std::array<std::array<cplx, 3>, 3> cols;
    const std::array<double, 3> signs{1.0, 1.0, -1.0};
    for (int frame = 0; frame < 64; ++frame) {
        bool frame_ok = true;
        for (int slot = 0; slot < 3 && frame_ok; ++slot) {
            bool slot_ok = false;
            for (int attempt = 0; attempt < 32; ++attempt) {
                std::array<cplx, 3> v = draw();
                for (int j = 0; j < slot; ++j) {
                    const cplx coef = signs[static_cast<std::size_t>(j)] *
                                      detail::form_inner(h, v, cols[static_cast<std::size_t>(j)]);
                    for (int r = 0; r < 3; ++r)
                        v[static_cast<std::size_t>(r)] -=
                            coef * cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
                }
                const double n = detail::form_inner(h, v, v).real();
                if (std::abs(n) < 1e-6) continue;  // degenerate draw
                if (signs[static_cast<std::size_t>(slot)] * n <= 0.0) continue;
                const double scale = 1.0 / std::sqrt(std::abs(n));
                for (auto& x : v) x *= scale;
                cols[static_cast<std::size_t>(slot)] = v;
                slot_ok = true;
                break;
            }
            frame_ok = slot_ok;
        }
        if (!frame_ok) continue;

        Mat3 m;
        for (int c = 0; c < 3; ++c)
            for (int r = 0; r < 3; ++r)
                m(r, c) = cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
        const cplx d = m.det();
        const cplx scale = std::polar(std::cbrt(std::abs(d)), std::arg(d) / 3.0);
        m = (cplx{1.0, 0.0} / scale) * m;
        // Gram-Schmidt rounding is correlated: g*Hg - H cancels to eps while
        // the element sits further from the manifold, which the adjoint side
        // exposes. Two polar steps remove the off-manifold part.
        m = reproject_su21(reproject_su21(m));
        return GroupElement(m);
    }
    throw std::runtime_error("random_element: rejection loop failed to terminate");
}

}  // namespace picard
