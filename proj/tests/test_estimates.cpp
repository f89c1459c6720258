#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "picard/bergman.hpp"
#include "picard/estimates.hpp"
#include "test_support.hpp"

using namespace picard;
using picard::testing::boost_spec;
using picard::testing::random_point;
using picard::testing::two_generator_spec;

TEST_CASE("counting bound values and shape") {
    CHECK(std::abs(counting_bound(0.0, 1.7) - 1.0) < 1e-15);
    CHECK(std::abs(counting_bound(2.0, 2.0) - 278.78025577401553) < 1e-9);
    CHECK_THROWS_AS(counting_bound(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(counting_bound(-0.5, 1.0), std::invalid_argument);

    for (double r : {0.5, 1.0, 2.0}) {
        double prev = 0.0;
        for (double delta = 0.0; delta < 6.0; delta += 0.5) {
            const double b = counting_bound(delta, r);
            CHECK(b >= prev);
            prev = b;
        }
    }
    for (double delta : {1.0, 3.0}) {
        double prev = 1e300;
        for (double r = 0.3; r < 3.0; r += 0.3) {
            const double b = counting_bound(delta, r);
            CHECK(b <= prev);
            prev = b;
        }
    }
}

TEST_CASE("tail certificate") {
    const auto cert = tail_certificate(9, 2.0, 2.0, 1.0);
    CHECK(cert.total_tail == cert.boundary_term + cert.tail_integral_term);
    REQUIRE(cert.closed_form_majorant.has_value());
    CHECK(cert.tail_integral_term <= *cert.closed_form_majorant);

    double prev = 1e300;
    for (double delta : {2.0, 3.0, 4.0, 5.0}) {
        const double tail = tail_certificate(9, delta, 2.0, 1.0).total_tail;
        CHECK(tail < prev);
        prev = tail;
    }

    CHECK_THROWS_AS(tail_certificate(9, 0.9, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(tail_certificate(4, 2.0, 2.0, 1.0), std::invalid_argument);
    // Weight too small for the closed form; quadrature value still present.
    const auto low = tail_certificate(5, 2.0, 2.0, 1.0);
    CHECK_FALSE(low.closed_form_majorant.has_value());
    CHECK(low.total_tail > 0.0);
}

TEST_CASE("certificate dominates the actual boost remainder") {
    // Remainder of the weight-m series over words beyond length L, summed
    // far past numerical exhaustion.
    for (int m : {9, 15}) {
        for (int L : {2, 3, 5}) {
            double actual = 0.0;
            for (int n = L + 1; n < 400; ++n)
                actual += 2.0 * std::exp(-double(m) * std::log(std::cosh(double(n))));
            const double delta = 2.0 * L;
            const auto cert = tail_certificate(m, delta, 2.0, 1.0);
            CHECK(actual <= cert.total_tail);
        }
    }
}

TEST_CASE("tail quadrature stays below each closed-form majorant") {
    for (int m = 9; m <= 60; m += 3) {
        for (double r : {0.5, 1.0, 2.0}) {
            // Far regime, from several cuts at and beyond 3r/4.
            for (double delta : {0.75 * r, 1.0, 2.0, 4.0}) {
                if (delta < 0.75 * r) continue;
                const double q =
                    integrate_tail([m, r](double rho) { return counting_tail_integrand(rho, m, r); },
                                   delta, 1e-10)
                        .value;
                CHECK(q / detail::sinh4(0.25 * r) <= tail_majorant_far(m, delta, r));
            }
            // Near-regime cut at 3r/4 (bare integral, proof constant).
            const double qn =
                integrate_tail([m, r](double rho) { return counting_tail_integrand(rho, m, r); },
                               0.75 * r, 1e-10)
                    .value;
            CHECK(qn <= tail_majorant_near(m, r));
            // Diagonal cut at r with the packing prefactor.
            const double qd =
                integrate_tail([m, r](double rho) { return counting_tail_integrand(rho, m, r); },
                               r, 1e-10)
                    .value;
            CHECK(qd / detail::sinh4(0.25 * r) <= tail_majorant_diag(m, r));
        }
    }
}

TEST_CASE("far kernel bound") {
    CHECK_THROWS_AS(far_kernel_bound(0.1, 3, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(far_kernel_bound(2.0, 2, 1.0, 1.0), std::invalid_argument);

    // All terms decay in cosh powers.
    double prev_total = 1e300;
    for (double d : {2.0, 5.0, 10.0, 20.0, 40.0}) {
        const double total = far_kernel_bound(d, 3, 1.0, 1.0).total();
        CHECK(total < prev_total);
        prev_total = total;
    }
    CHECK(prev_total < 1e-20);

    const auto proof = far_kernel_bound(2.0, 3, 1.0, 1.0, BoundVariant::proof);
    const auto stmt = far_kernel_bound(2.0, 3, 1.0, 1.0, BoundVariant::statement);
    CHECK(proof.total() != stmt.total());
    CHECK(proof.first == stmt.first);
}

TEST_CASE("near kernel bound") {
    CHECK_THROWS_AS(near_kernel_bound(2.0, 3, 1.0, 1.0), std::invalid_argument);

    // Third term does not depend on d.
    const auto a = near_kernel_bound(0.1, 4, 2.0, 1.0);
    const auto b = near_kernel_bound(1.2, 4, 2.0, 1.0);
    CHECK(a.third == b.third);
    CHECK(a.total() != b.total());

    const auto stmt = near_kernel_bound(0.5, 4, 2.0, 1.0, BoundVariant::statement);
    CHECK(std::abs(stmt.second - 2.0 * near_kernel_bound(0.5, 4, 2.0, 1.0).second) < 1e-18);
}

TEST_CASE("diagonal majorant") {
    const CTilde ct = c_tilde(3, 1.0, 1.0);
    CHECK(std::abs(ct.value - 7008.0352343094919) < 1e-8);
    CHECK(ct.value == ct.leading + ct.packing_term + ct.tail_term);
    CHECK_THROWS_AS(c_tilde(2, 1.0, 1.0), std::invalid_argument);

    double prev = 1e300;
    for (int k = 3; k <= 200; ++k) {
        const double v = c_tilde(k, 1.0, 1.0).value;
        CHECK(v >= 1.0);
        CHECK(v <= prev);  // saturates at C once the corrections underflow
        prev = v;
    }
    CHECK(c_tilde(200, 1.0, 1.0).value < c_tilde(3, 1.0, 1.0).value);
    CHECK(c_tilde(200, 1.0, 1.0).value - 1.0 <= 1e-6);

    // Scales linearly in the constant.
    CHECK(std::abs(c_tilde(5, 1.0, 3.0).value - 3.0 * c_tilde(5, 1.0, 1.0).value) < 1e-12);
}

TEST_CASE("envelope bound at zero distance covers the diagonal") {
    std::mt19937_64 rng(229);
    const LatticeSpec spec = boost_spec();
    const double r = 2.0;
    for (int i = 0; i < 10; ++i) {
        const BallPoint z = random_point(rng, 0.7);
        const Orbit orbit = enumerate(spec, z, z, 4);
        for (int k : {3, 5}) {
            const double measured = kernel_sum(orbit, 3 * k, KernelConstant{1.0}).petersson;
            CHECK(measured <= kernel_envelope_bound(0.0, k, r, 1.0).envelope);
            CHECK(measured <= c_tilde(k, r, 1.0).value);
        }
    }
}

TEST_CASE("envelope bound") {
    // Nonincreasing in d in the far regime.
    double prev = 1e300;
    for (double d = 1.5; d <= 8.0; d += 0.5) {
        const double e = kernel_envelope_bound(d, 4, 2.0, 1.0).envelope;
        CHECK(e <= prev);
        prev = e;
    }
    // The amplitude A with envelope = A k^2 cosh^{-(3k-8)}(d/2) stays
    // bounded over the sweep; the k^2 normalization is the whole point.
    double worst = 0.0;
    for (int k = 3; k <= 40; ++k)
        for (double r : {0.5, 1.0, 2.0})
            for (double d : {0.2 * r, 0.75 * r, 1.5, 3.0}) {
                const auto e = kernel_envelope_bound(d, k, r, 1.0);
                CHECK(std::isfinite(e.amplitude));
                worst = std::max(worst, e.amplitude);
            }
    CHECK(worst < 1e6);
}

TEST_CASE("volume ratio bound") {
    const RatioBound rb = volume_ratio_bound(3, 1.0, 1.0);
    CHECK(std::abs(rb.value - 3.7047906334552069e+18) < 1e5);
    CHECK(std::abs(rb.k4_variant - 3.3722457610106184e+18) < 1e5);
    CHECK(rb.value == rb.k4_variant * std::log(3.0));

    // k^4 log k scaling of the bound once C~/C has flattened to 1.
    const double lhs = volume_ratio_bound(160, 1.0, 1.0).value /
                       volume_ratio_bound(80, 1.0, 1.0).value;
    const double rhs = 16.0 * std::log(160.0) / std::log(80.0);
    CHECK(std::abs(lhs - rhs) < 1e-2 * rhs);

    const double pointwise = volume_ratio_pointwise_bound(5, 1.0, 1.0, 0.5);
    CHECK(pointwise > 0.0);
    CHECK_THROWS_AS(volume_ratio_pointwise_bound(5, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("verify reports") {
    const BoundReport ok = verify("q", 1.0, 2.0, "far");
    CHECK(ok.satisfied);
    CHECK(ok.margin == 1.0);
    const BoundReport bad = verify("q", 2.0, 1.0);
    CHECK_FALSE(bad.satisfied);
    CHECK(bad.margin == -1.0);
    CHECK(verify("q", 1.0, 1.0).satisfied);
}

TEST_CASE("elementary proof inequalities on grids") {
    for (double r : {0.5, 1.0, 2.0}) {
        for (int i = 0; i < 10000; ++i) {
            const double rho = 12.0 * i / 9999.0;
            CHECK(lemma_shift_margin(rho, r) >= 0.0);
            if (rho >= 0.75 * r) {
                CHECK(lemma_double_angle_margin(rho, r) >= 0.0);
                CHECK(lemma_cosh_margin(rho, r) >= 0.0);
            }
        }
    }
}

TEST_CASE("measured diagonal kernel stays below the diagonal majorant") {
    std::mt19937_64 rng(211);
    const LatticeSpec spec = boost_spec();
    const double r = 2.0;  // exact displacement lower bound for boosts
    for (int i = 0; i < 50; ++i) {
        const BallPoint z = random_point(rng, 0.75);
        const Orbit orbit = enumerate(spec, z, z, 4);
        for (int k : {3, 5, 10}) {
            const KernelValue kv = kernel_sum(orbit, 3 * k, KernelConstant{1.0});
            CHECK(kv.petersson <= c_tilde(k, r, 1.0).value);
        }
    }
}

TEST_CASE("measured off-diagonal kernel stays below the regime bound") {
    std::mt19937_64 rng(223);
    const LatticeSpec spec = boost_spec();
    const double r = 2.0;
    int far_cases = 0, near_cases = 0;
    for (int i = 0; far_cases < 20 || near_cases < 20; ++i) {
        REQUIRE(i < 500);
        const BallPoint z = random_point(rng, 0.7);
        const BallPoint w = random_point(rng, 0.7);
        const Orbit orbit = enumerate(spec, z, w, 4);
        if (!dirichlet_membership(z, w, orbit)) continue;
        const double d = hyp_distance(z, w);
        for (int k : {3, 5}) {
            const KernelValue kv = kernel_sum(orbit, 3 * k, KernelConstant{1.0});
            const OffDiagonalBound bound = d >= 0.75 * r
                                               ? far_kernel_bound(d, k, r, 1.0)
                                               : near_kernel_bound(d, k, r, 1.0);
            CHECK(kv.petersson <= bound.total());
        }
        (d >= 0.75 * r ? far_cases : near_cases) += 1;
    }
}

TEST_CASE("measured volume ratio stays below the ratio bound") {
    std::mt19937_64 rng(227);
    for (int i = 0; i < 20; ++i) {
        const BallPoint z = random_point(rng, 0.6);
        const LatticeSpec spec = (i % 2 == 0) ? boost_spec() : two_generator_spec();
        const Orbit orbit = enumerate(spec, z, z, 3);
        const double r = 2.0;
        for (int k : {5, 10, 20}) {
            const double measured = volume_ratio(z, k, orbit, KernelConstant{1.0}).ratio;
            CHECK(measured <= volume_ratio_bound(k, r, 1.0).value);
        }
    }
}
