#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "picard/summation.hpp"

namespace picard {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

struct quadrature_error : std::runtime_error {
    QuadratureResult best;
    quadrature_error(const std::string& msg, QuadratureResult partial)
        : std::runtime_error(msg), best(partial) {}
};

struct tail_divergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
inline constexpr double gk_nodes[8] = {
    0.000000000000000, 0.405845151377397, 0.741531185599394, 0.949107912342759,
    0.207784955007898, 0.586087235467691, 0.864864423359769, 0.991455371120813};
inline constexpr double gk_gauss_w[8] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870,
    0.0, 0.0, 0.0, 0.0};
inline constexpr double gk_kronrod_w[8] = {
    0.209482141084728, 0.190350578064785, 0.140653259715525, 0.063092092629979,
    0.204432940075298, 0.169004726639267, 0.104790010322250, 0.022935322010529};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename F>
Panel gk15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = gk_gauss_w[0] * f0;
    double k15 = gk_kronrod_w[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = hw * gk_nodes[i];
        const double fi = f(mid + dx) + f(mid - dx);
        g7 += gk_gauss_w[i] * fi;
        k15 += gk_kronrod_w[i] * fi;
    }
    g7 *= hw;
    k15 *= hw;
    const double diff = 200.0 * std::abs(g7 - k15);
    return Panel{a, b, k15, diff * std::sqrt(diff)};
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a, b]; splits the worst
// panel until the summed error estimate drops below tol * max(1, |value|).
template <typename F>
QuadratureResult integrate(F&& f, double a, double b, double tol = 1e-10,
                           int max_panels = 4096) {
    if (a > b) throw std::invalid_argument("integrate: a > b");
    QuadratureResult res;
    if (a == b) return res;

    std::vector<detail::Panel> heap;
    heap.push_back(detail::gk15(f, a, b));
    res.evaluations = 15;
    double total = heap[0].value;
    double err = heap[0].error;
    while (err > tol * std::max(1.0, std::abs(total))) {
        if (static_cast<int>(heap.size()) >= max_panels) {
            res.value = total;
            res.error_estimate = err;
            throw quadrature_error("integrate: panel budget exceeded", res);
        }
        std::pop_heap(heap.begin(), heap.end());
        const detail::Panel worst = heap.back();
        heap.pop_back();
        total -= worst.value;
        err -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        for (const auto& half : {detail::gk15(f, worst.a, mid), detail::gk15(f, mid, worst.b)}) {
            total += half.value;
            err += half.error;
            heap.push_back(half);
            std::push_heap(heap.begin(), heap.end());
        }
        res.evaluations += 30;
        if (err < 0.0) err = 0.0;
    }
    // Re-add panel values in a fixed order for a reproducible result.
    std::sort(heap.begin(), heap.end(),
              [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
    std::vector<double> vals, errs;
    vals.reserve(heap.size());
    errs.reserve(heap.size());
    for (const auto& p : heap) {
        vals.push_back(p.value);
        errs.push_back(p.error);
    }
    res.value = pairwise_sum(std::span<const double>(vals.data(), vals.size()));
    res.error_estimate = pairwise_sum(std::span<const double>(errs.data(), errs.size()));
    return res;
}

// Tail integral over [a, inf) of a positive, eventually decreasing f.
// Dyadic windows of initial width max(1, a); stops once the last window
// contributes below tol of the accumulated value. The error estimate adds a
// geometric extrapolation of the un-integrated remainder.
template <typename F>
QuadratureResult integrate_tail(F&& f, double a, double tol = 1e-10) {
    QuadratureResult res;
    const double w0 = std::max(1.0, a);
    double left = a;
    double width = w0;
    double prev = -1.0;
    int growing = 0;
    int slow = 0;
    const int max_windows = 64;
    for (int j = 0; j < max_windows; ++j) {
        QuadratureResult win = integrate(f, left, left + width, tol);
        res.value += win.value;
        res.error_estimate += win.error_estimate;
        res.evaluations += win.evaluations;
        if (win.value < 0.0)
            throw tail_divergence_error("integrate_tail: integrand not positive");
        if (prev >= 0.0) {
            // Doubling windows may grow once or twice while a rising factor
            // still dominates near the cut; persistence marks divergence.
            growing = win.value > prev ? growing + 1 : 0;
            if (growing >= 3)
                throw tail_divergence_error("integrate_tail: window contributions grow");
            const double q = prev > 0.0 ? win.value / prev : 0.0;
            slow = (q >= 0.98 && q <= 1.02) ? slow + 1 : 0;
            if (slow >= 4)
                throw tail_divergence_error("integrate_tail: window contributions do not decay");
            if (win.value <= tol * res.value) {
                if (q < 1.0) res.error_estimate += win.value * q / (1.0 - q);
                return res;
            }
        }
        prev = win.value;
        left += width;
        width *= 2.0;
    }
    throw quadrature_error("integrate_tail: window budget exceeded", res);
}

// Sum f over a sorted distance list with a deterministic tree reduction;
// realizes integrals against the orbit counting measure as finite sums.
template <typename F>
double stieltjes_sum(F&& f, std::span<const double> distances) {
    std::vector<double> vals;
    vals.reserve(distances.size());
    for (double d : distances) vals.push_back(f(d));
    return pairwise_sum(std::span<const double>(vals.data(), vals.size()));
}

}  // namespace picard
