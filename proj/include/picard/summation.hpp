#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace picard {

// Pairwise (tree) reduction over a fixed ordering. Deterministic for a given
// input sequence and keeps rounding growth at O(log n) instead of O(n).
template <typename T>
T pairwise_sum(std::span<const T> xs) {
    if (xs.size() <= 8) {
        T acc{};
        for (const T& x : xs) acc += x;
        return acc;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& xs) {
    return pairwise_sum(std::span<const T>(xs.data(), xs.size()));
}

}  // namespace picard
