#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "picard/su21.hpp"

namespace picard {

namespace detail {

// Dedup key: entries rounded to a 1e-9 grid. Group relations reach the same
// matrix through different words; reprojected products drift well below the
// grid size over the word lengths used here.
struct MatKey {
    std::array<std::int64_t, 18> q{};
    bool operator==(const MatKey&) const = default;
};

inline MatKey quantize(const Mat3& m) {
    MatKey key;
    for (int i = 0; i < 9; ++i) {
        const cplx v = m.e[static_cast<std::size_t>(i)];
        const auto snap = [](double x) {
            const double scaled = x * 1e9;
            if (scaled > 9.0e17) return static_cast<std::int64_t>(9e17);
            if (scaled < -9.0e17) return static_cast<std::int64_t>(-9e17);
            return static_cast<std::int64_t>(std::llround(scaled));
        };
        key.q[static_cast<std::size_t>(2 * i)] = snap(v.real());
        key.q[static_cast<std::size_t>(2 * i + 1)] = snap(v.imag());
    }
    return key;
}

struct MatKeyHash {
    std::size_t operator()(const MatKey& k) const {
        std::uint64_t h = 1469598103934665603ull;  // FNV-1a
        for (std::int64_t v : k.q) {
            auto u = static_cast<std::uint64_t>(v);
            for (int b = 0; b < 8; ++b) {
                h ^= (u >> (8 * b)) & 0xffu;
                h *= 1099511628211ull;
            }
        }
        return static_cast<std::size_t>(h);
    }
};

inline bool matrices_coincide(const Mat3& a, const Mat3& b) { return quantize(a) == quantize(b); }

}  // namespace detail

// A user-supplied generator set, assumed (not verified) to generate a
// discrete subgroup. Membership in SU(2,1) is enforced per generator.
struct LatticeSpec {
    std::string name;
    std::vector<GroupElement> generators;
    bool include_inverses = true;
    std::optional<double> injectivity_radius_override;

    LatticeSpec(std::string spec_name, std::vector<GroupElement> gens, bool with_inverses = true,
                std::optional<double> r_override = std::nullopt)
        : name(std::move(spec_name)),
          generators(std::move(gens)),
          include_inverses(with_inverses),
          injectivity_radius_override(r_override) {
        if (generators.empty()) throw std::invalid_argument("LatticeSpec: empty generator list");
        std::unordered_set<detail::MatKey, detail::MatKeyHash> seen;
        for (const auto& g : generators)
            if (!seen.insert(detail::quantize(g.matrix())).second)
                throw std::invalid_argument("LatticeSpec: duplicate generator");
    }
};

// Word encoding: 1-based generator indices, negative for inverses, empty
// for the identity.
struct OrbitElement {
    std::vector<int> word;
    GroupElement g;
    BallPoint image;
    double dist;
};

// Deduplicated words of bounded length with precomputed images of the base
// point and distances to the center, sorted by distance.
struct Orbit {
    LatticeSpec spec;
    BallPoint center;
    BallPoint base;
    int max_word_length = 0;
    std::vector<OrbitElement> elements;  // dist-ascending
    // Distances at or below this value are exhaustively covered under the
    // frontier heuristic: the minimum distance among words first reached at
    // the maximal length. Infinity when the word closure is finite.
    double truncation_radius = std::numeric_limits<double>::infinity();
    // Set when a prune cutoff dropped words; word length does not control
    // distance monotonically, so no count from a pruned orbit is exhaustive.
    bool pruned = false;

    std::vector<double> distances() const {
        std::vector<double> out;
        out.reserve(elements.size());
        for (const auto& e : elements) out.push_back(e.dist);
        return out;
    }

    bool inverse_closed() const {
        std::unordered_set<detail::MatKey, detail::MatKeyHash> keys;
        for (const auto& e : elements) keys.insert(detail::quantize(e.g.matrix()));
        for (const auto& e : elements)
            if (!keys.count(detail::quantize(e.g.inverse().matrix()))) return false;
        return true;
    }
};

struct orbit_budget_error : std::runtime_error {
    Orbit partial;
    int completed_length;
    orbit_budget_error(Orbit o, int done)
        : std::runtime_error("enumerate: element budget exceeded"),
          partial(std::move(o)),
          completed_length(done) {}
};

// Breadth-first enumeration of all products of at most max_word_length
// generators (and inverses when flagged), deduplicated by matrix. A prune
// cutoff drops words whose image lands beyond it; that keeps frontiers
// small but forfeits exhaustiveness, since a kept word may only be
// reachable through a dropped one.
inline Orbit enumerate(const LatticeSpec& spec, const BallPoint& z, const BallPoint& w,
                       int max_word_length, std::size_t budget = 1'000'000,
                       std::optional<double> prune_distance = std::nullopt) {
    if (max_word_length < 0) throw std::invalid_argument("enumerate: negative word length");

    struct Node {
        std::vector<int> word;
        GroupElement g;
        BallPoint image;
        double dist;
    };
    const auto make_node = [&](std::vector<int> word, const GroupElement& g) {
        const BallPoint image = act(g, w);
        return Node{std::move(word), g, image, hyp_distance(z, image)};
    };

    std::vector<std::pair<int, GroupElement>> steps;  // (signed index, matrix)
    for (std::size_t i = 0; i < spec.generators.size(); ++i)
        steps.emplace_back(static_cast<int>(i) + 1, spec.generators[i]);
    if (spec.include_inverses)
        for (std::size_t i = 0; i < spec.generators.size(); ++i)
            steps.emplace_back(-(static_cast<int>(i) + 1), spec.generators[i].inverse());

    std::unordered_set<detail::MatKey, detail::MatKeyHash> seen;
    std::vector<Node> accepted;
    accepted.push_back(make_node({}, GroupElement(Mat3::identity())));
    seen.insert(detail::quantize(Mat3::identity()));
    bool pruned_any = false;

    const auto build = [&](int frontier) {
        Orbit orbit{spec, z, w, max_word_length, {}, std::numeric_limits<double>::infinity(),
                    pruned_any};
        orbit.elements.reserve(accepted.size());
        for (const auto& node : accepted)
            orbit.elements.push_back(OrbitElement{node.word, node.g, node.image, node.dist});
        double radius = std::numeric_limits<double>::infinity();
        bool frontier_nonempty = false;
        for (const auto& e : orbit.elements)
            if (static_cast<int>(e.word.size()) == frontier) {
                frontier_nonempty = true;
                radius = std::min(radius, e.dist);
            }
        if (frontier_nonempty) orbit.truncation_radius = radius;
        std::stable_sort(orbit.elements.begin(), orbit.elements.end(),
                         [](const OrbitElement& a, const OrbitElement& b) { return a.dist < b.dist; });
        return orbit;
    };

    std::size_t level_begin = 0;
    for (int len = 1; len <= max_word_length; ++len) {
        const std::size_t level_end = accepted.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            for (const auto& [index, step] : steps) {
                const GroupElement next = accepted[i].g * step;
                if (!seen.insert(detail::quantize(next.matrix())).second) continue;
                if (accepted.size() >= budget) throw orbit_budget_error(build(len - 1), len - 1);
                std::vector<int> word = accepted[i].word;
                word.push_back(index);
                Node node = make_node(std::move(word), next);
                if (prune_distance && node.dist > *prune_distance) {
                    pruned_any = true;  // stays in 'seen', never expanded
                    continue;
                }
                accepted.push_back(std::move(node));
            }
        }
        level_begin = level_end;
    }
    return build(max_word_length);
}

// Counting-function value N(z, w; delta) over the enumerated orbit. Queries
// beyond the truncation radius return a lower bound, flagged.
struct CountResult {
    std::size_t count = 0;
    bool exhaustive = true;
};

inline CountResult counting_function(const Orbit& orbit, double delta) {
    CountResult res;
    const auto& es = orbit.elements;
    res.count = static_cast<std::size_t>(
        std::upper_bound(es.begin(), es.end(), delta,
                         [](double v, const OrbitElement& e) { return v < e.dist; }) -
        es.begin());
    res.exhaustive = !orbit.pruned && delta <= orbit.truncation_radius;
    return res;
}

struct undefined_estimate_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InjectivityEstimate {
    double value = std::numeric_limits<double>::infinity();
    bool torsion_suspected = false;
};

// Minimum displacement d(z, gamma z) over the sampled points and explored
// non-identity words; an upper bound for the injectivity radius restricted
// to the explored part of the group.
inline InjectivityEstimate injectivity_radius_estimate(const LatticeSpec& spec,
                                                       const std::vector<BallPoint>& samples,
                                                       int max_word_length,
                                                       std::size_t budget = 1'000'000) {
    if (samples.empty())
        throw std::invalid_argument("injectivity_radius_estimate: no sample points");
    InjectivityEstimate est;
    bool found = false;
    const Mat3 id = Mat3::identity();
    for (const auto& s : samples) {
        const Orbit orbit = enumerate(spec, s, s, max_word_length, budget);
        for (const auto& e : orbit.elements) {
            if (detail::matrices_coincide(e.g.matrix(), id)) continue;
            found = true;
            est.value = std::min(est.value, e.dist);
            if (e.dist < 1e-9) est.torsion_suspected = true;
        }
    }
    if (!found)
        throw undefined_estimate_error(
            "injectivity_radius_estimate: no non-identity element explored");
    return est;
}

// Dirichlet-domain predicate: w lies in the open Dirichlet domain centred
// at z when the identity is strictly closer than every other orbit point.
// Ties within 1e-12 count as outside.
inline bool dirichlet_membership(const BallPoint& z, const BallPoint& w, const Orbit& orbit) {
    if (std::abs(orbit.center.z1 - z.z1) > 1e-12 || std::abs(orbit.center.z2 - z.z2) > 1e-12 ||
        std::abs(orbit.base.z1 - w.z1) > 1e-12 || std::abs(orbit.base.z2 - w.z2) > 1e-12)
        throw std::invalid_argument("dirichlet_membership: orbit was built at different points");
    double id_dist = 0.0;
    bool have_id = false;
    double best_other = std::numeric_limits<double>::infinity();
    for (const auto& e : orbit.elements) {
        if (e.word.empty()) {
            id_dist = e.dist;
            have_id = true;
        } else {
            best_other = std::min(best_other, e.dist);
        }
    }
    if (!have_id) throw std::invalid_argument("dirichlet_membership: identity word missing");
    return best_other - id_dist > 1e-12;
}

}  // namespace picard
