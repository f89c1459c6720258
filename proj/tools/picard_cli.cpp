// Batch CLI over the complex-ball kernel library: validate lattice files,
// export orbits, sweep kernel values against their closed-form bounds, and
// emit full inequality-audit tables for plotting.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "picard/bergman.hpp"
#include "picard/estimates.hpp"
#include "picard/lattice_io.hpp"

namespace {

using namespace picard;

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_budget = 3;
constexpr int exit_usage = 64;

struct RunConfig {
    std::string command;
    std::string lattice_file;
    std::string points_arg;
    std::vector<int> k_values{3};
    int word_length = 3;
    double constant = 1.0;
    double r_override = 0.0;  // 0 means unset
    std::string variant = "proof";
    std::string out_path;
    std::string format = "csv";
    std::uint64_t seed = 1;
    std::size_t budget = 1'000'000;
};

BoundVariant variant_of(const RunConfig& cfg) {
    return cfg.variant == "statement" ? BoundVariant::statement : BoundVariant::proof;
}

std::vector<BallPoint> resolve_points(const RunConfig& cfg) {
    if (!cfg.points_arg.empty()) {
        if (std::filesystem::exists(cfg.points_arg))
            return parse_points_json(load_json_file(cfg.points_arg));
        if (cfg.points_arg.front() == '[')
            return parse_points_json(json::parse(cfg.points_arg));
        return parse_points_inline(cfg.points_arg);
    }
    // Seeded default sample: the origin plus a few reproducible points.
    std::vector<BallPoint> points{BallPoint{0.0, 0.0}};
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> radius(0.1, 0.55);
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    for (int i = 0; i < 2; ++i)
        points.emplace_back(std::polar(radius(rng), angle(rng)),
                            std::polar(radius(rng), angle(rng)));
    return points;
}

void emit(const RunConfig& cfg, const Table& table) {
    const std::string text = cfg.format == "json" ? table.to_json_text() : table.to_csv();
    if (cfg.out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        atomic_write_file(cfg.out_path, text);
    }
}

std::string config_line(const RunConfig& cfg) {
    std::string ks;
    for (std::size_t i = 0; i < cfg.k_values.size(); ++i)
        ks += (i ? "," : "") + std::to_string(cfg.k_values[i]);
    return "config: command=" + cfg.command + " lattice=" + cfg.lattice_file +
           " k=" + ks + " length=" + std::to_string(cfg.word_length) +
           " constant=" + format_double(cfg.constant) +
           " r=" + (cfg.r_override > 0.0 ? format_double(cfg.r_override) : std::string{"auto"}) +
           " variant=" + cfg.variant + " seed=" + std::to_string(cfg.seed);
}

// Effective packing radius: explicit flag, then the lattice file override,
// then the orbit estimate at the supplied points.
double effective_radius(const RunConfig& cfg, const LatticeSpec& spec,
                        const std::vector<BallPoint>& points) {
    if (cfg.r_override > 0.0) return cfg.r_override;
    if (spec.injectivity_radius_override) return *spec.injectivity_radius_override;
    const auto est = injectivity_radius_estimate(spec, points, cfg.word_length, cfg.budget);
    if (est.value <= 0.0 || est.torsion_suspected)
        throw io_error("displacement estimate degenerate (torsion?); pass --r explicitly");
    return est.value;
}

int cmd_validate(const RunConfig& cfg) {
    const RawLattice raw = load_raw_lattice(cfg.lattice_file);
    Table t;
    t.comments.push_back(config_line(cfg));
    t.comments.push_back("lattice: " + raw.name);
    t.columns = {"generator", "form_residual", "det_residual", "relation_residual", "member"};
    bool all_ok = true;
    for (std::size_t i = 0; i < raw.generators.size(); ++i) {
        const MembershipReport rep = check_membership(raw.generators[i]);
        all_ok = all_ok && rep.passes();
        t.rows.push_back({Cell::of(static_cast<long long>(i + 1)),
                          Cell::of(rep.form_residual), Cell::of(rep.det_residual),
                          Cell::of(rep.relation_residual), Cell::of(rep.passes())});
    }
    emit(cfg, t);
    return all_ok ? exit_ok : exit_validation;
}

int cmd_orbit(const RunConfig& cfg) {
    const LatticeSpec spec = load_lattice(cfg.lattice_file);
    const std::vector<BallPoint> points = resolve_points(cfg);
    const BallPoint z = points.front();
    const BallPoint w = points.size() > 1 ? points[1] : points.front();
    try {
        const Orbit orbit = enumerate(spec, z, w, cfg.word_length, cfg.budget);
        std::optional<InjectivityEstimate> est;
        if (cfg.word_length > 0)
            est = injectivity_radius_estimate(spec, {z}, cfg.word_length, cfg.budget);
        Table t = orbit_table(orbit, est ? &*est : nullptr);
        t.comments.insert(t.comments.begin(), config_line(cfg));
        emit(cfg, t);
        return exit_ok;
    } catch (const orbit_budget_error& e) {
        Table t = orbit_table(e.partial);
        t.comments.insert(t.comments.begin(), config_line(cfg));
        t.comments.push_back("partial: true (budget exceeded, completed length " +
                             std::to_string(e.completed_length) + ")");
        emit(cfg, t);
        return exit_budget;
    }
}

int cmd_kernel(const RunConfig& cfg) {
    const LatticeSpec spec = load_lattice(cfg.lattice_file);
    const std::vector<BallPoint> points = resolve_points(cfg);
    const double r = effective_radius(cfg, spec, points);
    const BoundVariant variant = variant_of(cfg);

    Table t;
    t.comments.push_back(config_line(cfg));
    t.comments.push_back("r_effective: " + format_double(r));
    t.columns = {"z1", "z2", "w1", "w2", "k", "m", "dist", "petersson", "tail_boundary",
                 "tail_integral", "tail_total", "exhaustive", "bound", "satisfied", "margin"};
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i; j < points.size(); ++j) {
            const BallPoint& z = points[i];
            const BallPoint& w = points[j];
            const Orbit orbit = enumerate(spec, z, w, cfg.word_length, cfg.budget);
            const double d = hyp_distance(z, w);
            for (int k : cfg.k_values) {
                const int m = 3 * k;
                const KernelValue kv = kernel_sum(orbit, m, KernelConstant{cfg.constant});
                Cell tb = Cell::of("-"), ti = Cell::of("-"), tt = Cell::of("-");
                const bool exhaustive = std::isfinite(orbit.truncation_radius) && !orbit.pruned;
                if (std::isfinite(orbit.truncation_radius) && orbit.truncation_radius > 0.5 * r) {
                    const auto cert =
                        tail_certificate(m, orbit.truncation_radius, r, cfg.constant, exhaustive);
                    tb = Cell::of(cert.boundary_term);
                    ti = Cell::of(cert.tail_integral_term);
                    tt = Cell::of(cert.total_tail);
                } else if (!std::isfinite(orbit.truncation_radius)) {
                    tb = ti = tt = Cell::of(0.0);  // finite word closure, nothing truncated
                }
                const auto bound = kernel_envelope_bound(d, k, r, cfg.constant, variant);
                const BoundReport rep = verify("kernel", kv.petersson, bound.envelope,
                                               d >= 0.75 * r ? "far" : "near");
                t.rows.push_back({Cell::of(z.z1), Cell::of(z.z2), Cell::of(w.z1), Cell::of(w.z2),
                                  Cell::of(k), Cell::of(m), Cell::of(d), Cell::of(kv.petersson),
                                  tb, ti, tt, Cell::of(exhaustive), Cell::of(rep.bound),
                                  Cell::of(rep.satisfied), Cell::of(rep.margin)});
            }
        }
    }
    emit(cfg, t);
    return exit_ok;
}

int cmd_ratio(const RunConfig& cfg) {
    const LatticeSpec spec = load_lattice(cfg.lattice_file);
    const std::vector<BallPoint> points = resolve_points(cfg);
    const double r = effective_radius(cfg, spec, points);

    Table t;
    t.comments.push_back(config_line(cfg));
    t.comments.push_back("r_effective: " + format_double(r));
    t.columns = {"z1", "z2", "k", "ratio", "bound", "bound_k4", "satisfied", "margin"};
    std::size_t failed = 0, produced = 0;
    for (const BallPoint& z : points) {
        const Orbit orbit = enumerate(spec, z, z, cfg.word_length, cfg.budget);
        for (int k : cfg.k_values) {
            try {
                const MetricRatio mr = volume_ratio(z, k, orbit, KernelConstant{cfg.constant});
                const RatioBound rb = volume_ratio_bound(k, r, cfg.constant);
                const BoundReport rep = verify("volume_ratio", mr.ratio, rb.value, "diagonal");
                t.rows.push_back({Cell::of(z.z1), Cell::of(z.z2), Cell::of(k),
                                  Cell::of(mr.ratio), Cell::of(rb.value),
                                  Cell::of(rb.k4_variant), Cell::of(rep.satisfied),
                                  Cell::of(rep.margin)});
                ++produced;
            } catch (const degenerate_kernel_error&) {
                t.rows.push_back({Cell::of(z.z1), Cell::of(z.z2), Cell::of(k), Cell::of("-"),
                                  Cell::of("-"), Cell::of("-"), Cell::of("degenerate"),
                                  Cell::of("-")});
                ++failed;
            }
        }
    }
    emit(cfg, t);
    return produced > 0 || failed == 0 ? exit_ok : exit_validation;
}

int cmd_bounds(const RunConfig& cfg) {
    const LatticeSpec spec = load_lattice(cfg.lattice_file);
    const std::vector<BallPoint> points = resolve_points(cfg);
    const double r = effective_radius(cfg, spec, points);
    const BoundVariant variant = variant_of(cfg);
    const KernelConstant constant{cfg.constant};

    Table t;
    t.comments.push_back(config_line(cfg));
    t.comments.push_back("r_effective: " + format_double(r));
    t.columns = {"quantity", "regime", "measured", "bound", "satisfied", "margin"};
    const auto push = [&t](const BoundReport& rep) {
        t.rows.push_back({Cell::of(rep.quantity), Cell::of(rep.regime), Cell::of(rep.measured),
                          Cell::of(rep.bound), Cell::of(rep.satisfied), Cell::of(rep.margin)});
    };

    // Counting function vs the packing bound along a delta grid.
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Orbit orbit = enumerate(spec, points[i], points[i], cfg.word_length, cfg.budget);
        const double top = std::isfinite(orbit.truncation_radius)
                               ? orbit.truncation_radius
                               : orbit.elements.back().dist;
        for (int step = 0; step <= 4; ++step) {
            const double delta = top * step / 4.0;
            const auto counted = counting_function(orbit, delta);
            push(verify("counting[p" + std::to_string(i) + ",delta=" + format_double(delta) + "]",
                        double(counted.count), counting_bound(delta, r),
                        counted.exhaustive ? "exhaustive" : "lower-bound"));
        }
    }

    // Tail quadrature vs each closed-form majorant.
    for (int k : cfg.k_values) {
        const int m = 3 * k;
        const auto integrand = [m, r](double rho) { return counting_tail_integrand(rho, m, r); };
        const double far_cut = 1.5 * r;
        const double q_far = integrate_tail(integrand, far_cut, 1e-10).value / detail::sinh4(0.25 * r);
        push(verify("tail_far[m=" + std::to_string(m) + "]", q_far,
                    tail_majorant_far(m, far_cut, r, 1.0), "delta=" + format_double(far_cut)));
        const double q_near = integrate_tail(integrand, 0.75 * r, 1e-10).value;
        push(verify("tail_near[m=" + std::to_string(m) + "]", q_near, tail_majorant_near(m, r),
                    "delta=3r/4"));
        const double q_diag = integrate_tail(integrand, r, 1e-10).value / detail::sinh4(0.25 * r);
        push(verify("tail_diag[m=" + std::to_string(m) + "]", q_diag, tail_majorant_diag(m, r),
                    "delta=r"));
    }

    // Diagonal kernel vs its majorant.
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Orbit orbit = enumerate(spec, points[i], points[i], cfg.word_length, cfg.budget);
        for (int k : cfg.k_values) {
            const KernelValue kv = kernel_sum(orbit, 3 * k, constant);
            push(verify("kernel_diag[p" + std::to_string(i) + ",k=" + std::to_string(k) + "]",
                        kv.petersson, c_tilde(k, r, cfg.constant).value, "diagonal"));
        }
    }

    // Off-diagonal kernel vs the regime bound, on Dirichlet-admissible pairs.
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (i == j) continue;
            const Orbit orbit = enumerate(spec, points[i], points[j], cfg.word_length, cfg.budget);
            if (!dirichlet_membership(points[i], points[j], orbit)) continue;
            const double d = hyp_distance(points[i], points[j]);
            for (int k : cfg.k_values) {
                const KernelValue kv = kernel_sum(orbit, 3 * k, constant);
                const bool far = d >= 0.75 * r;
                const OffDiagonalBound b = far ? far_kernel_bound(d, k, r, cfg.constant, variant)
                                               : near_kernel_bound(d, k, r, cfg.constant, variant);
                push(verify("kernel_offdiag[p" + std::to_string(i) + ",p" + std::to_string(j) +
                                ",k=" + std::to_string(k) + "]",
                            kv.petersson, b.total(), far ? "far" : "near"));
            }
        }
    }

    // Elementary proof inequalities: worst violation over a 10^4 grid.
    {
        double worst1 = -1e300, worst2 = -1e300, worst3 = -1e300;
        for (int i = 0; i < 10000; ++i) {
            const double rho = 12.0 * i / 9999.0;
            worst1 = std::max(worst1, -lemma_shift_margin(rho, r));
            if (rho >= 0.75 * r) {
                worst2 = std::max(worst2, -lemma_double_angle_margin(rho, r));
                worst3 = std::max(worst3, -lemma_cosh_margin(rho, r));
            }
        }
        push(verify("lemma_sinh_shift", worst1, 0.0, "rho>=0"));
        push(verify("lemma_sinh_double", worst2, 0.0, "rho>=3r/4"));
        push(verify("lemma_cosh_double", worst3, 0.0, "rho>=3r/4"));
    }

    // Volume ratio vs the k^4 log k bound.
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Orbit orbit = enumerate(spec, points[i], points[i], cfg.word_length, cfg.budget);
        for (int k : cfg.k_values) {
            try {
                const MetricRatio mr = volume_ratio(points[i], k, orbit, constant);
                push(verify("volume_ratio[p" + std::to_string(i) + ",k=" + std::to_string(k) + "]",
                            mr.ratio, volume_ratio_bound(k, r, cfg.constant).value, "diagonal"));
            } catch (const degenerate_kernel_error&) {
                t.rows.push_back({Cell::of("volume_ratio[p" + std::to_string(i) +
                                           ",k=" + std::to_string(k) + "]"),
                                  Cell::of("diagonal"), Cell::of("-"), Cell::of("-"),
                                  Cell::of("degenerate"), Cell::of("-")});
            }
        }
    }

    emit(cfg, t);
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Complex-ball automorphic kernel toolbox"};
    app.add_option("--command", cfg.command, "validate | orbit | kernel | ratio | bounds")
        ->required();
    app.add_option("--lattice", cfg.lattice_file, "lattice JSON file")->required();
    app.add_option("--k", cfg.k_values, "tensor powers k (weight m = 3k)");
    app.add_option("--length", cfg.word_length, "maximum word length");
    app.add_option("--points", cfg.points_arg, "points file or inline re,im,re,im;... list");
    app.add_option("--constant", cfg.constant, "series constant C");
    app.add_option("--r", cfg.r_override, "injectivity radius override");
    app.add_option("--variant", cfg.variant, "statement | proof constants")
        ->check(CLI::IsMember({"statement", "proof"}));
    app.add_option("--out", cfg.out_path, "output path (stdout when omitted)");
    app.add_option("--format", cfg.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", cfg.seed, "seed for default point sampling");
    app.add_option("--budget", cfg.budget, "orbit element budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (cfg.command == "validate") return cmd_validate(cfg);
        if (cfg.command == "orbit") return cmd_orbit(cfg);
        if (cfg.command == "kernel") return cmd_kernel(cfg);
        if (cfg.command == "ratio") return cmd_ratio(cfg);
        if (cfg.command == "bounds") return cmd_bounds(cfg);
        std::fprintf(stderr, "unknown command '%s'\n", cfg.command.c_str());
        return exit_usage;
    } catch (const json::parse_error& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return exit_usage;
    } catch (const io_error& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return exit_usage;
    } catch (const membership_error& e) {
        std::fprintf(stderr, "validation error: %s (form residual %.3g, det residual %.3g)\n",
                     e.what(), e.report.form_residual, e.report.det_residual);
        return exit_validation;
    } catch (const orbit_budget_error& e) {
        std::fprintf(stderr, "budget error: %s\n", e.what());
        return exit_budget;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
