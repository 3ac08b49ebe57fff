// chc: computations with discrete subgroups of PU(n,1) on the complex
// hyperbolic ball. Subcommands: classify, parabolic, delta-exact,
// delta-estimate, density-build, levi-check, orbit-export.
//
// Exit codes: 0 ok, 2 group-file parse error, 3 invalid matrix/generator,
// 4 non-commuting projections in a parabolic analysis, 5 insufficient orbit.
// stdout carries the report, stderr the diagnostics; all randomness comes
// from --seed (or CHC_SEED), which is echoed in the report header.

#include "chc/density.hpp"
#include "chc/groupfile.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>

namespace {

using namespace chc;

std::string fmt(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string fmt_cvec(const VecC& v) {
    std::string out;
    for (int i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += "[" + fmt(v(i).real()) + "," + fmt(v(i).imag()) + "]";
    }
    return out.empty() ? "[]" : out;
}

std::uint64_t resolve_seed(std::uint64_t cli_seed, bool seed_given) {
    if (seed_given) return cli_seed;
    if (const char* env = std::getenv("CHC_SEED")) return std::strtoull(env, nullptr, 10);
    return 1;
}

struct ReportHeader {
    std::string command;
    std::uint64_t seed;
    std::string input;
};

void print_header(const ReportHeader& h) {
    std::cout << "chc-report " << h.command << "\n";
    std::cout << "seed " << h.seed << "\n";
    std::cout << "input " << h.input << "\n";
}

int run_classify(const std::string& path) {
    const GroupFile gf = load_group_file(path);
    const GroupSpec spec = to_group_spec(gf);
    print_header({"classify", 0, path});
    for (std::size_t i = 0; i < spec.generators.size(); ++i) {
        IsometryClass c;
        try {
            c = classify(spec.model, spec.generators[i]);
        } catch (const std::invalid_argument& e) {
            std::cerr << "generator " << i + 1 << ": " << e.what() << "\n";
            return 3;
        }
        std::cout << "generator " << i + 1 << " " << to_string(c) << "\n";
    }
    return 0;
}

int run_parabolic(const std::string& path, std::uint64_t seed, bool delta_only) {
    const GroupFile gf = load_group_file(path);
    const ParabolicGroupInput input = to_parabolic_input(gf);
    const ParabolicAnalysis a = analyze(input, seed);
    if (!a.ok()) {
        const auto& f = *a.failure;
        std::cerr << "projections do not commute: generators " << f.i + 1 << " and "
                  << f.j + 1 << (f.translation_level ? " (translation parts)" : " (pi parts)")
                  << "\n";
        std::cerr << "commutator: c " << fmt(f.commutator.c) << " b "
                  << fmt_cvec(f.commutator.b) << "\n";
        return 4;
    }
    print_header({delta_only ? "delta-exact" : "parabolic", seed, path});
    if (delta_only) {
        std::cout << "delta " << a.delta.str() << "\n";
        std::cout << "l_caveat " << (a.l_caveat ? "true" : "false") << "\n";
        return 0;
    }
    std::cout << "pi_abelian " << (a.pi_abelian ? "true" : "false") << "\n";
    std::cout << "dim_V1 " << a.dim_v1() << "\n";
    std::cout << "dim_W1 " << a.k << "\n";
    std::cout << "totally_real " << (a.totally_real ? "true" : "false") << "\n";
    std::cout << "stein " << (a.stein ? "true" : "false") << "\n";
    std::cout << "l " << a.l << "\n";
    std::cout << "k " << a.k << "\n";
    std::cout << "delta " << a.delta.str() << "\n";
    std::cout << "l_caveat " << (a.l_caveat ? "true" : "false") << "\n";
    std::cout << "lambda " << fmt_cvec(a.lambda) << "\n";
    return 0;
}

int run_delta_estimate(const std::string& path, std::uint64_t seed, int depth,
                       std::size_t max_points, double radius) {
    const GroupFile gf = load_group_file(path);
    const GroupSpec spec = to_group_spec(gf);
    const OrbitCloud cloud = enumerate_orbit(spec, depth, max_points, radius);
    if (cloud.relation_warning) std::cerr << "warning: " << cloud.relation_detail << "\n";
    DeltaEstimate est;
    try {
        est = estimate_delta(cloud);
    } catch (const InsufficientOrbitError& e) {
        std::cerr << e.what() << "\n";
        return 5;
    } catch (const DegenerateOrbitError& e) {
        std::cerr << e.what() << "\n";
        return 5;
    }
    print_header({"delta-estimate", seed, path});
    std::cout << "estimate " << fmt(est.estimate) << "\n";
    std::cout << "shell_estimate " << fmt(est.shell_estimate) << "\n";
    std::cout << "bisection_estimate " << fmt(est.bisection_estimate) << "\n";
    std::cout << "points " << est.points_used << "\n";
    std::cout << "shells " << est.shell_radii.size() << "\n";
    std::cout << "truncation_radius " << fmt(est.truncation_radius) << "\n";
    std::cout << "regression_residual " << fmt(est.regression_residual) << "\n";
    std::cout << "growth_rate " << fmt(est.growth_rate) << "\n";
    std::cout << "depth_cap " << cloud.max_word_length << "\n";
    std::cout << "point_cap " << cloud.max_points << "\n";
    std::cout << "hit_word_cap " << (cloud.hit_word_cap ? "true" : "false") << "\n";
    std::cout << "hit_point_cap " << (cloud.hit_point_cap ? "true" : "false") << "\n";
    return 0;
}

int run_orbit_export(const std::string& path, int depth, std::size_t max_points,
                     double radius) {
    const GroupFile gf = load_group_file(path);
    const GroupSpec spec = to_group_spec(gf);
    const OrbitCloud cloud = enumerate_orbit(spec, depth, max_points, radius);
    if (cloud.relation_warning) std::cerr << "warning: " << cloud.relation_detail << "\n";
    std::cout << orbit_csv(cloud);
    return 0;
}

int run_density_build(const std::string& path, std::uint64_t seed, int depth,
                      std::size_t max_points, double radius, double s_override,
                      const std::string& format) {
    const GroupFile gf = load_group_file(path);
    const GroupSpec spec = to_group_spec(gf);
    const OrbitCloud cloud = enumerate_orbit(spec, depth, max_points, radius);
    if (cloud.relation_warning) std::cerr << "warning: " << cloud.relation_detail << "\n";
    double delta_hat = 0.0;
    bool estimated = false;
    try {
        delta_hat = estimate_delta(cloud).estimate;
        estimated = true;
    } catch (const std::runtime_error& e) {
        std::cerr << "warning: no delta estimate (" << e.what() << "); using s offset only\n";
    }
    const double s = s_override > 0.0 ? s_override : delta_hat + kDensityExponentOffset;
    const DensityApprox density = build_density(cloud, s);
    if (format == "csv") {
        std::cout << "displacement,weight\n";
        for (std::size_t i = 0; i < density.size(); ++i)
            std::cout << fmt(density.displacements[i]) << ',' << fmt(density.weights[i])
                      << "\n";
        return 0;
    }
    print_header({"density-build", seed, path});
    std::cout << "atoms " << density.size() << "\n";
    std::cout << "s " << fmt(s) << "\n";
    std::cout << "delta_hat " << (estimated ? fmt(delta_hat) : std::string("none")) << "\n";
    std::cout << "phi " << fmt(density.phi) << "\n";
    std::cout << "max_displacement " << fmt(cloud.max_displacement) << "\n";
    std::cout << "outer_tail_share "
              << fmt(density.tail_weight_share(0.8 * cloud.max_displacement)) << "\n";
    return 0;
}

int run_levi_check(const std::string& path, std::uint64_t seed, int depth,
                   std::size_t max_points, double radius, double step, int grid_points,
                   int grid_dirs, double probe_radius, double tolerance,
                   const std::string& format) {
    const GroupFile gf = load_group_file(path);
    const GroupSpec spec = to_group_spec(gf);
    if (spec.generators.size() < 2)
        std::cerr << "warning: fewer than two generators; the scenario is elementary\n";
    const OrbitCloud cloud = enumerate_orbit(spec, depth, max_points, radius);
    if (cloud.relation_warning) std::cerr << "warning: " << cloud.relation_detail << "\n";
    double delta_hat = 0.0;
    bool degenerate = false;
    try {
        delta_hat = estimate_delta(cloud).estimate;
    } catch (const std::runtime_error& e) {
        degenerate = true;
        std::cerr << "warning: no delta estimate (" << e.what() << "); threshold uses 0\n";
    }
    const DensityApprox density = build_density(cloud, delta_hat + kDensityExponentOffset);
    const LeviGridResult grid =
        levi_grid(density, grid_points, grid_dirs, step, probe_radius, seed, delta_hat,
                  tolerance);
    if (format == "csv") {
        std::cout << levi_grid_csv(grid);
        return 0;
    }
    print_header({"levi-check", seed, path});
    std::cout << "atoms " << density.size() << "\n";
    std::cout << "delta_hat " << fmt(delta_hat) << "\n";
    std::cout << "s " << fmt(density.s) << "\n";
    std::cout << "grid_points " << grid_points << "\n";
    std::cout << "grid_directions " << grid_dirs << "\n";
    std::cout << "step " << fmt(step) << "\n";
    std::cout << "min_levi_estimate " << fmt(grid.min_estimate) << "\n";
    std::cout << "threshold " << fmt(grid.threshold) << "\n";
    std::cout << "pass " << (grid.pass ? "true" : "false") << "\n";
    std::cout << "warnings "
              << (degenerate || cloud.size() < 2 ? "degenerate_cloud" : "none") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"computations with discrete subgroups of PU(n,1)"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    bool seed_given = false;
    app.add_option("--seed", seed, "random seed (fallback: CHC_SEED env, then 1)")
        ->each([&](const std::string&) { seed_given = true; });

    std::string file;
    int depth = 12;
    std::size_t max_points = 200000;
    double radius = std::numeric_limits<double>::infinity();
    double step = kDefaultLeviStep;
    int grid_points = 20;
    int grid_dirs = 5;
    double probe_radius = 1.0;
    double tolerance = 0.15;
    double s_override = 0.0;
    std::string format = "report";

    const auto add_common = [&](CLI::App* cmd, bool with_caps) {
        cmd->add_option("file", file, "group description file")->required();
        if (with_caps) {
            cmd->add_option("--depth", depth, "max word length");
            cmd->add_option("--max-points", max_points, "orbit size cap");
            cmd->add_option("--radius", radius, "displacement filter");
        }
    };

    auto* c_classify = app.add_subcommand("classify", "classify each generator");
    add_common(c_classify, false);

    auto* c_parabolic = app.add_subcommand("parabolic", "totally-real / Stein analysis");
    add_common(c_parabolic, false);

    auto* c_delta_exact =
        app.add_subcommand("delta-exact", "exact critical exponent of a parabolic group");
    add_common(c_delta_exact, false);

    auto* c_delta_est = app.add_subcommand("delta-estimate", "orbit-growth estimate");
    add_common(c_delta_est, true);

    auto* c_density = app.add_subcommand("density-build", "atomic density summary");
    add_common(c_density, true);
    c_density->add_option("--s", s_override, "density exponent override");
    c_density->add_option("--format", format)->check(CLI::IsMember({"report", "csv"}));

    auto* c_levi = app.add_subcommand("levi-check", "log-mass Levi-form probe grid");
    add_common(c_levi, true);
    c_levi->add_option("--step", step, "stencil step");
    c_levi->add_option("--grid", grid_points, "probe points");
    c_levi->add_option("--dirs", grid_dirs, "directions per point");
    c_levi->add_option("--probe-radius", probe_radius, "probe sampling radius");
    c_levi->add_option("--tol", tolerance, "threshold tolerance");
    c_levi->add_option("--format", format)->check(CLI::IsMember({"report", "csv"}));

    auto* c_export = app.add_subcommand("orbit-export", "orbit cloud as CSV");
    add_common(c_export, true);

    CLI11_PARSE(app, argc, argv);
    const std::uint64_t eff_seed = resolve_seed(seed, seed_given);

    try {
        if (c_classify->parsed()) return run_classify(file);
        if (c_parabolic->parsed()) return run_parabolic(file, eff_seed, false);
        if (c_delta_exact->parsed()) return run_parabolic(file, eff_seed, true);
        if (c_delta_est->parsed())
            return run_delta_estimate(file, eff_seed, depth, max_points, radius);
        if (c_density->parsed())
            return run_density_build(file, eff_seed, depth, max_points, radius, s_override,
                                     format);
        if (c_levi->parsed())
            return run_levi_check(file, eff_seed, depth, max_points, radius, step,
                                  grid_points, grid_dirs, probe_radius, tolerance, format);
        if (c_export->parsed()) return run_orbit_export(file, depth, max_points, radius);
    } catch (const GroupFileError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const NotParabolicFormat& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
