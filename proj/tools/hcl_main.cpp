#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hcl/bellman.hpp"
#include "hcl/bounds.hpp"
#include "hcl/control.hpp"
#include "hcl/csv.hpp"
#include "hcl/cubic_bound.hpp"
#include "hcl/sharpness.hpp"
#include "hcl/verify.hpp"

namespace {

struct RunConfig {
    double gamma = 0.5;
    std::optional<int> n; // Blaschke mode: gamma = (n-1)/sqrt(n)
    int grid = 64;
    int times = 20;
    int controls = 9;
    int seam_points = 1000;
    double fd_step = 1e-7;
    double tol = 1e-5;
    double step = 1e-4;
    std::uint64_t seed = 20240901u;
    std::string out_dir = ".";
};

hcl::CubicBound resolve_bound(const RunConfig& cfg) {
    if (cfg.n) return hcl::blaschke_bound(*cfg.n);
    return hcl::mu_from_gamma(cfg.gamma);
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name, std::string& path_out) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec); // best effort; open() decides
    const fs::path path = fs::path(cfg.out_dir) / name;
    path_out = path.string();
    std::ofstream os(path);
    return os;
}

double law_arc_control(const hcl::ControlLaw& law) {
    using hcl::LawKind;
    if (law.kind == LawKind::Constant) return law.u;
    if (law.kind == LawKind::BoundarySlide) return hcl::slide_control(law.side);
    return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> merged_arc_controls(const hcl::Trajectory& traj) {
    std::vector<double> us;
    for (const auto& seg : traj.segments) {
        const double u = law_arc_control(seg.law);
        if (std::isnan(u)) continue;
        if (us.empty() || std::fabs(us.back() - u) > 1e-12) us.push_back(u);
    }
    return us;
}

int cmd_bounds(const RunConfig& cfg, double dh_max, int samples, const std::string& out_name) {
    if (samples < 2) {
        std::cerr << "bounds: need at least 2 samples\n";
        return 2;
    }
    if (!(dh_max > 0.0) || !std::isfinite(dh_max)) {
        std::cerr << "bounds: --dh-max must be positive and finite\n";
        return 2;
    }
    const hcl::CubicBound bound = resolve_bound(cfg);
    std::vector<hcl::BoundCurveSample> rows;
    rows.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i)
        rows.push_back(hcl::evaluate_bounds(dh_max * i / (samples - 1), bound));
    std::string path;
    std::ofstream os = open_output(cfg, out_name, path);
    if (!os) {
        std::cerr << "bounds: cannot write " << path << "\n";
        return 2;
    }
    hcl::write_bounds_csv(os, rows);
    if (!os.good()) {
        std::cerr << "bounds: write failed on " << path << "\n";
        return 2;
    }
    std::cout << "bounds gamma=" << hcl::csv_num(bound.gamma) << " mu=" << hcl::csv_num(bound.mu)
              << " rows=" << samples << " out=" << path << "\n";
    return 0;
}

void print_worst(const hcl::VerificationReport& rep) {
    for (const auto& s : rep.worst) {
        std::cout << "worst problem=" << hcl::problem_name(rep.problem)
                  << " t=" << hcl::csv_num(s.t) << " x=" << hcl::csv_num(s.x)
                  << " y=" << hcl::csv_num(s.y) << " u=" << hcl::csv_num(s.u)
                  << " residual=" << hcl::csv_num(s.residual) << " region=" << s.region
                  << " pass=" << (s.pass ? 1 : 0) << "\n";
    }
}

int cmd_verify(const RunConfig& cfg, const std::string& problem, double corrupt_mu) {
    const hcl::CubicBound bound = resolve_bound(cfg);
    bool all_ok = true;

    std::vector<hcl::BellmanProblem> problems;
    if (problem == "all" || problem == "free-max") problems.push_back(hcl::BellmanProblem::FreeMax);
    if (problem == "all" || problem == "bounded-max")
        problems.push_back(hcl::BellmanProblem::BoundedMax);
    if (problem == "all" || problem == "bounded-min")
        problems.push_back(hcl::BellmanProblem::BoundedMin);
    if (problems.empty()) {
        std::cerr << "verify: unknown problem '" << problem << "'\n";
        return 2;
    }

    hcl::VerificationOptions opts;
    opts.controls = cfg.controls;
    opts.tol = cfg.tol;
    opts.fd_step = cfg.fd_step;
    opts.corrupt_mu = corrupt_mu;

    std::vector<hcl::VerificationReport> failed;
    for (hcl::BellmanProblem p : problems) {
        const hcl::VerificationGrid grid =
            p == hcl::BellmanProblem::FreeMax
                ? hcl::make_free_grid(cfg.grid, cfg.times)
                : hcl::make_interior_grid(bound, cfg.grid, cfg.times);
        const hcl::VerificationReport rep = hcl::verify_bellman(p, bound, grid, opts);
        std::cout << "verify problem=" << hcl::problem_name(p)
                  << " gamma=" << hcl::csv_num(bound.gamma) << " mu=" << hcl::csv_num(bound.mu)
                  << " points=" << rep.points << " probes=" << rep.probes
                  << " failures=" << rep.failures
                  << " worst_violation=" << hcl::csv_num(rep.worst_violation)
                  << " worst_opt_residual=" << hcl::csv_num(rep.worst_opt_residual)
                  << " status=" << (rep.ok() ? "pass" : "fail") << "\n";
        std::string path;
        std::ofstream os = open_output(cfg, std::string("verify_") + hcl::problem_name(p) + ".csv",
                                       path);
        if (!os) {
            std::cerr << "verify: cannot write " << path << "\n";
            return 2;
        }
        hcl::write_verification_csv(os, rep);
        if (!rep.ok()) {
            all_ok = false;
            failed.push_back(rep);
        }
    }

    for (const hcl::SeamCheck& chk :
         hcl::check_seam_continuity(bound, cfg.seam_points, 1e-9, 1e-10, cfg.seed, corrupt_mu)) {
        std::cout << "seam name=" << chk.name << " points=" << chk.points
                  << " failures=" << chk.failures
                  << " worst_formula_gap=" << hcl::csv_num(chk.worst_formula_gap)
                  << " worst_expr_gap=" << hcl::csv_num(chk.worst_expr_gap)
                  << " status=" << (chk.ok() ? "pass" : "fail") << "\n";
        if (!chk.ok()) all_ok = false;
    }

    for (double T : {0.5, 1.0, 2.0, 4.0}) {
        const hcl::ExtremizerCheck chk = hcl::check_extremizers(bound, T, 256, corrupt_mu);
        const bool ok = chk.consistent();
        std::cout << "extremizer T=" << hcl::csv_num(T)
                  << " max_value_gap=" << hcl::csv_num(chk.max_value_gap)
                  << " min_value_gap=" << hcl::csv_num(chk.min_value_gap)
                  << " max_overshoot=" << hcl::csv_num(chk.max_overshoot())
                  << " min_overshoot=" << hcl::csv_num(chk.min_overshoot())
                  << " max_cell=" << hcl::csv_num(chk.max_cell_distance)
                  << " min_cell=" << hcl::csv_num(chk.min_cell_distance)
                  << " max_curve_gap=" << hcl::csv_num(chk.max_curve_gap)
                  << " min_curve_gap=" << hcl::csv_num(chk.min_curve_gap)
                  << " status=" << (ok ? "pass" : "fail") << "\n";
        if (!ok) all_ok = false;
    }

    std::cout << "verify overall=" << (all_ok ? "pass" : "fail") << "\n";
    if (!all_ok)
        for (const auto& rep : failed) print_worst(rep);
    return all_ok ? 0 : 1;
}

int cmd_trajectory(const RunConfig& cfg, const std::string& mode, double T,
                   std::optional<double> x0, std::optional<double> y0,
                   const std::string& out_name) {
    const hcl::CubicBound bound = resolve_bound(cfg);
    const bool fixed = mode == "max-fixed" || mode == "min-fixed";
    const bool is_max = mode == "max-fixed" || mode == "max-free";
    if (fixed && (!x0 || !y0)) {
        std::cerr << "trajectory: --x0 and --y0 are required for mode " << mode << "\n";
        return 2;
    }

    hcl::Trajectory traj;
    double bellman = 0.0;
    try {
        if (mode == "max-fixed") {
            traj = hcl::synthesize_max_fixed_start({*x0, *y0}, T, bound, cfg.step);
            bellman = hcl::bellman_max(-T, *x0, *y0, bound).value;
        } else if (mode == "max-free") {
            traj = hcl::synthesize_max_free(T, bound, cfg.step);
            bellman = hcl::maximal_B(T, bound).value;
        } else if (mode == "min-fixed") {
            traj = hcl::synthesize_min_fixed_start({*x0, *y0}, T, bound, cfg.step);
            bellman = hcl::bellman_min(-T, *x0, *y0, bound).value;
        } else if (mode == "min-free") {
            traj = hcl::synthesize_min_free(T, bound, cfg.step);
            bellman = hcl::minimal_B(T, bound).value;
        } else {
            std::cerr << "trajectory: unknown mode '" << mode << "'\n";
            return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "trajectory: " << e.what() << "\n";
        return 2;
    }

    const double cost = traj.running_cost();
    const std::vector<double> arcs = merged_arc_controls(traj);
    std::cout << "trajectory mode=" << mode << " gamma=" << hcl::csv_num(bound.gamma)
              << " T=" << hcl::csv_num(T) << " cost=" << hcl::csv_num(cost)
              << " bellman=" << hcl::csv_num(bellman)
              << " difference=" << hcl::csv_num(cost - bellman) << " arcs=" << arcs.size();
    if (mode == "max-free")
        std::cout << " structure=" << (arcs.size() <= 2 ? "two-arc" : "three-arc");
    std::cout << " controls=";
    for (std::size_t i = 0; i < arcs.size(); ++i)
        std::cout << (i ? "," : "") << hcl::csv_num(arcs[i]);
    std::cout << "\n";

    std::string path;
    const std::string name = out_name.empty() ? "trajectory_" + mode + ".csv" : out_name;
    std::ofstream os = open_output(cfg, name, path);
    if (!os) {
        std::cerr << "trajectory: cannot write " << path << "\n";
        return 2;
    }
    hcl::write_trajectory_csv(os, traj, bound,
                              is_max ? hcl::TrajectoryKind::MaxProblem
                                     : hcl::TrajectoryKind::MinProblem);
    std::cout << "trajectory out=" << path << " samples=" << traj.samples.size() << "\n";
    return 0;
}

int report_sharpness(const std::string& label, const hcl::SharpnessReport& rep,
                     bool waive_strict) {
    for (const auto& c : rep.cases) {
        std::cout << "sharpness problem=" << label << " epsilon=" << hcl::csv_num(c.epsilon)
                  << " length=" << hcl::csv_num(c.length) << " bound=" << hcl::csv_num(c.bound)
                  << " gap=" << hcl::csv_num(c.gap) << " rel_gap=" << hcl::csv_num(c.rel_gap)
                  << " strict=" << (c.strict ? 1 : 0) << " admissible=" << (c.admissible ? 1 : 0)
                  << "\n";
    }
    bool strict_ok = rep.all_strict();
    if (waive_strict) {
        strict_ok = true; // degenerate geometry: gaps collapse to rounding level
        for (const auto& c : rep.cases)
            if (std::fabs(c.gap) > 1e-6) strict_ok = false;
    }
    const bool ok = strict_ok && rep.all_admissible() && rep.gaps_shrink();
    std::cout << "sharpness problem=" << label << " strict=" << (strict_ok ? "yes" : "no")
              << " shrink=" << (rep.gaps_shrink() ? "yes" : "no")
              << " admissible=" << (rep.all_admissible() ? "yes" : "no")
              << " status=" << (ok ? "pass" : "inconclusive") << "\n";
    return ok ? 0 : 1;
}

int cmd_sharpness(const RunConfig& cfg, double T, std::vector<double> epsilons,
                  const std::string& which) {
    const hcl::CubicBound bound = resolve_bound(cfg);
    if (epsilons.empty()) epsilons = {1e-2, 1e-3, 1e-4};
    const bool degenerate = bound.mu <= 1.0 + 1e-12;
    int rc = 0;
    try {
        if (which == "all" || which == "max")
            rc |= report_sharpness("max", hcl::sharpness_max(T, bound, epsilons, cfg.step),
                                   degenerate);
        if (which == "all" || which == "min")
            rc |= report_sharpness("min", hcl::sharpness_min(T, bound, epsilons, cfg.step),
                                   degenerate);
        if (which == "all" || which == "free")
            rc |= report_sharpness("free", hcl::sharpness_free(T, epsilons), false);
    } catch (const std::exception& e) {
        std::cerr << "sharpness: " << e.what() << "\n";
        return 2;
    }
    if (which != "all" && which != "max" && which != "min" && which != "free") {
        std::cerr << "sharpness: unknown problem '" << which << "'\n";
        return 2;
    }
    return rc == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Closed-form length bounds, Bellman certification, optimal trajectory "
                 "synthesis, and sharpness experiments for convexity-constrained profiles"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand
    app.set_config("--config", "", "Flat key=value option file");

    auto* opt_gamma =
        app.add_option("--gamma", cfg.gamma, "Cubic-form bound coefficient (>= 0)")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
    auto* opt_n = app.add_option("--n", cfg.n, "Blaschke mode: dimension n >= 1 sets gamma");
    opt_n->excludes(opt_gamma);
    opt_gamma->excludes(opt_n);
    app.add_option("--grid", cfg.grid, "Verification grid nodes per axis")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--times", cfg.times, "Verification time samples")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--controls", cfg.controls, "Control probes per grid point")
        ->check(CLI::Range(2, 1024))
        ->capture_default_str();
    app.add_option("--seam-points", cfg.seam_points, "Random states per seam check")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--fd-step", cfg.fd_step, "Finite-difference half-step")
        ->capture_default_str();
    app.add_option("--tol", cfg.tol, "Residual tolerance")->capture_default_str();
    app.add_option("--step", cfg.step, "Integrator step size")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    app.add_option("--out-dir", cfg.out_dir, "Output directory")
        ->envname("HCL_OUT_DIR")
        ->capture_default_str();

    // bounds
    double dh_max = 5.0;
    int samples = 200;
    std::string bounds_out = "bounds.csv";
    CLI::App* sc_bounds = app.add_subcommand("bounds", "Emit the length-bound curves as CSV");
    sc_bounds->add_option("--dh-max", dh_max, "Largest Hilbert distance")->capture_default_str();
    sc_bounds->add_option("--samples", samples, "Number of rows")->capture_default_str();
    sc_bounds->add_option("--out", bounds_out, "Output file name")->capture_default_str();

    // verify
    std::string problem = "all";
    double corrupt_mu = 0.0;
    CLI::App* sc_verify =
        app.add_subcommand("verify", "Certify the value functions on a state grid");
    sc_verify
        ->add_option("--problem", problem, "free-max | bounded-max | bounded-min | all")
        ->capture_default_str();
    sc_verify->add_option("--debug-corrupt-mu", corrupt_mu,
                          "Evaluate the value formulas with this (wrong) mu; must fail");

    // trajectory
    std::string mode;
    double T = 1.0;
    std::optional<double> x0, y0;
    std::string traj_out;
    CLI::App* sc_traj = app.add_subcommand("trajectory", "Synthesize an optimal trajectory");
    sc_traj->add_option("--mode", mode, "max-fixed | max-free | min-fixed | min-free")
        ->required();
    sc_traj->add_option("--T", T, "Horizon")->required()->check(CLI::PositiveNumber);
    sc_traj->add_option("--x0", x0, "Initial x (fixed modes)");
    sc_traj->add_option("--y0", y0, "Initial y (fixed modes)");
    sc_traj->add_option("--out", traj_out, "Output file name (default trajectory_<mode>.csv)");

    // sharpness
    double sharp_T = 3.0;
    std::vector<double> epsilons;
    std::string which = "all";
    CLI::App* sc_sharp =
        app.add_subcommand("sharpness", "Near-extremal profiles approaching the bounds");
    sc_sharp->add_option("--T", sharp_T, "Horizon / Hilbert distance")->capture_default_str();
    sc_sharp->add_option("--epsilon", epsilons,
                         "Mollification parameters in (0, 0.1] (default 1e-2 1e-3 1e-4)");
    sc_sharp->add_option("--problem", which, "max | min | free | all")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sc_bounds->parsed()) return cmd_bounds(cfg, dh_max, samples, bounds_out);
        if (sc_verify->parsed()) return cmd_verify(cfg, problem, corrupt_mu);
        if (sc_traj->parsed()) return cmd_trajectory(cfg, mode, T, x0, y0, traj_out);
        if (sc_sharp->parsed()) return cmd_sharpness(cfg, sharp_T, epsilons, which);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
