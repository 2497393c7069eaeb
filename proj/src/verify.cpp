#include "hcl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "hcl/bounds.hpp"
#include "hcl/csv.hpp"

namespace hcl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::pair<double, double> state_from_wz(double w, double z) {
    const double x = (w - z) / (w + z);
    const double y = 2.0 * w * z / (w + z);
    return {x, y};
}

ControlState rk4_state(const ControlState& s, double u, double h, const CubicBound& bound) {
    auto f = [&](const ControlState& q) {
        auto d = dynamics(q, u, bound);
        return ControlState{d.first, d.second};
    };
    const ControlState k1 = f(s);
    const ControlState k2 = f({s.x + 0.5 * h * k1.x, s.y + 0.5 * h * k1.y});
    const ControlState k3 = f({s.x + 0.5 * h * k2.x, s.y + 0.5 * h * k2.y});
    const ControlState k4 = f({s.x + h * k3.x, s.y + h * k3.y});
    return {s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
            s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y)};
}

// Keeps the ten most severe probes, ordered by decreasing excess.
void note_worst(std::vector<ResidualSample>& worst, std::vector<double>& excesses,
                const ResidualSample& sample, double excess) {
    auto it = std::upper_bound(excesses.begin(), excesses.end(), excess, std::greater<double>());
    const std::size_t pos = static_cast<std::size_t>(it - excesses.begin());
    if (pos >= 10) return;
    excesses.insert(it, excess);
    worst.insert(worst.begin() + static_cast<std::ptrdiff_t>(pos), sample);
    if (excesses.size() > 10) {
        excesses.pop_back();
        worst.pop_back();
    }
}

} // namespace

const char* problem_name(BellmanProblem p) {
    switch (p) {
        case BellmanProblem::FreeMax: return "free-max";
        case BellmanProblem::BoundedMax: return "bounded-max";
        case BellmanProblem::BoundedMin: return "bounded-min";
    }
    return "?";
}

VerificationGrid make_interior_grid(const CubicBound& bound, int n_axis, int n_times,
                                    double t_min, double t_max, double margin) {
    if (n_axis < 1 || n_times < 1) throw std::invalid_argument("grid sizes must be positive");
    if (!(t_min < 0.0) || !(t_max < 0.0) || !(t_min <= t_max))
        throw std::invalid_argument("verification times must satisfy t_min <= t_max < 0");
    VerificationGrid grid;
    grid.times.reserve(static_cast<std::size_t>(n_times));
    for (int k = 0; k < n_times; ++k) {
        const double f = n_times == 1 ? 0.5 : static_cast<double>(k) / (n_times - 1);
        grid.times.push_back(t_min + f * (t_max - t_min));
    }
    const double lo = 1.0 / bound.mu, hi = bound.mu;
    const double span = hi - lo;
    if (span < 1e-12) {
        grid.states.push_back({0.0, 1.0});
        return grid;
    }
    const double a = lo + margin * span, b = hi - margin * span;
    grid.states.reserve(static_cast<std::size_t>(n_axis) * static_cast<std::size_t>(n_axis));
    for (int i = 0; i < n_axis; ++i) {
        const double w = n_axis == 1 ? 0.5 * (a + b) : a + (b - a) * i / (n_axis - 1);
        for (int j = 0; j < n_axis; ++j) {
            const double z = n_axis == 1 ? 0.5 * (a + b) : a + (b - a) * j / (n_axis - 1);
            auto [x, y] = state_from_wz(w, z);
            grid.states.push_back({x, y});
        }
    }
    return grid;
}

VerificationGrid make_free_grid(int n_x, int n_times, double t_min, double t_max) {
    if (n_x < 1 || n_times < 1) throw std::invalid_argument("grid sizes must be positive");
    if (!(t_min < 0.0) || !(t_max < 0.0) || !(t_min <= t_max))
        throw std::invalid_argument("verification times must satisfy t_min <= t_max < 0");
    VerificationGrid grid;
    for (int k = 0; k < n_times; ++k) {
        const double f = n_times == 1 ? 0.5 : static_cast<double>(k) / (n_times - 1);
        grid.times.push_back(t_min + f * (t_max - t_min));
    }
    for (int i = 0; i < n_x; ++i) {
        const double f = n_x == 1 ? 0.5 : static_cast<double>(i) / (n_x - 1);
        grid.free_xs.push_back(-0.98 + f * 1.96);
    }
    return grid;
}

VerificationReport verify_bellman(BellmanProblem problem, const CubicBound& bound,
                                  const VerificationGrid& grid, const VerificationOptions& opts) {
    if (!(opts.fd_step >= 1e-8 && opts.fd_step <= 1e-4))
        throw std::invalid_argument("fd_step must lie in [1e-8, 1e-4]");
    if (opts.controls < 2) throw std::invalid_argument("need at least two control probes");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("tol must be positive");

    const bool corrupted = opts.corrupt_mu > 0.0;
    const CubicBound value_bound = corrupted ? bound_from_mu(opts.corrupt_mu) : bound;
    const bool is_min = problem == BellmanProblem::BoundedMin;
    const double delta = opts.fd_step;

    VerificationReport report;
    report.problem = problem;
    std::vector<double> worst_excesses;

    // Value-function evaluation with the (possibly corrupted) parameter; any
    // evaluation error is reported as a NaN residual and counts as a failure.
    auto free_value = [&](double t, double x) { return bellman_free(t, x); };
    auto bounded_value = [&](double t, const ControlState& s) {
        return is_min ? bellman_min(t, s.x, s.y, value_bound).value
                      : bellman_max(t, s.x, s.y, value_bound).value;
    };

    auto process_point = [&](double t, const ControlState& s, bool free) {
        ++report.points;
        double B0 = kNaN;
        std::string region = "error";
        try {
            if (free) {
                B0 = free_value(t, s.x);
                region = "free";
            } else {
                const BellmanEval ev = is_min ? bellman_min(t, s.x, s.y, value_bound)
                                              : bellman_max(t, s.x, s.y, value_bound);
                B0 = ev.value;
                region = region_name(ev.region);
            }
        } catch (const std::exception&) {
            B0 = kNaN;
        }
        double u_opt;
        if (free) {
            u_opt = optimal_u_free(t, s.x);
        } else {
            u_opt = is_min ? optimal_control_min(t, s.x, s.y, bound)
                           : optimal_control_max(t, s.x, s.y, bound);
        }
        if (!std::isfinite(B0)) {
            ++report.probes;
            ++report.failures;
            ResidualSample sample{t, s.x, free ? kNaN : s.y, u_opt, kNaN, "error", false};
            report.samples.push_back(sample);
            note_worst(report.worst, worst_excesses, sample, kInf);
            report.worst_violation = kInf;
            return;
        }
        const double band = opts.tol * (1.0 + std::fabs(B0));

        auto probe = [&](double u, bool optimal) {
            ++report.probes;
            double residual = kNaN;
            try {
                double b_plus, b_minus, cost;
                if (free) {
                    b_plus = free_value(t + delta, s.x + u * delta);
                    b_minus = free_value(t - delta, s.x - u * delta);
                    cost = std::sqrt(std::max(0.0, u - s.x * s.x + 1.0));
                } else {
                    const ControlState fwd = rk4_state(s, u, delta, bound);
                    const ControlState bwd = rk4_state(s, u, -delta, bound);
                    b_plus = bounded_value(t + delta, fwd);
                    b_minus = bounded_value(t - delta, bwd);
                    cost = s.y;
                }
                residual = (b_plus - b_minus) / (2.0 * delta) + cost;
            } catch (const std::exception&) {
                residual = kNaN;
            }
            // Maximization: residual <= band for every control, equality (up to
            // band) along the optimal one. Minimization mirrors the signs.
            double excess;
            if (!std::isfinite(residual)) {
                excess = kInf;
            } else if (optimal) {
                excess = std::fabs(residual) - band;
            } else {
                excess = (is_min ? -residual : residual) - band;
            }
            const bool pass = excess <= 0.0;
            if (!pass) ++report.failures;
            report.worst_violation = std::max(report.worst_violation, excess);
            ResidualSample sample{t, s.x, free ? kNaN : s.y, u, residual, region, pass};
            note_worst(report.worst, worst_excesses, sample, excess);
            if (optimal) {
                if (std::isfinite(residual))
                    report.worst_opt_residual =
                        std::max(report.worst_opt_residual, std::fabs(residual));
                report.samples.push_back(sample);
            }
        };

        if (free) {
            const double lo = s.x * s.x - 1.0;
            const double step = std::max(1.0, 2.0 * (u_opt - lo)) / (opts.controls - 1);
            for (int k = 0; k < opts.controls; ++k) probe(lo + k * step, false);
        } else {
            for (int k = 0; k < opts.controls; ++k)
                probe(-1.0 + 2.0 * static_cast<double>(k) / (opts.controls - 1), false);
        }
        probe(u_opt, true);
    };

    if (problem == BellmanProblem::FreeMax) {
        for (double t : grid.times)
            for (double x : grid.free_xs) process_point(t, {x, kNaN}, true);
    } else {
        for (double t : grid.times)
            for (const ControlState& s : grid.states) process_point(t, s, false);
    }
    return report;
}

std::vector<SeamCheck> check_seam_continuity(const CubicBound& bound, int points_per_seam,
                                             double rel_tol, double expr_tol, std::uint64_t seed,
                                             double corrupt_mu) {
    const CubicBound value_bound = corrupt_mu > 0.0 ? bound_from_mu(corrupt_mu) : bound;
    const double lo = 1.0 / bound.mu, hi = bound.mu;
    const double span = hi - lo;
    std::vector<SeamCheck> checks(4);
    checks[0].name = "max-I-II";
    checks[1].name = "max-II-III";
    checks[2].name = "max-III-IV";
    checks[3].name = "min-I-II";
    if (span < 1e-9) return checks; // degenerate box: no seams to cross

    std::mt19937_64 rng(seed);
    const double a = lo + 0.02 * span, b = hi - 0.02 * span;
    auto draw_state = [&](bool need_right_half) {
        for (;;) {
            const double w = a + (b - a) * unit_draw(rng);
            const double z = a + (b - a) * unit_draw(rng);
            if (need_right_half && !(w > 1.0 + 1e-6)) continue; // x + y > 1 iff w > 1
            return state_from_wz(w, z);
        }
    };

    struct SeamSpec {
        int idx;
        BellmanRegion left, right;
        bool min_problem;
        bool need_right_half;
    };
    const SeamSpec specs[] = {
        {0, BellmanRegion::I, BellmanRegion::II, false, false},
        {1, BellmanRegion::II, BellmanRegion::III, false, false},
        {2, BellmanRegion::III, BellmanRegion::IV, false, true},
        {3, BellmanRegion::I, BellmanRegion::II, true, false},
    };

    for (const SeamSpec& spec : specs) {
        SeamCheck& chk = checks[static_cast<std::size_t>(spec.idx)];
        for (int p = 0; p < points_per_seam; ++p) {
            auto [x, y] = draw_state(spec.need_right_half);
            double seam_time, stated;
            if (spec.min_problem) {
                seam_time = -threshold_min(x, y, bound);
                stated = detail::seam_value_min_I_II(x, y, value_bound);
            } else {
                const RegionThresholds th = thresholds_max(x, y, bound);
                switch (spec.idx) {
                    case 0:
                        seam_time = -th.t_plus1;
                        stated = detail::seam_value_max_I_II(x, y, value_bound);
                        break;
                    case 1:
                        seam_time = -th.t_hat;
                        stated = detail::seam_value_max_II_III(x, y, value_bound);
                        break;
                    default:
                        seam_time = -th.t_star;
                        stated = detail::seam_value_max_III_IV(x, y, value_bound);
                        break;
                }
            }
            if (!std::isfinite(seam_time)) continue;
            const double left =
                spec.min_problem
                    ? detail::bellman_min_region(spec.left, seam_time, x, y, value_bound)
                    : detail::bellman_max_region(spec.left, seam_time, x, y, value_bound);
            const double right =
                spec.min_problem
                    ? detail::bellman_min_region(spec.right, seam_time, x, y, value_bound)
                    : detail::bellman_max_region(spec.right, seam_time, x, y, value_bound);
            const double scale = 1.0 + 0.5 * (std::fabs(left) + std::fabs(right));
            const double formula_gap = std::fabs(left - right) / scale;
            const double expr_gap =
                std::max(std::fabs(left - stated), std::fabs(right - stated)) / scale;
            ++chk.points;
            chk.worst_formula_gap = std::max(chk.worst_formula_gap, formula_gap);
            chk.worst_expr_gap = std::max(chk.worst_expr_gap, expr_gap);
            if (formula_gap > rel_tol || expr_gap > expr_tol) ++chk.failures;
        }
    }
    return checks;
}

ExtremizerCheck check_extremizers(const CubicBound& bound, double T, int n, double corrupt_mu) {
    if (!(T > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (n < 2) throw std::invalid_argument("need at least a 2x2 grid");
    const CubicBound value_bound = corrupt_mu > 0.0 ? bound_from_mu(corrupt_mu) : bound;
    ExtremizerCheck chk;
    chk.T = T;
    const double lo = 1.0 / bound.mu, hi = bound.mu;
    const double span = hi - lo;
    const Extremum closed_max = maximal_B(T, value_bound);
    const Extremum closed_min = minimal_B(T, value_bound);
    chk.closed_max = closed_max.value;
    chk.closed_min = closed_min.value;
    chk.max_curve_gap = std::fabs(closed_max.value - thm2_upper(T, bound));
    chk.min_curve_gap = std::fabs(closed_min.value - thm3_lower(T, bound));

    if (span < 1e-12) {
        chk.brute_max = bellman_max(-T, 0.0, 1.0, bound).value;
        chk.brute_min = bellman_min(-T, 0.0, 1.0, bound).value;
        chk.max_value_gap = std::fabs(chk.closed_max - chk.brute_max);
        chk.min_value_gap = std::fabs(chk.closed_min - chk.brute_min);
        return chk;
    }

    const double delta = span / (n - 1);
    double best_max = -kInf, best_min = kInf;
    double arg_max_w = lo, arg_max_z = lo, arg_min_w = lo, arg_min_z = lo;
    for (int i = 0; i < n; ++i) {
        const double w = lo + delta * i;
        for (int j = 0; j < n; ++j) {
            const double z = lo + delta * j;
            auto [x, y] = state_from_wz(w, z);
            const double vmax = bellman_max(-T, x, y, bound).value;
            const double vmin = bellman_min(-T, x, y, bound).value;
            if (vmax > best_max) {
                best_max = vmax;
                arg_max_w = w;
                arg_max_z = z;
            }
            if (vmin < best_min) {
                best_min = vmin;
                arg_min_w = w;
                arg_min_z = z;
            }
        }
    }
    chk.brute_max = best_max;
    chk.brute_min = best_min;
    chk.max_value_gap = std::fabs(chk.closed_max - best_max);
    chk.min_value_gap = std::fabs(chk.closed_min - best_min);
    auto cell_distance = [&](const Extremum& e, double w_arg, double z_arg) {
        const double w = e.y / (1.0 - e.x), z = e.y / (1.0 + e.x);
        return std::max(std::fabs(w - w_arg), std::fabs(z - z_arg)) / delta;
    };
    chk.max_cell_distance = cell_distance(closed_max, arg_max_w, arg_max_z);
    chk.min_cell_distance = cell_distance(closed_min, arg_min_w, arg_min_z);
    return chk;
}

void write_verification_csv(std::ostream& os, const VerificationReport& report) {
    os << "t,x,y,u,residual,region,pass\n";
    for (const ResidualSample& s : report.samples) {
        os << csv_num(s.t) << ',' << csv_num(s.x) << ',' << csv_num(s.y) << ','
           << csv_num(s.u) << ',' << csv_num(s.residual) << ',' << s.region << ','
           << (s.pass ? '1' : '0') << '\n';
    }
}

} // namespace hcl
