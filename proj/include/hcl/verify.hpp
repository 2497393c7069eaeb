#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "hcl/bellman.hpp"
#include "hcl/control.hpp"
#include "hcl/cubic_bound.hpp"

namespace hcl {

enum class BellmanProblem { FreeMax, BoundedMax, BoundedMin };

const char* problem_name(BellmanProblem p);

struct VerificationGrid {
    std::vector<double> times;        // strictly negative
    std::vector<ControlState> states; // bounded problems: strictly inside the box
    std::vector<double> free_xs;      // free problem: strictly inside [-1, 1]
};

/// Uniform grid in the corner coordinates w = y/(1-x), z = y/(1+x), kept away
/// from the boundary by `margin` (fraction of the coordinate span per side).
VerificationGrid make_interior_grid(const CubicBound& bound, int n_axis, int n_times,
                                    double t_min = -4.0, double t_max = -0.05,
                                    double margin = 0.02);

VerificationGrid make_free_grid(int n_x, int n_times, double t_min = -4.0, double t_max = -0.05);

struct ResidualSample {
    double t, x, y, u, residual;
    std::string region;
    bool pass;
};

struct VerificationOptions {
    int controls = 9;        // control samples per grid point (plus the optimal one)
    double tol = 1e-5;       // residual tolerance, scaled by 1 + |B|
    double fd_step = 1e-7;   // central-difference half-step along the flow
    double corrupt_mu = 0.0; // debug: if > 0, evaluate B with this mu instead (negative control)
};

struct VerificationReport {
    BellmanProblem problem = BellmanProblem::BoundedMax;
    long points = 0;
    long probes = 0;
    long failures = 0;
    double worst_violation = -1e300;   // largest excess over the allowed residual band
    double worst_opt_residual = 0.0;   // largest |residual| at the optimal control
    std::vector<ResidualSample> samples; // one row per grid point, at the optimal control
    std::vector<ResidualSample> worst;   // up to 10 most severe probes
    bool ok() const { return failures == 0; }
};

/// Certifies the dynamic-programming inequality of the chosen value function:
/// the derivative of B along every sampled control flow plus the running cost
/// stays below tol*(1+|B|) for maximization (above -tol*(1+|B|) for
/// minimization), with |residual| <= tol*(1+|B|) along the optimal control.
/// Derivatives are central differences of B along single integrator steps.
VerificationReport verify_bellman(BellmanProblem problem, const CubicBound& bound,
                                  const VerificationGrid& grid,
                                  const VerificationOptions& opts = {});

struct SeamCheck {
    std::string name;
    int points = 0;
    int failures = 0;
    double worst_formula_gap = 0.0; // relative gap between the two regional formulas
    double worst_expr_gap = 0.0;    // relative gap against the stated common expression
    bool ok() const { return failures == 0; }
};

/// Evaluates both regional formulas exactly on each seam of the max problem
/// (three seams) and the min problem (one seam) at random interior states,
/// comparing them with each other and with the stated common seam values.
/// corrupt_mu > 0 evaluates the formulas with that mu while the seam times
/// keep the true geometry — a negative control that must fail.
std::vector<SeamCheck> check_seam_continuity(const CubicBound& bound, int points_per_seam,
                                             double rel_tol = 1e-9, double expr_tol = 1e-10,
                                             std::uint64_t seed = 20240901u,
                                             double corrupt_mu = 0.0);

struct ExtremizerCheck {
    double T = 0.0;
    double closed_max = 0.0, brute_max = 0.0;
    double closed_min = 0.0, brute_min = 0.0;
    double max_value_gap = 0.0, min_value_gap = 0.0;   // |closed - brute|
    double max_cell_distance = 0.0, min_cell_distance = 0.0; // Chebyshev, in cells
    double max_curve_gap = 0.0, min_curve_gap = 0.0;   // |closed - thm2_upper/thm3_lower|

    // Positive when the grid beats the closed-form extremum — impossible if
    // the closed forms are correct (up to rounding).
    double max_overshoot() const { return brute_max - closed_max; }
    double min_overshoot() const { return closed_min - brute_min; }

    /// Fixed-tolerance comparison. The |closed - brute| gap carries the grid's
    /// quadratic sampling error ~ |d2B| (offset*cell)^2 / 2, so a tight
    /// value_tol can fail on resolution alone even when everything is correct.
    bool ok(double value_tol = 1e-6, double curve_tol = 1e-12) const {
        return max_value_gap <= value_tol && min_value_gap <= value_tol &&
               max_cell_distance <= 1.0 + 1e-9 && min_cell_distance <= 1.0 + 1e-9 &&
               max_curve_gap <= curve_tol && min_curve_gap <= curve_tol;
    }

    /// Resolution-aware verdict: the grid never beats the closed forms, the
    /// closed argpoints land within one grid cell of the brute ones, and the
    /// closed values sit exactly on the length-bound curves.
    bool consistent(double rel_tol = 1e-9, double curve_tol = 1e-12) const {
        const double smax = rel_tol * (1.0 + (closed_max < 0 ? -closed_max : closed_max));
        const double smin = rel_tol * (1.0 + (closed_min < 0 ? -closed_min : closed_min));
        return max_overshoot() <= smax && min_overshoot() <= smin &&
               max_cell_distance <= 1.0 + 1e-9 && min_cell_distance <= 1.0 + 1e-9 &&
               max_curve_gap <= curve_tol * (1.0 + (closed_max < 0 ? -closed_max : closed_max)) &&
               min_curve_gap <= curve_tol * (1.0 + (closed_min < 0 ? -closed_min : closed_min));
    }
};

/// Brute-force extremization of the Bellman evaluators over an inclusive
/// n x n grid in (w, z) (boundary included), compared against the closed-form
/// extremizers and the length-bound curves. corrupt_mu > 0 feeds that mu to
/// the closed forms only (negative control).
ExtremizerCheck check_extremizers(const CubicBound& bound, double T, int n = 256,
                                  double corrupt_mu = 0.0);

/// Columns: t,x,y,u,residual,region,pass (one row per grid point).
void write_verification_csv(std::ostream& os, const VerificationReport& report);

} // namespace hcl
