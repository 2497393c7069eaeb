#pragma once

#include <optional>

#include "hcl/cubic_bound.hpp"

namespace hcl {

/// The eight signed boundary margins used throughout the value functions:
///   a_pm = mu*y +- (1-x),  b_pm = mu*y +- (1+x),
///   c_pm = mu*(1-x) +- y,  d_pm = mu*(1+x) +- y.
/// All eight are nonnegative on the feasible box; a_minus, b_minus, c_minus,
/// d_minus vanish on the lower-left, lower-right, upper-right, upper-left
/// boundary segments respectively.
struct AuxQuantities {
    double a_plus, a_minus;
    double b_plus, b_minus;
    double c_plus, c_minus;
    double d_plus, d_minus;
};

AuxQuantities aux_quantities(double x, double y, const CubicBound& bound);

/// Switching thresholds of the maximization problem, as functions of the
/// state. Extended reals: +infinity encodes "never". Always
/// 0 <= t_plus1 <= t_hat <= t_star.
struct RegionThresholds {
    double t_plus1; // time to reach the upper-right boundary under u = +1
    double t_hat;   // region II/III split
    double t_star;  // singular surface: optimal control switches sign here
};

RegionThresholds thresholds_max(double x, double y, const CubicBound& bound);

/// Switching threshold of the minimization problem: time to reach the
/// lower-left boundary under u = -1 (+infinity on the upper-right boundary).
double threshold_min(double x, double y, const CubicBound& bound);

enum class BellmanRegion { I, II, III, IV };

const char* region_name(BellmanRegion r);

struct BellmanEval {
    double value;
    BellmanRegion region;
    std::optional<double> W; // square-root auxiliary, present in regions III/IV
};

/// Value function of the free problem: sup of integral sqrt(u - x^2 + 1) over
/// controls u >= x^2 - 1 steering dalpha from x at time t <= 0 to time 0.
double bellman_free(double t, double x);

/// Maximizing control of the free problem at (t, x), t < 0.
double optimal_u_free(double t, double x);

/// Extremal family of the free problem: states x(t; c) with parameter
/// c in (-1, 1); every member runs from -1 to +1 as t sweeps up to 0.
double euler_lagrange_family(double t, double c);

/// Value function of the state-constrained maximization problem.
BellmanEval bellman_max(double t, double x, double y, const CubicBound& bound);

/// Value function of the state-constrained minimization problem
/// (regions I and II only).
BellmanEval bellman_min(double t, double x, double y, const CubicBound& bound);

/// Optimal feedback controls. The max control is +1 before the singular
/// surface -t = t_star, 0 exactly on it, -1 past it or on the upper-right
/// boundary; the min control is -1 off the lower-left boundary, +1 on it.
double optimal_control_max(double t, double x, double y, const CubicBound& bound);
double optimal_control_min(double t, double x, double y, const CubicBound& bound);

struct Extremum {
    double x, y;
    double value;
};

/// Maximum of bellman_max(-T, ., .) over the feasible box; the argmax lies on
/// the upper-left boundary, with a branch split at T = log((mu^2+1)/(mu^2-1)).
Extremum maximal_B(double T, const CubicBound& bound);

/// Minimum of bellman_min(-T, ., .); the argmin lies on the lower-right boundary.
Extremum minimal_B(double T, const CubicBound& bound);

namespace detail {

/// Individual regional formulas, evaluable on the closure of their regions
/// (stabilized forms; see tests for the verbatim counterparts).
double bellman_max_region(BellmanRegion r, double t, double x, double y, const CubicBound& bound);
double bellman_min_region(BellmanRegion r, double t, double x, double y, const CubicBound& bound);

/// Stated common values on the three max-problem seams and the min-problem seam.
double seam_value_max_I_II(double x, double y, const CubicBound& bound);
double seam_value_max_II_III(double x, double y, const CubicBound& bound);
double seam_value_max_III_IV(double x, double y, const CubicBound& bound);
double seam_value_min_I_II(double x, double y, const CubicBound& bound);

} // namespace detail

} // namespace hcl
