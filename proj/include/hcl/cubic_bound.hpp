#pragma once

#include <vector>

namespace hcl {

/// Pointwise bound |C| <= 2*gamma*h^{3/2} on the cubic form of an immersion,
/// carried together with the derived root mu of mu^2 - gamma*mu - 1 = 0.
/// gamma and mu determine each other: gamma = (mu^2 - 1)/mu.
struct CubicBound {
    double gamma;
    double mu;
};

/// Builds the bound from gamma >= 0; mu = gamma/2 + sqrt(1 + gamma^2/4).
CubicBound mu_from_gamma(double gamma);

/// Builds the bound from mu >= 1; gamma = (mu^2 - 1)/mu.
CubicBound bound_from_mu(double mu);

/// Bound satisfied by the Blaschke metric of an n-dimensional convex cone
/// section: mu = sqrt(n). n = 1 degenerates to gamma = 0.
CubicBound blaschke_bound(int n);

/// State box of the associated control system: x = first derivative of the
/// log-radial profile, y = sqrt(metric). Feasible states satisfy
/// (1+|x|)/mu <= y <= mu(1-|x|).
double lower_boundary_y(double x, const CubicBound& bound);
double upper_boundary_y(double x, const CubicBound& bound);

/// Right corner of the feasible set, on the unit circle; the left corner is
/// its mirror image (-x, y).
struct CornerPoint {
    double x, y;
};
CornerPoint right_corner(const CubicBound& bound);

enum class BoundarySide { UpperLeft, UpperRight, LowerLeft, LowerRight };

struct StateClassification {
    enum class Kind { Inside, OnBoundary, Outside } kind;
    std::vector<BoundarySide> active; // nonempty iff OnBoundary (two entries at a corner)
};

/// Classifies (x, y) against the feasible box with absolute tolerance tol on
/// each constraint.
StateClassification state_bounds_check(double x, double y, const CubicBound& bound,
                                       double tol = 1e-12);

bool in_feasible_set(double x, double y, const CubicBound& bound, double tol = 0.0);

} // namespace hcl
