#pragma once

#include <ostream>
#include <utility>
#include <vector>

#include "hcl/cubic_bound.hpp"

namespace hcl {

/// Sharp upper bound on Riemannian length per Hilbert distance d under the
/// convexity constraint alone: log(e^d + sqrt(e^{2d} - 1)).
double thm1_upper(double d);

/// Sharp upper bound under the cubic bound; two branches split at
/// d = log((mu^2+1)/(mu^2-1)). Collapses to d as mu -> 1.
double thm2_upper(double d, const CubicBound& bound);

/// Affine-in-d relaxation of thm2_upper (asymptotically tight as d -> inf).
double thm2_relaxed(double d, const CubicBound& bound);

/// Sharp lower bound under the cubic bound (asymptotic immersions).
double thm3_lower(double d, const CubicBound& bound);

/// Affine-in-d relaxation of thm3_lower (asymptotically tight as d -> inf).
double thm3_relaxed(double d, const CubicBound& bound);

/// Two-sided linear bounds d/mu <= length <= d*mu.
std::pair<double, double> thm4_geodesic_bounds(double d, const CubicBound& bound);

/// Gap thm2_upper(T) - T; strictly increasing in T for mu > 1.
double delta_gap(double T, const CubicBound& bound);

struct BoundCurveSample {
    double dH;
    double E; // e^{dH}
    double thm1_upper;
    double thm2_upper;
    double thm2_relaxed;
    double thm3_lower;
    double thm3_relaxed;
    double gamma;
    double mu;
};

BoundCurveSample evaluate_bounds(double d, const CubicBound& bound);

/// Bounds for the Blaschke metric of an n-dimensional cone section (mu = sqrt n).
BoundCurveSample blaschke_corollary_bounds(double d, int n);

/// Columns: dH,E,thm1_upper,thm2_upper,thm2_relaxed,thm3_lower,thm3_relaxed,gamma,mu.
void write_bounds_csv(std::ostream& os, const std::vector<BoundCurveSample>& rows);

} // namespace hcl
