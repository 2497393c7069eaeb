#pragma once

#include <vector>

#include "hcl/cubic_bound.hpp"

namespace hcl {

struct SharpnessCase {
    double epsilon;    // mollification / interpolation parameter
    double length;     // Riemannian length of the constructed curve
    double bound;      // inequality side being approached
    double gap;        // oriented so that positive means the inequality is strict
    double rel_gap;    // gap / |bound|
    bool strict;       // gap > 0
    bool admissible;   // curve satisfies the pointwise constraints
};

struct SharpnessReport {
    std::vector<SharpnessCase> cases; // one per requested epsilon, in input order

    bool all_strict() const;
    bool all_admissible() const;
    /// Gaps must not grow as epsilon decreases (degenerate pass when every
    /// |gap| is below 1e-9, where shrinkage is lost in rounding).
    bool gaps_shrink() const;
};

/// Mollifies the cost-maximizing trajectory of horizon T with control-blend
/// windows of width epsilon; the curve stays admissible while its length
/// approaches the upper bound from below. Epsilons must lie in (0, 0.1].
SharpnessReport sharpness_max(double T, const CubicBound& bound,
                              const std::vector<double>& epsilons, double step = 1e-4);

/// Same construction around the cost-minimizing trajectory; lengths approach
/// the lower bound from above.
SharpnessReport sharpness_min(double T, const CubicBound& bound,
                              const std::vector<double>& epsilons, double step = 1e-4);

/// Shrinks the extremal slope profile of the unconstrained problem by 1-eps,
/// restoring strict convexity; lengths approach the distance-only upper bound.
SharpnessReport sharpness_free(double d, const std::vector<double>& epsilons);

} // namespace hcl
