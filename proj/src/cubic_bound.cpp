#include "hcl/cubic_bound.hpp"

#include <cmath>
#include <stdexcept>

namespace hcl {

CubicBound mu_from_gamma(double gamma) {
    if (!std::isfinite(gamma) || gamma < 0.0)
        throw std::invalid_argument("mu_from_gamma: requires finite gamma >= 0");
    const double mu = 0.5 * gamma + std::sqrt(1.0 + 0.25 * gamma * gamma);
    return {gamma, mu};
}

CubicBound bound_from_mu(double mu) {
    if (!std::isfinite(mu) || mu < 1.0)
        throw std::invalid_argument("bound_from_mu: requires finite mu >= 1");
    return {(mu * mu - 1.0) / mu, mu};
}

CubicBound blaschke_bound(int n) {
    if (n < 1)
        throw std::invalid_argument("blaschke_bound: requires n >= 1");
    return bound_from_mu(std::sqrt(static_cast<double>(n)));
}

double lower_boundary_y(double x, const CubicBound& bound) {
    return (1.0 + std::fabs(x)) / bound.mu;
}

double upper_boundary_y(double x, const CubicBound& bound) {
    return bound.mu * (1.0 - std::fabs(x));
}

CornerPoint right_corner(const CubicBound& bound) {
    const double m2 = bound.mu * bound.mu;
    return {(m2 - 1.0) / (m2 + 1.0), 2.0 * bound.mu / (m2 + 1.0)};
}

StateClassification state_bounds_check(double x, double y, const CubicBound& bound, double tol) {
    StateClassification cls;
    const double mu = bound.mu;
    // Signed margins of the four constraints; nonnegative inside.
    const double ul = mu * (1.0 + x) - y; // upper-left:  y <= mu(1+x)
    const double ur = mu * (1.0 - x) - y; // upper-right: y <= mu(1-x)
    const double ll = mu * y - (1.0 - x); // lower-left:  y >= (1-x)/mu
    const double lr = mu * y - (1.0 + x); // lower-right: y >= (1+x)/mu
    const double worst = std::min(std::min(ul, ur), std::min(ll, lr));
    if (worst < -tol) {
        cls.kind = StateClassification::Kind::Outside;
        return cls;
    }
    if (ul <= tol) cls.active.push_back(BoundarySide::UpperLeft);
    if (ur <= tol) cls.active.push_back(BoundarySide::UpperRight);
    if (ll <= tol) cls.active.push_back(BoundarySide::LowerLeft);
    if (lr <= tol) cls.active.push_back(BoundarySide::LowerRight);
    cls.kind = cls.active.empty() ? StateClassification::Kind::Inside
                                  : StateClassification::Kind::OnBoundary;
    return cls;
}

bool in_feasible_set(double x, double y, const CubicBound& bound, double tol) {
    return state_bounds_check(x, y, bound, tol).kind != StateClassification::Kind::Outside;
}

} // namespace hcl
