#include "hcl/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hcl/csv.hpp"

namespace hcl {

namespace {

void require_distance(double d, const char* who) {
    if (!std::isfinite(d) || d < 0.0)
        throw std::domain_error(std::string(who) + ": requires finite d >= 0");
}

// mu <= 1 + 1e-12 routes to the gamma = 0 limit, where every bound equals d.
bool degenerate(const CubicBound& b) { return b.mu <= 1.0 + 1e-12; }

} // namespace

double thm1_upper(double d) {
    require_distance(d, "thm1_upper");
    // log(e^d + sqrt(e^{2d}-1)) = d + log(1 + sqrt(1 - e^{-2d})), overflow-free.
    return d + std::log1p(std::sqrt(-std::expm1(-2.0 * d)));
}

double thm2_upper(double d, const CubicBound& bound) {
    require_distance(d, "thm2_upper");
    if (degenerate(bound)) return d;
    const double mu = bound.mu, m2 = mu * mu;
    const double split = std::log((m2 + 1.0) / (m2 - 1.0));
    if (d <= split) {
        const double E1 = std::expm1(d); // e^d - 1
        return 2.0 * mu / (m2 + 1.0) * std::log1p(0.5 * (m2 + 1.0) * E1);
    }
    // (sqrt(E+1)+sqrt(E-1))/(sqrt(E+1)-sqrt(E-1)) = (sqrt(E+1)+sqrt(E-1))^2/2
    //                                            = E + sqrt(E^2-1).
    const double first =
        std::log((mu - 1.0) / (mu + 1.0)) + d + std::log1p(std::sqrt(-std::expm1(-2.0 * d)));
    return first + 2.0 * mu / (m2 + 1.0) * std::log(2.0 * m2 / (m2 - 1.0));
}

double thm2_relaxed(double d, const CubicBound& bound) {
    require_distance(d, "thm2_relaxed");
    if (degenerate(bound)) return d;
    const double mu = bound.mu, m2 = mu * mu;
    return d + std::log(2.0) - std::log((mu + 1.0) / (mu - 1.0)) +
           2.0 * mu / (m2 + 1.0) * std::log(2.0 * m2 / (m2 - 1.0));
}

double thm3_lower(double d, const CubicBound& bound) {
    require_distance(d, "thm3_lower");
    if (degenerate(bound)) return d;
    const double mu = bound.mu, m2 = mu * mu;
    // (2mu/(m2+1)) log((e^d(m2+1)+m2-1)/(2 m2)), written overflow-free.
    return 2.0 * mu / (m2 + 1.0) *
           (d + std::log((m2 + 1.0 + std::exp(-d) * (m2 - 1.0)) / (2.0 * m2)));
}

double thm3_relaxed(double d, const CubicBound& bound) {
    require_distance(d, "thm3_relaxed");
    if (degenerate(bound)) return d;
    const double mu = bound.mu, m2 = mu * mu;
    return 2.0 * mu / (m2 + 1.0) * (d - std::log(2.0 * m2 / (m2 + 1.0)));
}

std::pair<double, double> thm4_geodesic_bounds(double d, const CubicBound& bound) {
    require_distance(d, "thm4_geodesic_bounds");
    return {d / bound.mu, d * bound.mu};
}

double delta_gap(double T, const CubicBound& bound) {
    require_distance(T, "delta_gap");
    return thm2_upper(T, bound) - T;
}

BoundCurveSample evaluate_bounds(double d, const CubicBound& bound) {
    BoundCurveSample s;
    s.dH = d;
    s.E = std::exp(d);
    s.thm1_upper = thm1_upper(d);
    s.thm2_upper = thm2_upper(d, bound);
    s.thm2_relaxed = thm2_relaxed(d, bound);
    s.thm3_lower = thm3_lower(d, bound);
    s.thm3_relaxed = thm3_relaxed(d, bound);
    s.gamma = bound.gamma;
    s.mu = bound.mu;
    return s;
}

BoundCurveSample blaschke_corollary_bounds(double d, int n) {
    return evaluate_bounds(d, blaschke_bound(n));
}

void write_bounds_csv(std::ostream& os, const std::vector<BoundCurveSample>& rows) {
    os << "dH,E,thm1_upper,thm2_upper,thm2_relaxed,thm3_lower,thm3_relaxed,gamma,mu\n";
    for (const auto& r : rows)
        csv_row(os, {r.dH, r.E, r.thm1_upper, r.thm2_upper, r.thm2_relaxed, r.thm3_lower,
                     r.thm3_relaxed, r.gamma, r.mu});
}

} // namespace hcl
