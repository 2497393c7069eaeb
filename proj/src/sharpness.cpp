#include "hcl/sharpness.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "hcl/bellman.hpp"
#include "hcl/bounds.hpp"
#include "hcl/control.hpp"
#include "hcl/immersion.hpp"
#include "hcl/quadrature.hpp"

namespace hcl {

namespace {

void require_epsilons(const std::vector<double>& epsilons) {
    if (epsilons.empty()) throw std::invalid_argument("sharpness: need at least one epsilon");
    for (double e : epsilons)
        if (!(e > 0.0) || !(e <= 0.1))
            throw std::invalid_argument("sharpness: epsilons must lie in (0, 0.1]");
}

SharpnessReport mollified_report(const Trajectory& traj, const CubicBound& bound,
                                 const std::vector<double>& epsilons, double bound_value,
                                 bool is_max) {
    SharpnessReport rep;
    for (double eps : epsilons) {
        auto profile = profile_from_trajectory(traj, 0.0, eps, bound);
        const double len = riemann_length(*profile, profile->t_lo(), profile->t_hi());
        SharpnessCase c{};
        c.epsilon = eps;
        c.length = len;
        c.bound = bound_value;
        c.gap = is_max ? bound_value - len : len - bound_value;
        c.rel_gap = std::fabs(bound_value) > 0.0 ? c.gap / std::fabs(bound_value) : c.gap;
        c.strict = c.gap > 0.0;
        c.admissible = check_admissible(*profile, bound, 1e-3).ok();
        rep.cases.push_back(c);
    }
    return rep;
}

} // namespace

bool SharpnessReport::all_strict() const {
    for (const SharpnessCase& c : cases)
        if (!c.strict) return false;
    return true;
}

bool SharpnessReport::all_admissible() const {
    for (const SharpnessCase& c : cases)
        if (!c.admissible) return false;
    return true;
}

bool SharpnessReport::gaps_shrink() const {
    if (cases.size() < 2) return true;
    bool degenerate = true;
    for (const SharpnessCase& c : cases)
        if (std::fabs(c.gap) >= 1e-9) degenerate = false;
    if (degenerate) return true;
    // Visit cases in order of decreasing epsilon; gaps must not grow.
    std::vector<std::size_t> order(cases.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            if (cases[order[j]].epsilon > cases[order[i]].epsilon) std::swap(order[i], order[j]);
    for (std::size_t i = 1; i < order.size(); ++i)
        if (cases[order[i]].gap > cases[order[i - 1]].gap + 1e-12) return false;
    return true;
}

SharpnessReport sharpness_max(double T, const CubicBound& bound,
                              const std::vector<double>& epsilons, double step) {
    require_epsilons(epsilons);
    const Trajectory traj = synthesize_max_free(T, bound, step);
    return mollified_report(traj, bound, epsilons, thm2_upper(T, bound), true);
}

SharpnessReport sharpness_min(double T, const CubicBound& bound,
                              const std::vector<double>& epsilons, double step) {
    require_epsilons(epsilons);
    const Trajectory traj = synthesize_min_free(T, bound, step);
    return mollified_report(traj, bound, epsilons, thm3_lower(T, bound), false);
}

SharpnessReport sharpness_free(double d, const std::vector<double>& epsilons) {
    require_epsilons(epsilons);
    if (!(d > 0.0) || !std::isfinite(d))
        throw std::invalid_argument("sharpness_free: distance must be positive and finite");

    // Extremal-family parameter whose member runs from -1 at -d to +1 at 0.
    const double c = (2.0 * std::exp(2.0 * d) - 1.0) -
                     2.0 * std::sqrt(std::exp(4.0 * d) - std::exp(2.0 * d));
    auto x_star = [c](double t) { return euler_lagrange_family(t, c); };
    auto dx_star = [c](double t) {
        const double E = std::exp(2.0 * t);
        const double p = E * (1.0 + c);
        const double N = p * p - 4.0 * c;
        const double D = (p - 2.0 * c) * (p - 2.0);
        const double dN = 4.0 * E * E * (1.0 + c) * (1.0 + c);
        const double dD = 4.0 * E * (1.0 + c) * (p - c - 1.0);
        return -(dN * D - N * dD) / (D * D);
    };

    const double bound_value = thm1_upper(d);
    SharpnessReport rep;
    for (double eps : epsilons) {
        const double s = 1.0 - eps;
        auto dalpha = [s, x_star](double t) { return s * x_star(t); };
        auto ddalpha = [s, dx_star](double t) { return s * dx_star(t); };
        auto dddalpha = [s, x_star, dx_star](double t) {
            const double x = x_star(t);
            return s * 2.0 * x * (3.0 * dx_star(t) - 2.0 * x * x + 2.0);
        };
        auto alpha = [d, dalpha](double t) { return adaptive_simpson(dalpha, -d, t, 1e-10); };
        AnalyticProfile profile(alpha, dalpha, ddalpha, dddalpha, -d, 0.0);
        const double len = riemann_length(profile, -d, 0.0);

        bool admissible = true;
        const int n = std::max(200, static_cast<int>(std::ceil(d / 1e-3)));
        for (int i = 0; i <= n; ++i) {
            const double t = -d + d * i / n;
            const double a1 = dalpha(t);
            const double h = ddalpha(t) - a1 * a1 + 1.0;
            if (!(h > 0.0) || !(std::fabs(a1) < 1.0)) {
                admissible = false;
                break;
            }
        }

        SharpnessCase k{};
        k.epsilon = eps;
        k.length = len;
        k.bound = bound_value;
        k.gap = bound_value - len;
        k.rel_gap = k.gap / bound_value;
        k.strict = k.gap > 0.0;
        k.admissible = admissible;
        rep.cases.push_back(k);
    }
    return rep;
}

} // namespace hcl
