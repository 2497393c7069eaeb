#include "hcl/bellman.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hcl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_time(double t, const char* who) {
    if (!std::isfinite(t) || t > 0.0)
        throw std::domain_error(std::string(who) + ": requires finite t <= 0");
}

void require_state(double x, double y, const CubicBound& bound, const char* who) {
    if (!(std::isfinite(x) && std::isfinite(y)))
        throw std::domain_error(std::string(who) + ": non-finite state");
    if (!in_feasible_set(x, y, bound, 1e-9))
        throw std::domain_error(std::string(who) + ": state outside the feasible box");
}

} // namespace

AuxQuantities aux_quantities(double x, double y, const CubicBound& bound) {
    const double mu = bound.mu;
    AuxQuantities q;
    q.a_plus = mu * y + (1.0 - x);
    q.a_minus = mu * y - (1.0 - x);
    q.b_plus = mu * y + (1.0 + x);
    q.b_minus = mu * y - (1.0 + x);
    q.c_plus = mu * (1.0 - x) + y;
    q.c_minus = mu * (1.0 - x) - y;
    q.d_plus = mu * (1.0 + x) + y;
    q.d_minus = mu * (1.0 + x) - y;
    return q;
}

RegionThresholds thresholds_max(double x, double y, const CubicBound& bound) {
    require_state(x, y, bound, "thresholds_max");
    const AuxQuantities q = aux_quantities(x, y, bound);
    RegionThresholds th;
    if (q.a_minus > 0.0) {
        th.t_plus1 = 0.5 * std::log1p(2.0 * q.c_minus / (q.a_minus * q.c_plus));
        th.t_hat = 0.5 * std::log(q.b_plus / q.a_minus);
    } else {
        th.t_plus1 = kInf;
        th.t_hat = kInf;
    }
    if (x + y > 1.0) {
        th.t_star =
            0.5 * std::log((1.0 - x * x + y * y) / ((y + 1.0 - x) * (x + y - 1.0)));
    } else {
        th.t_star = kInf;
    }
    return th;
}

double threshold_min(double x, double y, const CubicBound& bound) {
    require_state(x, y, bound, "threshold_min");
    const AuxQuantities q = aux_quantities(x, y, bound);
    if (q.c_minus <= 0.0) return kInf;
    return 0.5 * std::log1p(2.0 * bound.mu * q.a_minus / (q.c_minus * q.a_plus));
}

const char* region_name(BellmanRegion r) {
    switch (r) {
        case BellmanRegion::I: return "I";
        case BellmanRegion::II: return "II";
        case BellmanRegion::III: return "III";
        case BellmanRegion::IV: return "IV";
    }
    return "?";
}

double bellman_free(double t, double x) {
    require_time(t, "bellman_free");
    if (!(x >= -1.0 && x <= 1.0))
        throw std::domain_error("bellman_free: requires |x| <= 1");
    const double q = -std::expm1(2.0 * t); // 1 - e^{2t} >= 0
    const double e2t = 1.0 - q;
    const double radicand = q * (1.0 - x) * (1.0 + e2t - x * q);
    if (radicand < -1e-14)
        throw std::domain_error("bellman_free: negative radicand");
    const double root = std::sqrt(std::max(0.0, radicand));
    return 0.5 * std::log(root - x * q + 1.0) - t;
}

double optimal_u_free(double t, double x) {
    require_time(t, "optimal_u_free");
    if (t == 0.0) throw std::domain_error("optimal_u_free: undefined at t = 0");
    if (!(x >= -1.0 && x <= 1.0))
        throw std::domain_error("optimal_u_free: requires |x| <= 1");
    const double q = -std::expm1(2.0 * t); // 1 - e^{2t} > 0
    const double e2t = 1.0 - q;
    return 2.0 * (1.0 - x) * (e2t - x * q) / q;
}

double euler_lagrange_family(double t, double c) {
    if (!(c > -1.0 && c < 1.0))
        throw std::invalid_argument("euler_lagrange_family: requires c in (-1, 1)");
    const double E = std::exp(2.0 * t);
    const double N = E * E * c * c + 2.0 * (E * E - 2.0) * c + E * E;
    const double D = (E + (E - 2.0) * c) * (E * c + E - 2.0);
    if (std::fabs(D) < 1e-300)
        throw std::domain_error("euler_lagrange_family: pole of the family");
    return -N / D;
}

// ---------------------------------------------------------------------------
// State-constrained maximization problem.
//
// Region formulas below use the stabilized groupings
//   P_III = a_- e^{-2t} - b_+,           S_III = c_+ P_III + (mu^2+1) y,
//   P_IV  = a_+ e^{-2t} - b_-,           S_IV  = c_- P_IV  + (mu^2+1) y,
//   W^2   = (S - (mu^2-1)y)(S + (mu^2-1)y),
// in which the factors that vanish on the region boundaries cancel exactly;
// they agree with the expanded forms wherever both are defined.
// ---------------------------------------------------------------------------

namespace detail {

namespace {

struct SqrtPair {
    double S, W;
};

SqrtPair sqrt_aux(double linear, double y, double mu) {
    // linear = c_+ P_III (region III) or c_- P_IV (region IV).
    const double m2 = mu * mu;
    const double S = linear + (m2 + 1.0) * y;
    const double f1 = linear + 2.0 * y;        // S - (mu^2-1) y
    const double f2 = linear + 2.0 * m2 * y;   // S + (mu^2-1) y
    const double rad = f1 * f2;
    // Positive by construction; the clamp below is a guard only.
    const double W = std::sqrt(std::max(rad, 0.0));
    return {S, W};
}

double second_log_factor(double S, double W, double mu) {
    // ((mu^2+1) W - 2 mu S) / (mu^2-1)^2, with the difference rationalized:
    // equals (S - (mu^2+1)y)(S + (mu^2+1)y) / ((mu^2+1) W + 2 mu S); callers
    // supply the factored numerator instead, so only the denominator is here.
    const double m2 = mu * mu;
    return (m2 + 1.0) * W + 2.0 * mu * S;
}

} // namespace

double bellman_max_region(BellmanRegion r, double t, double x, double y,
                          const CubicBound& bound) {
    const double mu = bound.mu, m2 = mu * mu;
    const AuxQuantities q = aux_quantities(x, y, bound);
    const double em2t = std::exp(-2.0 * t);
    const double coef = mu / (m2 + 1.0);
    switch (r) {
        case BellmanRegion::I: {
            const double num = q.c_plus * em2t + q.d_minus;
            const double den = mu * (-q.a_minus * em2t + q.b_plus);
            return coef * std::log(num / den);
        }
        case BellmanRegion::II: {
            // Grouping kept verbatim from the source formula.
            const double poly = m2 * m2 * x * y - m2 * m2 * y + m2 * mu * x * x -
                                m2 * mu * y * y - m2 * mu + 6.0 * m2 * y + mu * x * x -
                                mu * y * y - mu - x * y - y;
            const double arg = em2t * (m2 + 1.0) * q.c_plus * q.c_plus / (8.0 * mu * y) +
                               q.c_plus * poly / (8.0 * mu * y * q.a_minus);
            return coef * std::log(arg);
        }
        case BellmanRegion::III: {
            const double P = q.a_minus * em2t - q.b_plus;
            const auto [S, W] = sqrt_aux(q.c_plus * P, y, mu);
            const double first =
                0.5 * std::log((W + S) / ((mu + 1.0) * (mu + 1.0) * y));
            const double second =
                coef * std::log(2.0 * m2 * q.c_plus * (S + (m2 + 1.0) * y) /
                                (q.a_minus * second_log_factor(S, W, mu)));
            return first + second;
        }
        case BellmanRegion::IV: {
            const double P = q.a_plus * em2t - q.b_minus;
            const auto [S, W] = sqrt_aux(q.c_minus * P, y, mu);
            const double first =
                0.5 * std::log((W + S) / ((mu + 1.0) * (mu + 1.0) * y));
            const double second =
                coef * std::log(2.0 * m2 * P * (S + (m2 + 1.0) * y) /
                                (second_log_factor(S, W, mu) * (q.c_minus * em2t + q.d_plus)));
            return first + second;
        }
    }
    throw std::logic_error("bellman_max_region: bad region");
}

double bellman_min_region(BellmanRegion r, double t, double x, double y,
                          const CubicBound& bound) {
    const double mu = bound.mu, m2 = mu * mu;
    const AuxQuantities q = aux_quantities(x, y, bound);
    const double em2t = std::exp(-2.0 * t);
    const double coef = mu / (m2 + 1.0);
    switch (r) {
        case BellmanRegion::I: {
            const double num = mu * (q.a_plus * em2t - q.b_minus);
            const double den = q.c_minus * em2t + q.d_plus;
            return coef * std::log(num / den);
        }
        case BellmanRegion::II: {
            const double bracket = (m2 + 1.0) * q.c_minus * q.a_plus * em2t +
                                   m2 * m2 * y * (1.0 + x) +
                                   mu * (1.0 + m2) * (y * y - x * x + 1.0) -
                                   6.0 * m2 * y + y * (1.0 - x);
            return coef * std::log(q.a_plus * bracket / (8.0 * m2 * mu * y * q.c_minus));
        }
        default:
            throw std::logic_error("bellman_min_region: only regions I and II exist");
    }
}

double seam_value_max_I_II(double x, double y, const CubicBound& bound) {
    const double mu = bound.mu, m2 = mu * mu;
    const AuxQuantities q = aux_quantities(x, y, bound);
    return mu / (m2 + 1.0) * std::log((m2 - 1.0) * q.c_plus / (2.0 * mu * q.a_minus));
}

double seam_value_max_II_III(double x, double y, const CubicBound& bound) {
    const double mu = bound.mu, m2 = mu * mu;
    const AuxQuantities q = aux_quantities(x, y, bound);
    return mu / (m2 + 1.0) * std::log(mu * q.c_plus / q.a_minus);
}

double seam_value_max_III_IV(double x, double y, const CubicBound& bound) {
    const double mu = bound.mu, m2 = mu * mu;
    return 0.5 * std::log((mu - 1.0) * (y - x + 1.0) / ((mu + 1.0) * (y + x - 1.0))) +
           mu / (m2 + 1.0) * std::log(2.0 * m2 / (m2 - 1.0));
}

double seam_value_min_I_II(double x, double y, const CubicBound& bound) {
    const double mu = bound.mu, m2 = mu * mu;
    const AuxQuantities q = aux_quantities(x, y, bound);
    return mu / (m2 + 1.0) * std::log((m2 - 1.0) * q.a_plus / (2.0 * mu * q.c_minus));
}

} // namespace detail

BellmanEval bellman_max(double t, double x, double y, const CubicBound& bound) {
    require_time(t, "bellman_max");
    require_state(x, y, bound, "bellman_max");
    const RegionThresholds th = thresholds_max(x, y, bound);
    const double mt = -t;
    BellmanRegion r;
    if (mt <= th.t_plus1)
        r = BellmanRegion::I;
    else if (mt <= th.t_hat)
        r = BellmanRegion::II;
    else if (mt <= th.t_star)
        r = BellmanRegion::III;
    else
        r = BellmanRegion::IV;
    BellmanEval ev;
    ev.region = r;
    ev.value = detail::bellman_max_region(r, t, x, y, bound);
    if (r == BellmanRegion::III || r == BellmanRegion::IV) {
        const AuxQuantities q = aux_quantities(x, y, bound);
        const double em2t = std::exp(-2.0 * t);
        const double linear = (r == BellmanRegion::III)
                                  ? q.c_plus * (q.a_minus * em2t - q.b_plus)
                                  : q.c_minus * (q.a_plus * em2t - q.b_minus);
        ev.W = detail::sqrt_aux(linear, y, bound.mu).W;
    }
    return ev;
}

BellmanEval bellman_min(double t, double x, double y, const CubicBound& bound) {
    require_time(t, "bellman_min");
    require_state(x, y, bound, "bellman_min");
    const double t_m1 = threshold_min(x, y, bound);
    const BellmanRegion r = (-t <= t_m1) ? BellmanRegion::I : BellmanRegion::II;
    BellmanEval ev;
    ev.region = r;
    ev.value = detail::bellman_min_region(r, t, x, y, bound);
    return ev;
}

double optimal_control_max(double t, double x, double y, const CubicBound& bound) {
    require_time(t, "optimal_control_max");
    require_state(x, y, bound, "optimal_control_max");
    const AuxQuantities q = aux_quantities(x, y, bound);
    if (q.c_minus <= 0.0) return -1.0;
    const RegionThresholds th = thresholds_max(x, y, bound);
    const double mt = -t;
    if (mt < th.t_star) return 1.0;
    if (mt == th.t_star) return 0.0;
    return -1.0;
}

double optimal_control_min(double t, double x, double y, const CubicBound& bound) {
    require_time(t, "optimal_control_min");
    require_state(x, y, bound, "optimal_control_min");
    const AuxQuantities q = aux_quantities(x, y, bound);
    return q.a_minus > 0.0 ? -1.0 : 1.0;
}

Extremum maximal_B(double T, const CubicBound& bound) {
    if (!std::isfinite(T) || T <= 0.0)
        throw std::domain_error("maximal_B: requires finite T > 0");
    const double mu = bound.mu, m2 = mu * mu;
    if (mu <= 1.0 + 1e-12)
        throw std::domain_error("maximal_B: requires mu > 1");
    const double split = std::log((m2 + 1.0) / (m2 - 1.0));
    Extremum ex;
    if (T <= split) {
        const double eT1 = std::expm1(T); // e^T - 1
        const double den = m2 * eT1 + std::exp(T) + 1.0;
        ex.x = -(m2 - 1.0) * eT1 / den;
        ex.y = 2.0 * mu * std::exp(T) / den;
    } else {
        const double eT = std::exp(T);
        const double root = std::sqrt(std::expm1(2.0 * T)); // sqrt(e^{2T}-1)
        ex.x = -1.0 + eT / (mu * root);
        ex.y = eT / root;
    }
    ex.value = bellman_max(-T, ex.x, ex.y, bound).value;
    return ex;
}

Extremum minimal_B(double T, const CubicBound& bound) {
    if (!std::isfinite(T) || T <= 0.0)
        throw std::domain_error("minimal_B: requires finite T > 0");
    const double mu = bound.mu, m2 = mu * mu;
    if (mu <= 1.0 + 1e-12)
        throw std::domain_error("minimal_B: requires mu > 1");
    const double eT = std::exp(T);
    const double den = eT * (m2 + 1.0) + m2 - 1.0;
    Extremum ex;
    ex.x = (eT - 1.0) * (m2 - 1.0) / den;
    ex.y = 2.0 * mu * eT / den;
    ex.value = bellman_min(-T, ex.x, ex.y, bound).value;
    return ex;
}

} // namespace hcl
