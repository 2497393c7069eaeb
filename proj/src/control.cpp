#include "hcl/control.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "hcl/bellman.hpp"
#include "hcl/csv.hpp"

namespace hcl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kContactTol = 1e-11;  // boundary-contact detection in feedback dispatch
constexpr double kSingularBand = 1e-9; // proximity band for the singular surface

double clamp_unit(double v) { return std::min(1.0, std::max(-1.0, v)); }

/// t_star without feasibility validation, safe on probe states that stray a
/// step outside the box during event bracketing.
double raw_t_star(double x, double y) {
    if (!(x + y > 1.0)) return kInf;
    return 0.5 * std::log((1.0 - x * x + y * y) / ((y + 1.0 - x) * (x + y - 1.0)));
}

struct Aug {
    ControlState s;
    double alpha, cost;
};

double law_u(const ControlLaw& law, double t, const ControlState& s) {
    switch (law.kind) {
        case LawKind::Constant: return law.u;
        case LawKind::BoundarySlide: return slide_control(law.side);
        case LawKind::FreeFormula: return optimal_u_free(t, clamp_unit(s.x));
    }
    return 0.0;
}

/// One RK4 step of size h (signed) of the planar dynamics with a
/// time-dependent control, alpha and cost riding along as quadrature states.
template <class UFn>
Aug rk4_step_timed(const Aug& a, double t, double h, UFn&& ufn, const CubicBound& bound) {
    struct D {
        double x, y, alpha, cost;
    };
    auto deriv = [&](double tt, const ControlState& st) {
        auto [dx, dy] = dynamics(st, ufn(tt), bound);
        return D{dx, dy, st.x, st.y};
    };
    const D k1 = deriv(t, a.s);
    const D k2 = deriv(t + 0.5 * h, {a.s.x + 0.5 * h * k1.x, a.s.y + 0.5 * h * k1.y});
    const D k3 = deriv(t + 0.5 * h, {a.s.x + 0.5 * h * k2.x, a.s.y + 0.5 * h * k2.y});
    const D k4 = deriv(t + h, {a.s.x + h * k3.x, a.s.y + h * k3.y});
    Aug out = a;
    out.s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    out.s.y += h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    out.alpha += h / 6.0 * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha);
    out.cost += h / 6.0 * (k1.cost + 2.0 * k2.cost + 2.0 * k3.cost + k4.cost);
    return out;
}

/// One RK4 step of the one-dimensional flow dx/dt = optimal_u_free(t, x);
/// y is not a state here, it is reconstructed as sqrt(u - x^2 + 1).
Aug rk4_step_free(const Aug& a, double t, double h) {
    struct D {
        double x, alpha, cost;
    };
    auto deriv = [](double tt, double x) {
        const double u = optimal_u_free(tt, clamp_unit(x));
        return D{u, x, std::sqrt(std::max(0.0, u - x * x + 1.0))};
    };
    const D k1 = deriv(t, a.s.x);
    const D k2 = deriv(t + 0.5 * h, a.s.x + 0.5 * h * k1.x);
    const D k3 = deriv(t + 0.5 * h, a.s.x + 0.5 * h * k2.x);
    const D k4 = deriv(t + h, a.s.x + h * k3.x);
    Aug out = a;
    out.s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    out.alpha += h / 6.0 * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha);
    out.cost += h / 6.0 * (k1.cost + 2.0 * k2.cost + 2.0 * k3.cost + k4.cost);
    const double u = optimal_u_free(t + h, clamp_unit(out.s.x));
    out.s.y = std::sqrt(std::max(0.0, u - out.s.x * out.s.x + 1.0));
    return out;
}

Aug rk4_step(const Aug& a, double t, double h, const ControlLaw& law, const CubicBound& bound) {
    if (law.kind == LawKind::FreeFormula) return rk4_step_free(a, t, h);
    const double u = (law.kind == LawKind::Constant) ? law.u : slide_control(law.side);
    Aug out = rk4_step_timed(a, t, h, [u](double) { return u; }, bound);
    if (law.kind == LawKind::BoundarySlide)
        out.s.y = boundary_curve_y(law.side, out.s.x, bound);
    return out;
}

struct Event {
    std::function<double(double, const ControlState&)> fn;
};

void push_sample(Trajectory& traj, double t, const Aug& a, double u) {
    TrajectorySample smp{t, a.s.x, a.s.y, u, a.alpha, a.cost};
    if (!traj.samples.empty() &&
        std::fabs(t - traj.samples.back().t) < 1e-15 * (1.0 + std::fabs(t))) {
        traj.samples.back() = smp; // collapse sub-resolution event landings
        return;
    }
    traj.samples.push_back(smp);
}

/// Marches the law for at most `duration` in direction dir (+-1), appending
/// samples every `step`. Stops early when an event function crosses from
/// positive to <= 0 (located by bisection over a fractional step); returns
/// the index of the triggering event, or -1 when the duration ran out.
int run_arc(Trajectory& traj, Aug& a, double& t, const ControlLaw& law, double duration,
            double step, double dir, const CubicBound& bound, const std::vector<Event>& events) {
    if (!(duration > 1e-15)) return -1;
    const double t_begin = t;
    traj.samples.back().u = law_u(law, t, a.s);
    std::vector<double> prev(events.size());
    for (size_t i = 0; i < events.size(); ++i) prev[i] = events[i].fn(t, a.s);
    double done = 0.0;
    int hit = -1;
    while (duration - done > 1e-15 * (1.0 + duration)) {
        const double h = std::min(step, duration - done);
        const Aug a_cur = a;
        const double t_cur = t;
        Aug a_next = rk4_step(a_cur, t_cur, dir * h, law, bound);
        const double t_next = t_begin + dir * std::min(done + h, duration);
        int crossed = -1;
        double theta_best = 2.0;
        for (size_t i = 0; i < events.size(); ++i) {
            const double v = events[i].fn(t_next, a_next.s);
            if (prev[i] > 0.0 && v <= 0.0) {
                double lo = 0.0, hi = 1.0;
                for (int it = 0; it < 90 && hi - lo > 1e-16; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const Aug am = rk4_step(a_cur, t_cur, dir * h * mid, law, bound);
                    const double vm = events[i].fn(t_cur + dir * h * mid, am.s);
                    (vm <= 0.0 ? hi : lo) = mid;
                }
                if (hi < theta_best) {
                    theta_best = hi;
                    crossed = static_cast<int>(i);
                }
            } else {
                prev[i] = v;
            }
        }
        if (crossed >= 0) {
            a = rk4_step(a_cur, t_cur, dir * h * theta_best, law, bound);
            done += h * theta_best;
            t = t_begin + dir * done;
            push_sample(traj, t, a, law_u(law, t, a.s));
            hit = crossed;
            break;
        }
        a = a_next;
        done = std::min(done + h, duration);
        t = t_begin + dir * done;
        if (law.kind != LawKind::FreeFormula &&
            !in_feasible_set(a.s.x, a.s.y, bound, 1e-9))
            throw std::runtime_error("integration fault: the state left the feasible box");
        push_sample(traj, t, a, law_u(law, t, a.s));
    }
    traj.segments.push_back({t_begin, t, law});
    return hit;
}

void require_feasible_start(const ControlState& s, const CubicBound& bound, const char* who) {
    if (!std::isfinite(s.x) || !std::isfinite(s.y) || !in_feasible_set(s.x, s.y, bound, 1e-9))
        throw std::domain_error(std::string(who) + ": start state outside the feasible box");
}

Trajectory begin_trajectory(const ControlState& s0, double step, const CubicBound& bound) {
    Trajectory traj;
    traj.gamma = bound.gamma;
    traj.step = step;
    traj.samples.push_back({0.0, s0.x, s0.y, 0.0, 0.0, 0.0});
    return traj;
}

/// Passes to the boundary-slide law when the state already sits on a segment
/// that the requested bang control leaves invariant (exact riding instead of
/// drifting off by integration error).
ControlLaw arc_law(double u_arc, const AuxQuantities& q) {
    if (u_arc > 0.5) {
        if (q.d_minus <= kContactTol) return ControlLaw::slide(BoundarySide::UpperLeft);
        if (q.a_minus <= kContactTol) return ControlLaw::slide(BoundarySide::LowerLeft);
    } else if (u_arc < -0.5) {
        if (q.c_minus <= kContactTol) return ControlLaw::slide(BoundarySide::UpperRight);
        if (q.b_minus <= kContactTol) return ControlLaw::slide(BoundarySide::LowerRight);
    }
    return ControlLaw::constant(u_arc);
}

Event make_event_c_minus(const CubicBound& bound) {
    return {[bound](double, const ControlState& s) {
        return aux_quantities(s.x, s.y, bound).c_minus;
    }};
}

Event make_event_a_minus(const CubicBound& bound) {
    return {[bound](double, const ControlState& s) {
        return aux_quantities(s.x, s.y, bound).a_minus;
    }};
}

/// Feedback loop of the maximization problem: bang arcs chosen by the sign of
/// (T - t) - t_star, a singular arc riding the switching surface, and
/// boundary slides once the upper-right or lower-left segment is reached.
void run_max_feedback(Trajectory& traj, Aug& a, double& t, double T, double step,
                      const CubicBound& bound) {
    for (int arc = 0; arc < 64; ++arc) {
        const double rem = T - t;
        if (rem <= 1e-13) return;
        const AuxQuantities q = aux_quantities(a.s.x, a.s.y, bound);
        if (q.c_minus <= kContactTol) {
            run_arc(traj, a, t, ControlLaw::slide(BoundarySide::UpperRight), rem, step, +1.0,
                    bound, {});
            return;
        }
        if (q.a_minus <= kContactTol) {
            run_arc(traj, a, t, ControlLaw::slide(BoundarySide::LowerLeft), rem, step, +1.0, bound,
                    {});
            return;
        }
        const double ts = raw_t_star(a.s.x, a.s.y);
        const Event ev_boundary = make_event_c_minus(bound);
        if (std::fabs(rem - ts) <= kSingularBand * (1.0 + std::fabs(rem))) {
            run_arc(traj, a, t, ControlLaw::constant(0.0), rem, step, +1.0, bound, {ev_boundary});
            continue;
        }
        if (rem < ts) {
            const Event ev_onset{[T](double tt, const ControlState& s) {
                const double v = raw_t_star(s.x, s.y);
                return std::isinf(v) ? 1.0 : v - (T - tt);
            }};
            run_arc(traj, a, t, arc_law(+1.0, q), rem, step, +1.0, bound, {ev_onset, ev_boundary});
        } else {
            const Event ev_onset{[T](double tt, const ControlState& s) {
                const double v = raw_t_star(s.x, s.y);
                return std::isinf(v) ? -1.0 : (T - tt) - v;
            }};
            run_arc(traj, a, t, arc_law(-1.0, q), rem, step, +1.0, bound,
                    {ev_onset, make_event_a_minus(bound)});
        }
    }
    throw std::logic_error("run_max_feedback: arc dispatch failed to terminate");
}

/// Feedback loop of the minimization problem: u = -1 until the lower-left
/// segment, then ride it; the upper-right and lower-right segments are
/// themselves invariant under -1.
void run_min_feedback(Trajectory& traj, Aug& a, double& t, double T, double step,
                      const CubicBound& bound) {
    for (int arc = 0; arc < 64; ++arc) {
        const double rem = T - t;
        if (rem <= 1e-13) return;
        const AuxQuantities q = aux_quantities(a.s.x, a.s.y, bound);
        if (q.a_minus <= kContactTol) {
            run_arc(traj, a, t, ControlLaw::slide(BoundarySide::LowerLeft), rem, step, +1.0, bound,
                    {});
            return;
        }
        if (q.c_minus <= kContactTol) {
            run_arc(traj, a, t, ControlLaw::slide(BoundarySide::UpperRight), rem, step, +1.0,
                    bound, {});
            return;
        }
        run_arc(traj, a, t, arc_law(-1.0, q), rem, step, +1.0, bound, {make_event_a_minus(bound)});
    }
    throw std::logic_error("run_min_feedback: arc dispatch failed to terminate");
}

void require_horizon(double T, const char* who) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument(std::string(who) + ": horizon must be positive and finite");
}

double smoothstep5(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }

/// Piecewise-constant control with each switch reached through a quintic
/// smoothstep over a window placed entirely before the switch time.
struct BlendedControl {
    std::vector<double> bounds; // n+1 segment boundaries
    std::vector<double> values; // n segment control values
    std::vector<double> widths; // n-1 window widths, widths[i] before bounds[i+1]
    double operator()(double t) const {
        size_t i = std::upper_bound(bounds.begin(), bounds.end(), t) - bounds.begin();
        i = (i == 0) ? 0 : i - 1;
        if (i >= values.size()) i = values.size() - 1;
        double u = values[i];
        if (i + 1 < values.size() && widths[i] > 0.0) {
            const double start = bounds[i + 1] - widths[i];
            if (t > start) {
                const double s = std::min(1.0, (t - start) / widths[i]);
                u += (values[i + 1] - u) * smoothstep5(s);
            }
        }
        return u;
    }
};

/// Immersion profile backed by trajectory samples. x and y are cubic Hermite
/// interpolants with slopes taken from the dynamics, alpha is a cubic Hermite
/// interpolant with slope x; the derivatives reported are the dynamics-exact
/// combinations, so h = y^2 and C = 2 u gamma y^3 hold identically.
class TrajectoryProfile final : public ImmersionProfile {
public:
    struct Node {
        double t, x, y, u, alpha;
    };

    TrajectoryProfile(std::vector<Node> nodes, std::vector<double> corners, Smoothness smooth,
                      CubicBound bound, std::optional<BlendedControl> blend)
        : nodes_(std::move(nodes)),
          corners_(std::move(corners)),
          smooth_(smooth),
          bound_(bound),
          blend_(std::move(blend)) {
        if (nodes_.size() < 2)
            throw std::invalid_argument("TrajectoryProfile: needs at least two samples");
    }

    ProfileDerivs eval(double t) const override {
        const double lo = nodes_.front().t, hi = nodes_.back().t;
        double tc = std::min(std::max(t, lo), hi);
        size_t k = locate(tc);
        const Node& n0 = nodes_[k];
        const Node& n1 = nodes_[k + 1];
        const double dt = n1.t - n0.t;
        const double s = (tc - n0.t) / dt;
        // Hermite basis
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        const double h10 = s3 - 2.0 * s2 + s;
        const double h01 = -2.0 * s3 + 3.0 * s2;
        const double h11 = s3 - s2;
        const double u0 = slope_u(k, n0), u1 = slope_u(k, n1);
        const double fx0 = n0.y * n0.y + n0.x * n0.x - 1.0;
        const double fx1 = n1.y * n1.y + n1.x * n1.x - 1.0;
        const double fy0 = 2.0 * n0.x * n0.y + u0 * bound_.gamma * n0.y * n0.y;
        const double fy1 = 2.0 * n1.x * n1.y + u1 * bound_.gamma * n1.y * n1.y;
        const double x = h00 * n0.x + h10 * dt * fx0 + h01 * n1.x + h11 * dt * fx1;
        const double y = h00 * n0.y + h10 * dt * fy0 + h01 * n1.y + h11 * dt * fy1;
        const double alpha = h00 * n0.alpha + h10 * dt * n0.x + h01 * n1.alpha + h11 * dt * n1.x;
        ProfileDerivs d;
        d.alpha = alpha;
        d.dalpha = x;
        d.ddalpha = y * y + x * x - 1.0;
        if (at_corner(tc)) {
            d.dddalpha = std::nullopt;
        } else {
            const double u = point_u(tc, k, s);
            d.dddalpha = 2.0 * y * (2.0 * x * y + u * bound_.gamma * y * y) +
                         2.0 * x * (y * y + x * x - 1.0);
        }
        return d;
    }

    double t_lo() const override { return nodes_.front().t; }
    double t_hi() const override { return nodes_.back().t; }
    Smoothness smoothness() const override { return smooth_; }
    std::vector<double> corner_points() const override { return corners_; }

private:
    size_t locate(double t) const {
        size_t lo = 0, hi = nodes_.size() - 1;
        while (hi - lo > 1) {
            const size_t mid = (lo + hi) / 2;
            if (nodes_[mid].t <= t)
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    }

    bool at_corner(double t) const {
        for (double c : corners_)
            if (std::fabs(t - c) <= 1e-12 * (1.0 + std::fabs(c))) return true;
        return false;
    }

    // control value used for the y-slope of node `n` on interval k
    double slope_u(size_t k, const Node& n) const {
        if (blend_) return (*blend_)(n.t);
        if (corners_.empty()) return n.u;
        return nodes_[k].u; // piecewise-constant control, left node owns the interval
    }

    // control value at an interior point of interval k
    double point_u(double t, size_t k, double s) const {
        if (blend_) return (*blend_)(t);
        if (corners_.empty())
            return (1.0 - s) * nodes_[k].u + s * nodes_[k + 1].u;
        return nodes_[k].u;
    }

    std::vector<Node> nodes_;
    std::vector<double> corners_;
    Smoothness smooth_;
    CubicBound bound_;
    std::optional<BlendedControl> blend_;
};

std::vector<TrajectoryProfile::Node> nodes_from_samples(const Trajectory& traj,
                                                        double alpha_shift) {
    std::vector<TrajectoryProfile::Node> nodes;
    nodes.reserve(traj.samples.size());
    for (const auto& s : traj.samples)
        nodes.push_back({s.t, s.x, s.y, s.u, s.alpha + alpha_shift});
    return nodes;
}

double law_constant_u(const ControlLaw& law) {
    if (law.kind == LawKind::Constant) return law.u;
    if (law.kind == LawKind::BoundarySlide) return slide_control(law.side);
    throw std::invalid_argument("profile_from_trajectory: law has no constant control value");
}

} // namespace

std::pair<double, double> dynamics(const ControlState& s, double u, const CubicBound& bound) {
    return {s.y * s.y + s.x * s.x - 1.0, 2.0 * s.x * s.y + u * bound.gamma * s.y * s.y};
}

double mu_of_control(double u, const CubicBound& bound) {
    const double g = u * bound.gamma;
    return 0.5 * g + std::sqrt(1.0 + 0.25 * g * g);
}

double first_integral(const ControlState& s, double u, const CubicBound& bound) {
    const double m = mu_of_control(u, bound);
    const double den = m * (s.y * s.y - s.x * s.x + 1.0) - (m * m - 1.0) * s.x * s.y;
    return (m * m + 1.0) * s.y / den;
}

ControlLaw ControlLaw::constant(double u) {
    if (!(u >= -1.0 && u <= 1.0))
        throw std::invalid_argument("ControlLaw::constant: u must lie in [-1, 1]");
    ControlLaw law;
    law.kind = LawKind::Constant;
    law.u = u;
    return law;
}

ControlLaw ControlLaw::slide(BoundarySide side) {
    ControlLaw law;
    law.kind = LawKind::BoundarySlide;
    law.side = side;
    law.u = slide_control(side);
    return law;
}

ControlLaw ControlLaw::free_formula() {
    ControlLaw law;
    law.kind = LawKind::FreeFormula;
    return law;
}

double slide_control(BoundarySide side) {
    return (side == BoundarySide::UpperLeft || side == BoundarySide::LowerLeft) ? +1.0 : -1.0;
}

double boundary_curve_y(BoundarySide side, double x, const CubicBound& bound) {
    switch (side) {
        case BoundarySide::UpperLeft: return bound.mu * (1.0 + x);
        case BoundarySide::UpperRight: return bound.mu * (1.0 - x);
        case BoundarySide::LowerLeft: return (1.0 - x) / bound.mu;
        case BoundarySide::LowerRight: return (1.0 + x) / bound.mu;
    }
    return 0.0;
}

Trajectory integrate(ControlState s0, const ControlLaw& law, double t0, double t1, double step,
                     const CubicBound& bound, double alpha0) {
    if (!std::isfinite(t0) || !std::isfinite(t1) || !(step > 0.0))
        throw std::invalid_argument("integrate: needs finite times and a positive step");
    Trajectory traj;
    traj.gamma = bound.gamma;
    traj.step = step;
    Aug a{s0, alpha0, 0.0};
    if (law.kind == LawKind::FreeFormula) {
        if (!(t0 < 0.0) || !(t1 < 0.0))
            throw std::invalid_argument("integrate: the free-problem law needs times < 0");
        const double u0 = optimal_u_free(t0, clamp_unit(s0.x));
        a.s.y = std::sqrt(std::max(0.0, u0 - s0.x * s0.x + 1.0));
    } else {
        require_feasible_start(s0, bound, "integrate");
    }
    traj.samples.push_back({t0, a.s.x, a.s.y, 0.0, alpha0, 0.0});
    double t = t0;
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    run_arc(traj, a, t, law, std::fabs(t1 - t0), step, dir, bound, {});
    return traj;
}

Trajectory synthesize_max_fixed_start(ControlState s0, double T, const CubicBound& bound,
                                      double step) {
    require_horizon(T, "synthesize_max_fixed_start");
    require_feasible_start(s0, bound, "synthesize_max_fixed_start");
    Trajectory traj = begin_trajectory(s0, step, bound);
    Aug a{s0, 0.0, 0.0};
    double t = 0.0;
    run_max_feedback(traj, a, t, T, step, bound);
    return traj;
}

Trajectory synthesize_max_free(double T, const CubicBound& bound, double step) {
    require_horizon(T, "synthesize_max_free");
    const Extremum ex = maximal_B(T, bound);
    ControlState s0{ex.x, ex.y};
    require_feasible_start(s0, bound, "synthesize_max_free");
    Trajectory traj = begin_trajectory(s0, step, bound);
    Aug a{s0, 0.0, 0.0};
    double t = 0.0;
    run_max_feedback(traj, a, t, T, step, bound);
    return traj;
}

Trajectory synthesize_min_fixed_start(ControlState s0, double T, const CubicBound& bound,
                                      double step) {
    require_horizon(T, "synthesize_min_fixed_start");
    require_feasible_start(s0, bound, "synthesize_min_fixed_start");
    Trajectory traj = begin_trajectory(s0, step, bound);
    Aug a{s0, 0.0, 0.0};
    double t = 0.0;
    run_min_feedback(traj, a, t, T, step, bound);
    return traj;
}

Trajectory synthesize_min_free(double T, const CubicBound& bound, double step) {
    require_horizon(T, "synthesize_min_free");
    const Extremum ex = minimal_B(T, bound);
    ControlState s0{ex.x, ex.y};
    require_feasible_start(s0, bound, "synthesize_min_free");
    Trajectory traj = begin_trajectory(s0, step, bound);
    Aug a{s0, 0.0, 0.0};
    double t = 0.0;
    run_min_feedback(traj, a, t, T, step, bound);
    return traj;
}

ExtensionReport extend_with_corner_arcs(const Trajectory& traj, double horizon,
                                        const CubicBound& bound) {
    if (traj.samples.size() < 2 || traj.segments.empty())
        throw std::invalid_argument("extend_with_corner_arcs: trajectory has no segments");
    require_horizon(horizon, "extend_with_corner_arcs");
    const ControlLaw first = traj.segments.front().law;
    const ControlLaw last = traj.segments.back().law;
    if (first.kind == LawKind::FreeFormula || last.kind == LawKind::FreeFormula)
        throw std::invalid_argument("extend_with_corner_arcs: free-problem trajectories");

    const ControlState s0{traj.samples.front().x, traj.samples.front().y};
    Trajectory back;
    try {
        back =
            integrate(s0, first, traj.t_begin(), traj.t_begin() - horizon, traj.step, bound, 0.0);
    } catch (const std::runtime_error&) {
        throw std::domain_error("extend_with_corner_arcs: backward arc leaves the feasible box");
    }
    const ControlState far{back.samples.back().x, back.samples.back().y};
    if (!in_feasible_set(far.x, far.y, bound, 1e-6))
        throw std::domain_error("extend_with_corner_arcs: backward arc leaves the feasible box");

    Trajectory out;
    out.gamma = bound.gamma;
    out.step = traj.step;
    const double t0 = traj.t_begin() - horizon;
    out.samples.push_back({t0, far.x, far.y, 0.0, 0.0, 0.0});
    Aug a{far, 0.0, 0.0};
    double t = t0;
    run_arc(out, a, t, first, horizon, traj.step, +1.0, bound, {});
    for (const auto& seg : traj.segments)
        run_arc(out, a, t, seg.law, seg.t_end - seg.t_begin, traj.step, +1.0, bound, {});
    run_arc(out, a, t, last, horizon, traj.step, +1.0, bound, {});

    const CornerPoint rc = right_corner(bound);
    auto corner_dist = [&rc](double x, double y) {
        return std::min(std::hypot(x - rc.x, y - rc.y), std::hypot(x + rc.x, y - rc.y));
    };
    ExtensionReport rep{std::move(out), corner_dist(far.x, far.y),
                        corner_dist(a.s.x, a.s.y)};
    return rep;
}

std::shared_ptr<ImmersionProfile> profile_from_trajectory(const Trajectory& traj, double alpha0,
                                                          double smoothing,
                                                          const CubicBound& bound) {
    if (traj.samples.size() < 2)
        throw std::invalid_argument("profile_from_trajectory: needs at least two samples");
    if (!(smoothing >= 0.0) || !std::isfinite(smoothing))
        throw std::invalid_argument("profile_from_trajectory: smoothing must be >= 0");

    if (smoothing == 0.0) {
        std::vector<double> corners;
        for (size_t i = 1; i < traj.segments.size(); ++i) {
            const ControlLaw& prev = traj.segments[i - 1].law;
            const ControlLaw& cur = traj.segments[i].law;
            if (prev.kind == LawKind::FreeFormula || cur.kind == LawKind::FreeFormula) continue;
            if (std::fabs(law_constant_u(prev) - law_constant_u(cur)) > 1e-12)
                corners.push_back(traj.segments[i].t_begin);
        }
        const double shift = alpha0 - traj.samples.front().alpha;
        return std::make_shared<TrajectoryProfile>(nodes_from_samples(traj, shift), corners,
                                                   Smoothness::PiecewiseAnalytic, bound,
                                                   std::nullopt);
    }

    // Mollified rebuild: extract the piecewise-constant control, blend each
    // switch over a window placed before it, re-integrate without projection.
    BlendedControl blend;
    for (const auto& seg : traj.segments) {
        const double u = law_constant_u(seg.law);
        if (!blend.values.empty() && std::fabs(blend.values.back() - u) <= 1e-12) {
            blend.bounds.back() = seg.t_end; // merge equal-control stretches
            continue;
        }
        if (blend.values.empty()) blend.bounds.push_back(seg.t_begin);
        blend.values.push_back(u);
        blend.bounds.push_back(seg.t_end);
    }
    blend.widths.resize(blend.values.empty() ? 0 : blend.values.size() - 1);
    for (size_t i = 0; i + 1 < blend.values.size(); ++i) {
        if (smoothing > blend.bounds[i + 1] - blend.bounds[i])
            throw std::invalid_argument(
                "profile_from_trajectory: smoothing window exceeds a segment length");
        blend.widths[i] = smoothing;
    }

    const double t_begin = traj.t_begin(), t_end = traj.t_end();
    Aug a{{traj.samples.front().x, traj.samples.front().y}, alpha0, 0.0};
    std::vector<TrajectoryProfile::Node> nodes;
    nodes.push_back({t_begin, a.s.x, a.s.y, blend(t_begin), a.alpha});
    double done = 0.0;
    const double duration = t_end - t_begin;
    while (duration - done > 1e-15 * (1.0 + duration)) {
        const double h = std::min(traj.step, duration - done);
        const double t = t_begin + done;
        a = rk4_step_timed(a, t, h, blend, bound);
        done = std::min(done + h, duration);
        nodes.push_back({t_begin + done, a.s.x, a.s.y, blend(t_begin + done), a.alpha});
    }
    return std::make_shared<TrajectoryProfile>(std::move(nodes), std::vector<double>{},
                                               Smoothness::C3, bound, std::move(blend));
}

std::shared_ptr<ImmersionProfile> random_admissible_profile(const CubicBound& bound, double T,
                                                            std::uint64_t seed, double step) {
    require_horizon(T, "random_admissible_profile");
    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    const double lo = 1.0 / bound.mu, hi = bound.mu;
    const double span = hi - lo;
    if (span < 1e-12) {
        // Degenerate box: the only admissible state is (0, 1), alpha = 0.
        auto zero = [](double) { return 0.0; };
        return std::make_shared<AnalyticProfile>(zero, zero, zero, zero, 0.0, T);
    }

    const double w = lo + span * (0.05 + 0.90 * unit());
    const double z = lo + span * (0.05 + 0.90 * unit());
    const ControlState s0{(w - z) / (w + z), 2.0 * w * z / (w + z)};

    const int pieces = 3 + static_cast<int>(rng() % 6);
    std::vector<double> cuts{0.0};
    for (int i = 1; i < pieces; ++i) cuts.push_back(T * unit());
    cuts.push_back(T);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> us;
    for (int i = 0; i < pieces; ++i) us.push_back(-1.0 + 2.0 * unit());

    Trajectory traj = begin_trajectory(s0, step, bound);
    Aug a{s0, 0.0, 0.0};
    double t = 0.0;
    for (int i = 0; i < pieces; ++i) {
        const double u = us[i];
        for (int inner = 0; inner < 8; ++inner) {
            const double rem = cuts[i + 1] - t;
            if (rem <= 1e-15 * (1.0 + T)) break;
            const AuxQuantities q = aux_quantities(a.s.x, a.s.y, bound);
            if (q.c_minus <= kContactTol && u > -1.0 + 1e-9) {
                run_arc(traj, a, t, ControlLaw::slide(BoundarySide::UpperRight), rem, step, +1.0,
                        bound, {});
                continue;
            }
            if (q.a_minus <= kContactTol && u < 1.0 - 1e-9) {
                run_arc(traj, a, t, ControlLaw::slide(BoundarySide::LowerLeft), rem, step, +1.0,
                        bound, {});
                continue;
            }
            ControlLaw law = ControlLaw::constant(u);
            if (u >= 1.0 - 1e-9 && q.d_minus <= kContactTol)
                law = ControlLaw::slide(BoundarySide::UpperLeft);
            else if (u <= -1.0 + 1e-9 && q.b_minus <= kContactTol)
                law = ControlLaw::slide(BoundarySide::LowerRight);
            std::vector<Event> evs;
            if (u > -1.0 + 1e-9) evs.push_back(make_event_c_minus(bound));
            if (u < 1.0 - 1e-9) evs.push_back(make_event_a_minus(bound));
            run_arc(traj, a, t, law, rem, step, +1.0, bound, evs);
        }
    }
    return profile_from_trajectory(traj, 0.0, 0.0, bound);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const CubicBound& bound,
                          TrajectoryKind kind) {
    os << "t,x,y,u,alpha,h,C,region\n";
    const double t_end = traj.samples.back().t;
    for (const auto& s : traj.samples) {
        const double tau = std::min(0.0, s.t - t_end);
        const BellmanEval be = (kind == TrajectoryKind::MaxProblem)
                                   ? bellman_max(tau, s.x, s.y, bound)
                                   : bellman_min(tau, s.x, s.y, bound);
        const double h = s.y * s.y;
        const double C = 2.0 * s.u * bound.gamma * h * s.y;
        os << csv_num(s.t) << ',' << csv_num(s.x) << ',' << csv_num(s.y) << ',' << csv_num(s.u)
           << ',' << csv_num(s.alpha) << ',' << csv_num(h) << ',' << csv_num(C) << ','
           << region_name(be.region) << '\n';
    }
}

} // namespace hcl
