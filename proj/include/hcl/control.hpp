#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <utility>
#include <vector>

#include "hcl/cubic_bound.hpp"
#include "hcl/immersion.hpp"

namespace hcl {

struct ControlState {
    double x, y;
};

/// Right-hand side dx/dt = y^2 + x^2 - 1, dy/dt = 2xy + u*gamma*y^2.
std::pair<double, double> dynamics(const ControlState& s, double u, const CubicBound& bound);

/// Root mu_u of m^2 - u*gamma*m - 1 = 0 (mu_1 = mu, mu_{-1} = 1/mu, mu_0 = 1).
double mu_of_control(double u, const CubicBound& bound);

/// Conserved quantity of the constant-control flow:
/// (mu_u^2+1) y / (mu_u (y^2 - x^2 + 1) - (mu_u^2-1) x y).
double first_integral(const ControlState& s, double u, const CubicBound& bound);

enum class LawKind { Constant, BoundarySlide, FreeFormula };

/// Control laws the integrator understands. BoundarySlide applies the
/// boundary's own control (+1 on the left segments, -1 on the right ones)
/// and reprojects onto the boundary curve after every step.
struct ControlLaw {
    LawKind kind = LawKind::Constant;
    double u = 0.0;
    BoundarySide side = BoundarySide::UpperRight;
    static ControlLaw constant(double u);
    static ControlLaw slide(BoundarySide side);
    static ControlLaw free_formula();
};

double slide_control(BoundarySide side);
double boundary_curve_y(BoundarySide side, double x, const CubicBound& bound);

struct TrajectorySample {
    double t, x, y, u;
    double alpha; // integral of x
    double cost;  // integral of y
};

struct TrajectorySegment {
    double t_begin, t_end;
    ControlLaw law;
};

struct Trajectory {
    double gamma = 0.0;
    double step = 0.0;
    std::vector<TrajectorySample> samples;
    std::vector<TrajectorySegment> segments;
    double t_begin() const { return samples.front().t; }
    double t_end() const { return samples.back().t; }
    double running_cost() const { return samples.back().cost - samples.front().cost; }
};

/// Integrates the law from s0 over [t0, t1] (t1 < t0 integrates backward)
/// with fixed-step RK4; cost and alpha ride along as quadrature states.
Trajectory integrate(ControlState s0, const ControlLaw& law, double t0, double t1, double step,
                     const CubicBound& bound, double alpha0 = 0.0);

/// Optimal-synthesis trajectories over elapsed time [0, T]. The fixed-start
/// versions realize the feedback of the corresponding Bellman function; the
/// free versions start at the extremizing state.
Trajectory synthesize_max_fixed_start(ControlState s0, double T, const CubicBound& bound,
                                      double step = 1e-4);
Trajectory synthesize_max_free(double T, const CubicBound& bound, double step = 1e-4);
Trajectory synthesize_min_fixed_start(ControlState s0, double T, const CubicBound& bound,
                                      double step = 1e-4);
Trajectory synthesize_min_free(double T, const CubicBound& bound, double step = 1e-4);

/// Prepends/appends boundary arcs that converge to the corner equilibria,
/// using the first/last segment laws of the synthesized trajectory. The arcs
/// are capped at the given horizon; reports the distance still separating
/// each end from its corner.
struct ExtensionReport {
    Trajectory trajectory;
    double start_corner_distance;
    double end_corner_distance;
};
ExtensionReport extend_with_corner_arcs(const Trajectory& traj, double horizon,
                                        const CubicBound& bound);

/// Immersion profile backed by trajectory samples (Hermite interpolation,
/// derivatives from the dynamics). smoothing == 0 wraps the trajectory as a
/// piecewise-analytic profile with corner points at control switches;
/// smoothing > 0 re-integrates with the control blended to each switch value
/// over a window of that width placed before the switch, yielding a C3
/// profile that stays inside the feasible box.
std::shared_ptr<ImmersionProfile> profile_from_trajectory(const Trajectory& traj, double alpha0,
                                                          double smoothing,
                                                          const CubicBound& bound);

/// Random piecewise-constant control (3..8 pieces, values in [-1,1]) from a
/// random interior state, integrated with boundary sliding so the state stays
/// feasible; deterministic in the seed.
std::shared_ptr<ImmersionProfile> random_admissible_profile(const CubicBound& bound, double T,
                                                            std::uint64_t seed,
                                                            double step = 1e-3);

enum class TrajectoryKind { MaxProblem, MinProblem };

/// Columns: t,x,y,u,alpha,h,C,region with h = y^2, C = 2 u gamma y^3, and the
/// region of the matching Bellman function at elapsed-time-to-go t_end - t.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const CubicBound& bound,
                          TrajectoryKind kind);

} // namespace hcl
