#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "hcl/bellman.hpp"
#include "hcl/control.hpp"
#include "hcl/cubic_bound.hpp"

using namespace hcl;

namespace {

// Bisects y at x = 0 so the +1 flow (want_max) or -1 flow needs `target`
// units of time to reach its exit boundary; keeps the T = 2 conservation
// runs strictly inside the box.
double y_with_exit_time(const CubicBound& b, double target, bool want_max) {
    double lo = 1.0 / b.mu + 1e-9, hi = b.mu - 1e-9;
    // For the +1 flow the exit time decreases in y; for the -1 flow it
    // increases. Bisect on the sign of (time - target).
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double time = want_max ? thresholds_max(0.0, mid, b).t_plus1
                                     : threshold_min(0.0, mid, b);
        const bool above = time > target;
        if (want_max) {
            (above ? lo : hi) = mid;
        } else {
            (above ? hi : lo) = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("vector field transcription") {
    CubicBound b = mu_from_gamma(0.5);
    const double x = 0.12, y = 1.03, u = 0.4;
    auto [dx, dy] = dynamics({x, y}, u, b);
    CHECK(dx == doctest::Approx(y * y + x * x - 1.0).epsilon(1e-15));
    CHECK(dy == doctest::Approx(2.0 * x * y + u * b.gamma * y * y).epsilon(1e-15));
}

TEST_CASE("mu of a control solves its quadratic") {
    CubicBound b = mu_from_gamma(0.5);
    CHECK(mu_of_control(1.0, b) == doctest::Approx(b.mu).epsilon(1e-15));
    CHECK(mu_of_control(-1.0, b) == doctest::Approx(1.0 / b.mu).epsilon(1e-14));
    CHECK(mu_of_control(0.0, b) == doctest::Approx(1.0).epsilon(1e-15));
    const double u = 0.37;
    const double m = mu_of_control(u, b);
    CHECK(m * m - u * b.gamma * m - 1.0 == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("corners are equilibria of their extreme controls") {
    for (double gamma : {0.25, 0.5, 1.0, 1.5}) {
        CubicBound b = mu_from_gamma(gamma);
        CornerPoint c = right_corner(b);
        auto [rx, ry] = dynamics({c.x, c.y}, -1.0, b);
        CHECK(std::fabs(rx) < 1e-14);
        CHECK(std::fabs(ry) < 1e-14);
        auto [lx, ly] = dynamics({-c.x, c.y}, 1.0, b);
        CHECK(std::fabs(lx) < 1e-14);
        CHECK(std::fabs(ly) < 1e-14);
    }
}

TEST_CASE("first integral on the unit circle under u = 0 is 1/y") {
    CubicBound b = mu_from_gamma(0.5);
    CHECK(first_integral({0.6, 0.8}, 0.0, b) == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(first_integral({0.0, 1.0}, 0.0, b) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("constant-control flows conserve their first integral over T = 2") {
    CubicBound b = mu_from_gamma(0.5);
    const double step = 1e-4, T = 2.0;
    ControlState starts[3] = {{0.0, y_with_exit_time(b, 2.3, false)},
                              {-1e-4, 0.998},
                              {0.0, y_with_exit_time(b, 2.3, true)}};
    const double controls[3] = {-1.0, 0.0, 1.0};
    for (int i = 0; i < 3; ++i) {
        CAPTURE(controls[i]);
        Trajectory traj = integrate(starts[i], ControlLaw::constant(controls[i]), 0.0, T, step, b);
        const double I0 = first_integral(starts[i], controls[i], b);
        double drift = 0.0;
        for (const TrajectorySample& s : traj.samples) {
            drift = std::max(drift, std::fabs(first_integral({s.x, s.y}, controls[i], b) - I0));
        }
        CHECK(drift < 1e-8);
        CHECK(traj.samples.back().t == doctest::Approx(T).epsilon(1e-12));
    }
}

TEST_CASE("integrator converges at fourth order") {
    CubicBound b = mu_from_gamma(0.5);
    ControlState s0{0.0, y_with_exit_time(b, 2.3, false)};
    auto endpoint = [&](double h) {
        Trajectory t = integrate(s0, ControlLaw::constant(-1.0), 0.0, 1.0, h, b);
        return t.samples.back();
    };
    TrajectorySample ref = endpoint(1e-6);
    auto err = [&](double h) {
        TrajectorySample s = endpoint(h);
        return std::hypot(s.x - ref.x, s.y - ref.y);
    };
    // Steps chosen so both errors sit far above the reference's accumulated
    // rounding floor (~1e-12); finer pairs would measure noise, not order.
    const double e1 = err(1.6e-2);
    const double e2 = err(8e-3);
    CHECK(e1 > 1e-10);
    const double ratio = e1 / e2;
    CHECK(ratio > 11.0);
    CHECK(ratio < 22.0);
}

TEST_CASE("boundary slide stays on its curve and uses the slide control") {
    CubicBound b = mu_from_gamma(0.5);
    const double x0 = 0.02;
    Trajectory traj = integrate({x0, upper_boundary_y(x0, b)}, ControlLaw::slide(BoundarySide::UpperRight),
                                0.0, 0.8, 1e-4, b);
    CHECK(slide_control(BoundarySide::UpperRight) == doctest::Approx(-1.0));
    CHECK(slide_control(BoundarySide::UpperLeft) == doctest::Approx(1.0));
    CHECK(slide_control(BoundarySide::LowerLeft) == doctest::Approx(1.0));
    CHECK(slide_control(BoundarySide::LowerRight) == doctest::Approx(-1.0));
    for (const TrajectorySample& s : traj.samples) {
        CHECK(std::fabs(s.y - upper_boundary_y(s.x, b)) < 1e-12);
        CHECK(s.u == doctest::Approx(-1.0));
    }
    // The slide moves toward the right corner.
    CHECK(traj.samples.back().x > x0);
    CHECK(std::fabs(traj.samples.back().x) < right_corner(b).x);
}

TEST_CASE("backward integration retraces the forward flow") {
    CubicBound b = mu_from_gamma(0.5);
    ControlState s0{0.0, 1.0};
    // The -1 flow from (0, 1) exits the box at ~0.377; stay clear of it.
    Trajectory fwd = integrate(s0, ControlLaw::constant(-1.0), 0.0, 0.3, 1e-4, b);
    ControlState s1{fwd.samples.back().x, fwd.samples.back().y};
    Trajectory bwd = integrate(s1, ControlLaw::constant(-1.0), 0.3, 0.0, 1e-4, b);
    CHECK(bwd.samples.back().x == doctest::Approx(s0.x).epsilon(1e-10));
    CHECK(bwd.samples.back().y == doctest::Approx(s0.y).epsilon(1e-10));
    CHECK(bwd.samples.back().t == doctest::Approx(0.0));
}

TEST_CASE("constant-law integration is invariant under time translation") {
    CubicBound b = mu_from_gamma(0.5);
    ControlState s0{0.0, y_with_exit_time(b, 2.3, false)};
    Trajectory a = integrate(s0, ControlLaw::constant(-1.0), 0.0, 1.0, 1e-3, b);
    Trajectory c = integrate(s0, ControlLaw::constant(-1.0), -5.0, -4.0, 1e-3, b);
    CHECK(a.samples.back().x == doctest::Approx(c.samples.back().x).epsilon(1e-15));
    CHECK(a.samples.back().y == doctest::Approx(c.samples.back().y).epsilon(1e-15));
    CHECK(a.running_cost() == doctest::Approx(c.running_cost()).epsilon(1e-15));
}

TEST_CASE("the accumulated cost matches a trapezoid sum over the samples") {
    CubicBound b = mu_from_gamma(0.5);
    Trajectory traj = integrate({-1e-4, 0.998}, ControlLaw::constant(0.0), 0.0, 2.0, 1e-4, b);
    double trap = 0.0;
    for (size_t i = 0; i + 1 < traj.samples.size(); ++i) {
        const TrajectorySample& p = traj.samples[i];
        const TrajectorySample& q = traj.samples[i + 1];
        trap += 0.5 * (q.t - p.t) * (p.y + q.y);
    }
    CHECK(traj.running_cost() == doctest::Approx(trap).epsilon(1e-8));
    // alpha is the integral of x along the flow.
    double trap_alpha = 0.0;
    for (size_t i = 0; i + 1 < traj.samples.size(); ++i) {
        const TrajectorySample& p = traj.samples[i];
        const TrajectorySample& q = traj.samples[i + 1];
        trap_alpha += 0.5 * (q.t - p.t) * (p.x + q.x);
    }
    CHECK(traj.samples.back().alpha - traj.samples.front().alpha ==
          doctest::Approx(trap_alpha).epsilon(1e-8));
}

TEST_CASE("leaving the box raises an integration fault") {
    CubicBound b = mu_from_gamma(0.5);
    // The +1 flow from (0, 1) exits through the upper-right boundary at
    // t_plus1 ~ 0.31; integrating past it must throw.
    CHECK_THROWS_AS((void)integrate({0.0, 1.0}, ControlLaw::constant(1.0), 0.0, 1.0, 1e-4, b),
                    std::runtime_error);
}

TEST_CASE("the +1 flow lands on the upper-right boundary at its threshold time") {
    CubicBound b = mu_from_gamma(0.5);
    const double t_exit = thresholds_max(0.0, 1.0, b).t_plus1;
    REQUIRE(t_exit < 1.0);
    Trajectory traj = integrate({0.0, 1.0}, ControlLaw::constant(1.0), 0.0, t_exit, 1e-4, b);
    const TrajectorySample& end = traj.samples.back();
    const double c_minus = b.mu * (1.0 - end.x) - end.y;
    CHECK(std::fabs(c_minus) < 1e-6);
}

TEST_CASE("the -1 flow lands on the lower-left boundary at the min threshold") {
    CubicBound b = mu_from_gamma(0.5);
    const double t_exit = threshold_min(0.05, 1.0, b);
    REQUIRE(std::isfinite(t_exit));
    Trajectory traj = integrate({0.05, 1.0}, ControlLaw::constant(-1.0), 0.0, t_exit, 1e-4, b);
    const TrajectorySample& end = traj.samples.back();
    const double a_minus = b.mu * end.y - (1.0 - end.x);
    CHECK(std::fabs(a_minus) < 1e-6);
}

TEST_CASE("free-problem law satisfies dynamic programming along the flow") {
    CubicBound b = mu_from_gamma(0.5);
    const double t0 = -1.5, t1 = -0.3, x0 = -0.5;
    Trajectory traj = integrate({x0, 0.0}, ControlLaw::free_formula(), t0, t1, 1e-4, b);
    const double x1 = traj.samples.back().x;
    CHECK(traj.running_cost() + bellman_free(t1, x1) ==
          doctest::Approx(bellman_free(t0, x0)).epsilon(1e-8));
    // Slopes increase along the maximizing flow toward the terminal value 1.
    CHECK(x1 > x0);
    SUBCASE("free law rejects nonnegative times") {
        CHECK_THROWS_AS(
            (void)integrate({0.0, 0.0}, ControlLaw::free_formula(), -1.0, 0.5, 1e-3, b),
            std::invalid_argument);
    }
}

TEST_CASE("integration input validation") {
    CubicBound b = mu_from_gamma(0.5);
    CHECK_THROWS_AS((void)integrate({0.0, 1.0}, ControlLaw::constant(-1.0), 0.0, 1.0, 0.0, b),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ControlLaw::constant(1.5), std::invalid_argument);
    CHECK_THROWS_AS((void)integrate({0.0, 2.5}, ControlLaw::constant(0.0), 0.0, 1.0, 1e-3, b),
                    std::domain_error);
}
