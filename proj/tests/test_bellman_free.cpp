#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "hcl/bellman.hpp"
#include "hcl/bounds.hpp"

using namespace hcl;

TEST_CASE("terminal condition: value vanishes at t = 0") {
    for (double x : {-1.0, -0.4, 0.0, 0.7, 1.0}) {
        CHECK(bellman_free(0.0, x) == doctest::Approx(0.0).epsilon(1e-15));
    }
    // Short-horizon asymptotics: B(-delta, x) = sqrt(delta (1 - x)) + O(delta^1.5).
    CHECK(bellman_free(-1e-13, 0.3) ==
          doctest::Approx(std::sqrt(1e-13 * 0.7)).epsilon(1e-5));
}

TEST_CASE("value at the left slope endpoint equals the sharp free bound") {
    // Starting from slope -1 realizes the maximal length over horizon d.
    for (double d : {0.3, 1.0, 2.0, 5.0}) {
        CHECK(bellman_free(-d, -1.0) == doctest::Approx(thm1_upper(d)).epsilon(1e-13));
    }
}

TEST_CASE("value decreases in the slope variable") {
    const double t = -1.2;
    double prev = bellman_free(t, -1.0);
    for (double x = -0.9; x <= 1.0; x += 0.1) {
        const double v = bellman_free(t, x);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("dynamic programming residual vanishes along the optimal flow") {
    // dB/dt + sqrt(u - x^2 + 1) = 0 along dx/dt = u at the optimal control.
    const double delta = 1e-6;
    for (double t : {-0.4, -1.0, -2.5}) {
        for (double x : {-0.8, -0.2, 0.5}) {
            CAPTURE(t);
            CAPTURE(x);
            const double u = optimal_u_free(t, x);
            CHECK(u >= x * x - 1.0); // keeps the metric nonnegative
            const double fwd = bellman_free(t + delta, x + u * delta);
            const double bwd = bellman_free(t - delta, x - u * delta);
            const double res = (fwd - bwd) / (2.0 * delta) + std::sqrt(u - x * x + 1.0);
            CHECK(std::fabs(res) < 1e-7);
        }
    }
}

TEST_CASE("the closed-form control beats nearby controls in a DP step") {
    const double t = -1.0, x = 0.1, delta = 1e-2;
    const double u_star = optimal_u_free(t, x);
    auto stepped = [&](double u) {
        return delta * std::sqrt(std::max(0.0, u - x * x + 1.0)) +
               bellman_free(t + delta, x + u * delta);
    };
    const double best = stepped(u_star);
    for (double du : {-0.5, -0.2, 0.2, 0.5}) {
        CHECK(best >= stepped(u_star + du) - 1e-10);
    }
}

TEST_CASE("extremal family solves its second-order equation") {
    // Members satisfy x'' = 2x(3x' - 2x^2 + 2); checked by central differences.
    const double h = 1e-4;
    for (double c : {-0.4, 0.3, 0.7}) {
        for (double t : {-2.0, -1.2, -0.5}) {
            CAPTURE(c);
            CAPTURE(t);
            const double xm = euler_lagrange_family(t - h, c);
            const double x0 = euler_lagrange_family(t, c);
            const double xp = euler_lagrange_family(t + h, c);
            const double dx = (xp - xm) / (2.0 * h);
            const double ddx = (xp - 2.0 * x0 + xm) / (h * h);
            CHECK(ddx == doctest::Approx(2.0 * x0 * (3.0 * dx - 2.0 * x0 * x0 + 2.0))
                             .epsilon(1e-5));
        }
    }
}

TEST_CASE("extremal family endpoint normalization and range") {
    for (double c : {-0.9, -0.3, 0.0, 0.5, 0.9}) {
        CHECK(euler_lagrange_family(0.0, c) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // Members with c in (0, 1) sweep the whole slope range [-1, 1] over the
    // window [-d(c), 0], where e^{2 d(c)} = (1+c)^2 / (4c) inverts the
    // horizon-to-parameter map; the sweep is monotone, symmetric about the
    // window midpoint, and steepens as c -> 1 (the window shrinks to zero).
    for (double c : {0.05, 0.3, 0.7}) {
        const double d = 0.5 * std::log((1.0 + c) * (1.0 + c) / (4.0 * c));
        CHECK(euler_lagrange_family(-d, c) == doctest::Approx(-1.0).epsilon(1e-9));
        double prev = euler_lagrange_family(-d, c);
        bool nondecreasing = true;
        for (int k = 1; k <= 40; ++k) {
            const double v = euler_lagrange_family(-d + d * k / 40.0, c);
            nondecreasing = nondecreasing && v >= prev - 1e-12;
            prev = v;
        }
        CHECK(nondecreasing);
        CHECK(prev == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(euler_lagrange_family(-0.25 * d, c) > euler_lagrange_family(-0.75 * d, c));
        // Mirror symmetry of each member about its own midpoint.
        CHECK(euler_lagrange_family(-0.2 * d, c) ==
              doctest::Approx(-euler_lagrange_family(-0.8 * d, c)).epsilon(1e-9));
    }
}

TEST_CASE("family member selected for horizon d starts at slope -1") {
    for (double d : {0.5, 1.0, 2.0}) {
        const double E = std::exp(2.0 * d);
        const double c = (2.0 * E - 1.0) - 2.0 * std::sqrt(E * E - E);
        CAPTURE(d);
        CHECK(c > -1.0);
        CHECK(c < 1.0);
        CHECK(euler_lagrange_family(-d, c) == doctest::Approx(-1.0).epsilon(1e-10));
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS((void)bellman_free(0.5, 0.0), std::domain_error);   // future time
    CHECK_THROWS_AS((void)bellman_free(-1.0, 1.5), std::domain_error);  // slope outside
    CHECK_THROWS_AS((void)optimal_u_free(0.0, 0.0), std::domain_error); // undefined at 0
    CHECK_THROWS_AS((void)optimal_u_free(-1.0, -1.2), std::domain_error);
    CHECK_THROWS_AS((void)euler_lagrange_family(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)euler_lagrange_family(-1.0, -1.0), std::invalid_argument);
    CHECK(std::isfinite(bellman_free(-3.0, 1.0)));
    CHECK(std::isfinite(bellman_free(-3.0, -1.0)));
}
