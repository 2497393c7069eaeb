#include "doctest.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "hcl/bounds.hpp"
#include "hcl/cubic_bound.hpp"

using namespace hcl;

namespace {

// Straightforward transcriptions of the closed forms, written without the
// overflow-hardened rearrangements used by the library, as oracles for
// moderate arguments.
double oracle_thm1(double d) { return std::log(std::exp(d) + std::sqrt(std::exp(2.0 * d) - 1.0)); }

double oracle_thm2(double d, const CubicBound& b) {
    const double mu = b.mu, m2 = mu * mu;
    const double split = std::log((m2 + 1.0) / (m2 - 1.0));
    if (d <= split)
        return (2.0 * mu / (m2 + 1.0)) * std::log(1.0 + 0.5 * (m2 + 1.0) * (std::exp(d) - 1.0));
    return std::log((mu - 1.0) / (mu + 1.0)) + oracle_thm1(d) +
           (2.0 * mu / (m2 + 1.0)) * std::log(2.0 * m2 / (m2 - 1.0));
}

double oracle_thm2_relaxed(double d, const CubicBound& b) {
    const double mu = b.mu, m2 = mu * mu;
    return d + std::log(2.0) - std::log((mu + 1.0) / (mu - 1.0)) +
           (2.0 * mu / (m2 + 1.0)) * std::log(2.0 * m2 / (m2 - 1.0));
}

double oracle_thm3(double d, const CubicBound& b) {
    const double mu = b.mu, m2 = mu * mu;
    return (2.0 * mu / (m2 + 1.0)) *
           std::log((std::exp(d) * (m2 + 1.0) + m2 - 1.0) / (2.0 * m2));
}

double oracle_thm3_relaxed(double d, const CubicBound& b) {
    const double mu = b.mu, m2 = mu * mu;
    return (2.0 * mu / (m2 + 1.0)) * (d - std::log(2.0 * m2 / (m2 + 1.0)));
}

} // namespace

TEST_CASE("free convexity bound at hand-computed points") {
    // At d = log 2: log(2 + sqrt(3)).
    CHECK(thm1_upper(std::log(2.0)) == doctest::Approx(1.3169578969248166).epsilon(1e-15));
    CHECK(thm1_upper(0.0) == doctest::Approx(0.0));
    CHECK(thm1_upper(1.0) == doctest::Approx(1.6574544541530771).epsilon(1e-14));
    SUBCASE("large-argument asymptote d + log 2, overflow-free") {
        CHECK(thm1_upper(20.0) - 20.0 == doctest::Approx(std::log(2.0)).epsilon(1e-6));
        CHECK(std::isfinite(thm1_upper(500.0)));
        CHECK(thm1_upper(500.0) - 500.0 == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    }
}

TEST_CASE("cubic-bound curves match plain transcriptions of their formulas") {
    for (double gamma : {0.25, 0.5, 1.0, 1.5}) {
        CubicBound b = mu_from_gamma(gamma);
        for (double d : {0.05, 0.3, 1.0, 1.4166, 2.0, 5.0, 12.0}) {
            CAPTURE(gamma);
            CAPTURE(d);
            CHECK(thm1_upper(d) == doctest::Approx(oracle_thm1(d)).epsilon(1e-13));
            CHECK(thm2_upper(d, b) == doctest::Approx(oracle_thm2(d, b)).epsilon(1e-13));
            CHECK(thm2_relaxed(d, b) == doctest::Approx(oracle_thm2_relaxed(d, b)).epsilon(1e-13));
            CHECK(thm3_lower(d, b) == doctest::Approx(oracle_thm3(d, b)).epsilon(1e-13));
            CHECK(thm3_relaxed(d, b) == doctest::Approx(oracle_thm3_relaxed(d, b)).epsilon(1e-13));
        }
    }
}

TEST_CASE("frozen reference values at gamma = 0.5") {
    CubicBound b = mu_from_gamma(0.5);
    CHECK(thm2_upper(1.0, b) == doctest::Approx(1.1489597666470071).epsilon(1e-14));
    CHECK(thm2_relaxed(1.0, b) == doctest::Approx(1.1834154424406509).epsilon(1e-14));
    CHECK(thm3_lower(1.0, b) == doctest::Approx(0.842385643381375).epsilon(1e-14));
    CHECK(thm3_relaxed(1.0, b) == doctest::Approx(0.75947202952743165).epsilon(1e-14));
    CHECK(thm2_upper(2.0, b) == doctest::Approx(2.1788047591881803).epsilon(1e-14));
}

TEST_CASE("curve ordering for positive distance") {
    for (double gamma : {0.25, 0.5, 1.5}) {
        CubicBound b = mu_from_gamma(gamma);
        for (double d : {0.1, 0.7, 1.4166, 3.0, 8.0}) {
            CAPTURE(gamma);
            CAPTURE(d);
            CHECK(thm3_relaxed(d, b) <= thm3_lower(d, b) + 1e-15);
            CHECK(thm3_lower(d, b) < d);
            CHECK(d < thm2_upper(d, b));
            CHECK(thm2_upper(d, b) <= thm2_relaxed(d, b) + 1e-15);
            CHECK(thm2_upper(d, b) < thm1_upper(d));
            auto [lo, hi] = thm4_geodesic_bounds(d, b);
            CHECK(lo == doctest::Approx(d / b.mu));
            CHECK(hi == doctest::Approx(d * b.mu));
            CHECK(lo < thm2_upper(d, b));
            CHECK(thm3_lower(d, b) < hi);
        }
    }
}

TEST_CASE("upper branch point is a continuous and smooth junction") {
    CubicBound b = mu_from_gamma(0.5);
    const double m2 = b.mu * b.mu;
    const double split = std::log((m2 + 1.0) / (m2 - 1.0));
    const double left = thm2_upper(split - 1e-9, b);
    const double right = thm2_upper(split + 1e-9, b);
    CHECK(std::fabs(left - right) < 1e-8);
    // One-sided difference quotients agree to first order.
    const double h = 1e-6;
    const double slope_left = (thm2_upper(split, b) - thm2_upper(split - h, b)) / h;
    const double slope_right = (thm2_upper(split + h, b) - thm2_upper(split, b)) / h;
    CHECK(slope_left == doctest::Approx(slope_right).epsilon(1e-4));
}

TEST_CASE("relaxations become tight as distance grows") {
    CubicBound b = mu_from_gamma(0.5);
    CHECK(thm2_relaxed(30.0, b) - thm2_upper(30.0, b) ==
          doctest::Approx(0.0).epsilon(1e-10));
    CHECK(thm3_lower(30.0, b) - thm3_relaxed(30.0, b) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("gap between the sharp upper bound and d is strictly increasing") {
    CubicBound b = mu_from_gamma(0.5);
    double prev = delta_gap(0.01, b);
    CHECK(prev > 0.0);
    for (int i = 2; i <= 500; ++i) {
        const double d = 0.01 * i;
        const double g = delta_gap(d, b);
        CHECK(g > prev);
        prev = g;
    }
    CHECK(delta_gap(1.0, b) == doctest::Approx(thm2_upper(1.0, b) - 1.0).epsilon(1e-13));
}

TEST_CASE("degenerate bound collapses everything onto the diagonal") {
    CubicBound b = mu_from_gamma(0.0);
    for (double d : {0.2, 1.0, 4.0}) {
        CHECK(thm2_upper(d, b) == doctest::Approx(d).epsilon(1e-14));
        CHECK(thm2_relaxed(d, b) == doctest::Approx(d).epsilon(1e-14));
        CHECK(thm3_lower(d, b) == doctest::Approx(d).epsilon(1e-14));
        CHECK(thm3_relaxed(d, b) == doctest::Approx(d).epsilon(1e-14));
        auto [lo, hi] = thm4_geodesic_bounds(d, b);
        CHECK(lo == doctest::Approx(d).epsilon(1e-14));
        CHECK(hi == doctest::Approx(d).epsilon(1e-14));
        CHECK(thm1_upper(d) > d); // the free bound does not collapse
    }
}

TEST_CASE("each curve is increasing in distance") {
    CubicBound b = mu_from_gamma(1.0);
    double d_prev = 0.05;
    BoundCurveSample prev = evaluate_bounds(d_prev, b);
    for (double d = 0.15; d <= 6.0; d += 0.1) {
        BoundCurveSample s = evaluate_bounds(d, b);
        CHECK(s.thm1_upper > prev.thm1_upper);
        CHECK(s.thm2_upper > prev.thm2_upper);
        CHECK(s.thm2_relaxed > prev.thm2_relaxed);
        CHECK(s.thm3_lower > prev.thm3_lower);
        CHECK(s.thm3_relaxed > prev.thm3_relaxed);
        prev = s;
    }
}

TEST_CASE("evaluate_bounds packs consistent fields") {
    CubicBound b = mu_from_gamma(0.5);
    BoundCurveSample s = evaluate_bounds(1.3, b);
    CHECK(s.dH == doctest::Approx(1.3));
    CHECK(s.E == doctest::Approx(std::exp(1.3)).epsilon(1e-15));
    CHECK(s.gamma == doctest::Approx(0.5));
    CHECK(s.mu == doctest::Approx(b.mu));
    CHECK(s.thm1_upper == doctest::Approx(thm1_upper(1.3)));
    CHECK(s.thm2_upper == doctest::Approx(thm2_upper(1.3, b)));
    CHECK(s.thm3_lower == doctest::Approx(thm3_lower(1.3, b)));
}

TEST_CASE("blaschke corollary bounds are the mu = sqrt(n) instance") {
    for (int n : {1, 2, 3, 4}) {
        BoundCurveSample via_n = blaschke_corollary_bounds(0.8, n);
        BoundCurveSample direct = evaluate_bounds(0.8, blaschke_bound(n));
        CHECK(via_n.thm2_upper == doctest::Approx(direct.thm2_upper).epsilon(1e-15));
        CHECK(via_n.thm3_lower == doctest::Approx(direct.thm3_lower).epsilon(1e-15));
        CHECK(via_n.mu == doctest::Approx(std::sqrt(double(n))).epsilon(1e-15));
    }
}

TEST_CASE("bounds csv header and shape") {
    CubicBound b = mu_from_gamma(0.5);
    std::vector<BoundCurveSample> rows{evaluate_bounds(0.5, b), evaluate_bounds(1.0, b)};
    std::ostringstream os;
    write_bounds_csv(os, rows);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "dH,E,thm1_upper,thm2_upper,thm2_relaxed,thm3_lower,thm3_relaxed,gamma,mu");
    int n = 0;
    while (std::getline(is, line)) ++n;
    CHECK(n == 2);
}
