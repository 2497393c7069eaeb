#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "hcl/projective.hpp"

using namespace hcl;

TEST_CASE("cross ratio of hand-computed quadruples") {
    // Order x < a < b < y on the line; cross_ratio(a, b, y, x).
    // (|y-a| |x-b|) / (|y-b| |x-a|) with x=-1, a=0, b=1/2, y=1:
    // (1 * 3/2) / (1/2 * 1) = 3.
    CHECK(cross_ratio(0.0, 0.5, 1.0, -1.0) == doctest::Approx(3.0).epsilon(1e-15));
    // Harmonic-style quadruple: a=-1/3, b=1/3 inside (-1, 1):
    // (4/3 * 4/3) / (2/3 * 2/3) = 4.
    CHECK(cross_ratio(-1.0 / 3.0, 1.0 / 3.0, 1.0, -1.0) == doctest::Approx(4.0).epsilon(1e-15));
    // Swapping the interior pair inverts the ratio.
    CHECK(cross_ratio(1.0 / 3.0, -1.0 / 3.0, 1.0, -1.0) ==
          doctest::Approx(0.25).epsilon(1e-15));
    // Coincident interior points give ratio 1.
    CHECK(cross_ratio(0.2, 0.2, 1.0, -1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("cross ratio input validation") {
    // Degenerate quadruples are the ones whose denominator factors vanish:
    // an evaluation point colliding with its paired endpoint.
    CHECK_THROWS_AS((void)cross_ratio(0.0, 1.0, 1.0, -0.5), std::domain_error); // y == b
    CHECK_THROWS_AS((void)cross_ratio(-0.5, 0.0, 1.0, -0.5), std::domain_error); // x == a
    const double nan = std::nan("");
    CHECK_THROWS_AS((void)cross_ratio(nan, 0.5, 1.0, -1.0), std::domain_error);
    CHECK_THROWS_AS((void)cross_ratio(0.0, 0.5, 1.0, -INFINITY), std::domain_error);
}

TEST_CASE("hilbert distance on the unit interval") {
    SegmentChart chart(-1.0, 1.0);
    CHECK(hilbert_distance(chart, -1.0 / 3.0, 1.0 / 3.0) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(hilbert_distance(chart, 0.0, 0.5) ==
          doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));
    SUBCASE("symmetry") {
        CHECK(hilbert_distance(chart, -0.7, 0.4) ==
              doctest::Approx(hilbert_distance(chart, 0.4, -0.7)).epsilon(1e-15));
    }
    SUBCASE("coincident points have distance zero") {
        CHECK(hilbert_distance(chart, 0.3, 0.3) == doctest::Approx(0.0));
    }
    SUBCASE("triangle equality along the segment") {
        // On a one-dimensional domain the distance is additive along the line.
        const double a = -0.6, m = 0.1, b = 0.8;
        CHECK(hilbert_distance(chart, a, b) ==
              doctest::Approx(hilbert_distance(chart, a, m) + hilbert_distance(chart, m, b))
                  .epsilon(1e-13));
    }
}

TEST_CASE("tanh parametrization turns the metric into |dt|") {
    SegmentChart chart(-1.0, 1.0);
    const double t1 = -0.7, t2 = 1.3;
    CHECK(hilbert_distance(chart, std::tanh(t1), std::tanh(t2)) ==
          doctest::Approx(std::fabs(t2 - t1)).epsilon(1e-13));
    CHECK(t_param_distance(t1, t2) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(t_param_distance(3.0, 3.0) == doctest::Approx(0.0));
    CHECK(t_param_distance(2.0, -2.0) == t_param_distance(-2.0, 2.0));
}

TEST_CASE("hilbert distance is a projective invariant") {
    // Moebius map m(p) = (2p + 1)/(p + 3), monotone on [-1, 1].
    auto m = [](double p) { return (2.0 * p + 1.0) / (p + 3.0); };
    SegmentChart chart(-1.0, 1.0);
    SegmentChart image(m(-1.0), m(1.0));
    const double a = -1.0 / 3.0, b = 1.0 / 3.0;
    CHECK(hilbert_distance(image, m(a), m(b)) ==
          doctest::Approx(hilbert_distance(chart, a, b)).epsilon(1e-13));
    SUBCASE("affine maps preserve it too") {
        auto aff = [](double p) { return 3.0 * p - 2.0; };
        SegmentChart affine_image(aff(-1.0), aff(1.0));
        CHECK(hilbert_distance(affine_image, aff(a), aff(b)) ==
              doctest::Approx(hilbert_distance(chart, a, b)).epsilon(1e-13));
    }
}

TEST_CASE("segment chart validation and membership") {
    CHECK_THROWS_AS(SegmentChart(1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(SegmentChart(0.0, 0.0), std::invalid_argument);
    SegmentChart chart(-2.0, 5.0);
    CHECK(chart.contains(0.0));
    CHECK(!chart.contains(-2.0)); // endpoints are at infinite distance
    CHECK(!chart.contains(6.0));
    CHECK_THROWS_AS((void)hilbert_distance(chart, -2.0, 0.0), std::domain_error);
}

TEST_CASE("distance blows up at the boundary") {
    SegmentChart chart(-1.0, 1.0);
    double prev = 0.0;
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        double d = hilbert_distance(chart, 0.0, 1.0 - eps);
        CHECK(d > prev);
        prev = d;
    }
    // d(0, 1-eps) = 0.5 log((2-eps)/eps) -> asymptotically 0.5 log(2/eps).
    // A power-of-two eps keeps 1 - eps and the difference 1 - (1 - eps)
    // exactly representable, so the identity holds to rounding.
    const double eps = 0x1p-20;
    CHECK(hilbert_distance(chart, 0.0, 1.0 - eps) ==
          doctest::Approx(0.5 * std::log((2.0 - eps) / eps)).epsilon(1e-13));
}
