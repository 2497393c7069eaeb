#include "hcl/projective.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace hcl {

SegmentChart::SegmentChart(double l, double r) : left(l), right(r) {
    if (!(std::isfinite(l) && std::isfinite(r)) || !(l < r))
        throw std::invalid_argument("SegmentChart: requires finite left < right");
}

double cross_ratio(double a, double b, double y, double x) {
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(y) && std::isfinite(x)))
        throw std::domain_error("cross_ratio: non-finite input");
    const double num = std::fabs(y - a) * std::fabs(x - b);
    const double den = std::fabs(y - b) * std::fabs(x - a);
    if (den == 0.0)
        throw std::domain_error("cross_ratio: degenerate quadruple");
    return num / den;
}

double hilbert_distance(const SegmentChart& chart, double a, double b) {
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw std::domain_error("hilbert_distance: non-finite input");
    if (!chart.contains(a) || !chart.contains(b))
        throw std::domain_error("hilbert_distance: point outside chart");
    if (a == b) return 0.0;
    if (a > b) std::swap(a, b);
    // Log-space evaluation of the cross-ratio factors; each difference is
    // positive because left < a <= b < right.
    const double x = chart.left, y = chart.right;
    return 0.5 * (std::log(y - a) - std::log(y - b) + std::log(b - x) - std::log(a - x));
}

double t_param_distance(double t_i, double t_f) {
    if (!(std::isfinite(t_i) && std::isfinite(t_f)))
        throw std::domain_error("t_param_distance: non-finite input");
    return std::fabs(t_i - t_f);
}

} // namespace hcl
