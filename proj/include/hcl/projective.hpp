#pragma once

namespace hcl {

/// Affine chart of a one-dimensional projective segment: the open interval
/// (left, right) with the two boundary points as the segment's endpoints.
struct SegmentChart {
    double left;
    double right;
    SegmentChart(double l, double r);
    bool contains(double p) const { return left < p && p < right; }
};

/// Cross ratio of the collinear quadruple ordered x, a, b, y on the line,
/// computed as (|y-a| |x-b|) / (|y-b| |x-a|).
double cross_ratio(double a, double b, double y, double x);

/// Projectively invariant distance between interior points a, b of the chart:
/// half the log of the cross ratio with the chart endpoints. Symmetric in a, b.
double hilbert_distance(const SegmentChart& chart, double a, double b);

/// Distance in the exponential parameterization of the segment, where the
/// point with parameter t sits at tanh(t) in the normalized chart (-1, 1).
double t_param_distance(double t_i, double t_f);

} // namespace hcl
