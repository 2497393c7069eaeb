#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hcl/cubic_bound.hpp"

namespace hcl {

enum class Smoothness { C2, C3, PiecewiseAnalytic };

/// Derivatives of the log-radial profile alpha at one parameter value.
/// dddalpha is absent exactly at corner points of a C2 profile.
struct ProfileDerivs {
    double alpha;
    double dalpha;
    double ddalpha;
    std::optional<double> dddalpha;
};

/// A planar centro-affine immersion t |-> e^{alpha(t)} (e^t, e^{-t}),
/// represented by its log-radial profile alpha on [t_lo, t_hi].
class ImmersionProfile {
public:
    virtual ~ImmersionProfile() = default;
    virtual ProfileDerivs eval(double t) const = 0;
    virtual double t_lo() const = 0;
    virtual double t_hi() const = 0;
    virtual Smoothness smoothness() const = 0;
    /// Parameter values where the third derivative is undefined.
    virtual std::vector<double> corner_points() const { return {}; }
};

/// Profile given by closed-form callables for alpha and its derivatives.
class AnalyticProfile : public ImmersionProfile {
public:
    AnalyticProfile(std::function<double(double)> alpha, std::function<double(double)> dalpha,
                    std::function<double(double)> ddalpha, std::function<double(double)> dddalpha,
                    double lo, double hi);
    ProfileDerivs eval(double t) const override;
    double t_lo() const override { return lo_; }
    double t_hi() const override { return hi_; }
    Smoothness smoothness() const override { return Smoothness::PiecewiseAnalytic; }

private:
    std::function<double(double)> a_, d1_, d2_, d3_;
    double lo_, hi_;
};

/// Induced metric coefficient h = ddalpha - dalpha^2 + 1. Positive exactly
/// where the immersion is locally strongly convex.
double metric_h(const ImmersionProfile& p, double t);

/// Cubic form coefficient C = dddalpha - 6 dalpha ddalpha + 4 dalpha^3 - 4 dalpha.
/// Throws where the profile has no third derivative (C2 corner).
double cubic_form(const ImmersionProfile& p, double t);

/// Length of the induced Riemannian metric between parameters t_i and t_f:
/// the integral of sqrt(h). Throws if h <= 0 is encountered.
double riemann_length(const ImmersionProfile& p, double t_i, double t_f, double abs_tol = 1e-10);

struct AdmissibilityViolation {
    double t;
    std::string kind; // "metric", "slope", "cubic", "state"
    double value;
    double limit;
};

struct AdmissibilityReport {
    int samples = 0;
    int skipped_corners = 0;
    double min_h = 0.0;
    double max_abs_slope = 0.0;
    double worst_cubic_excess = 0.0; // max of |C| - 2 gamma h^{3/2}, <= 0 when satisfied
    std::vector<AdmissibilityViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Grid check of h > 0, |dalpha| < 1, the cubic bound, and (optionally) the
/// state box. Corner points of C2 profiles skip the pointwise cubic check.
AdmissibilityReport check_admissible(const ImmersionProfile& p, const CubicBound& bound,
                                     double grid_step, bool include_state_bounds = true);

/// Columns: t, alpha, dalpha, ddalpha, dddalpha (17 significant digits).
/// dddalpha is written as nan at C2 corner points.
void write_profile_csv(std::ostream& os, const ImmersionProfile& p, double step);

/// Random trigonometric-polynomial profile with |dalpha| < 1 and h > 0 on
/// [0, T] (no cubic bound imposed); deterministic in the seed.
std::shared_ptr<ImmersionProfile> random_free_convexity_profile(double T, std::uint64_t seed);

} // namespace hcl
