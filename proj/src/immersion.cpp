#include "hcl/immersion.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "hcl/csv.hpp"
#include "hcl/quadrature.hpp"

namespace hcl {

AnalyticProfile::AnalyticProfile(std::function<double(double)> alpha,
                                 std::function<double(double)> dalpha,
                                 std::function<double(double)> ddalpha,
                                 std::function<double(double)> dddalpha, double lo, double hi)
    : a_(std::move(alpha)),
      d1_(std::move(dalpha)),
      d2_(std::move(ddalpha)),
      d3_(std::move(dddalpha)),
      lo_(lo),
      hi_(hi) {
    if (!(lo < hi)) throw std::invalid_argument("AnalyticProfile: requires t_lo < t_hi");
}

ProfileDerivs AnalyticProfile::eval(double t) const {
    if (!(t >= lo_ && t <= hi_))
        throw std::domain_error("AnalyticProfile: parameter outside domain");
    return {a_(t), d1_(t), d2_(t), d3_ ? std::optional<double>(d3_(t)) : std::nullopt};
}

double metric_h(const ImmersionProfile& p, double t) {
    const ProfileDerivs d = p.eval(t);
    return d.ddalpha - d.dalpha * d.dalpha + 1.0;
}

double cubic_form(const ImmersionProfile& p, double t) {
    const ProfileDerivs d = p.eval(t);
    if (!d.dddalpha)
        throw std::domain_error("cubic_form: third derivative undefined at a corner point");
    const double a1 = d.dalpha;
    return *d.dddalpha - 6.0 * a1 * d.ddalpha + 4.0 * a1 * a1 * a1 - 4.0 * a1;
}

double riemann_length(const ImmersionProfile& p, double t_i, double t_f, double abs_tol) {
    if (!(t_i >= p.t_lo() && t_i <= p.t_hi() && t_f >= p.t_lo() && t_f <= p.t_hi()))
        throw std::domain_error("riemann_length: endpoints outside profile domain");
    if (t_i > t_f) std::swap(t_i, t_f);
    auto integrand = [&](double t) {
        const double h = metric_h(p, t);
        if (!(h > 0.0))
            throw std::domain_error("riemann_length: metric is not positive on the interval");
        return std::sqrt(h);
    };
    return adaptive_simpson(integrand, t_i, t_f, abs_tol);
}

AdmissibilityReport check_admissible(const ImmersionProfile& p, const CubicBound& bound,
                                     double grid_step, bool include_state_bounds) {
    if (!(grid_step > 0.0)) throw std::invalid_argument("check_admissible: step must be positive");
    AdmissibilityReport rep;
    rep.min_h = std::numeric_limits<double>::infinity();
    rep.worst_cubic_excess = -std::numeric_limits<double>::infinity();
    const auto corners = p.corner_points();
    auto near_corner = [&](double t) {
        for (double c : corners)
            if (std::fabs(t - c) <= 1e-12) return true;
        return false;
    };
    const double lo = p.t_lo(), hi = p.t_hi();
    const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / grid_step)));
    for (int i = 0; i <= n; ++i) {
        const double t = lo + (hi - lo) * i / n;
        const ProfileDerivs d = p.eval(t);
        const double h = d.ddalpha - d.dalpha * d.dalpha + 1.0;
        ++rep.samples;
        rep.min_h = std::min(rep.min_h, h);
        rep.max_abs_slope = std::max(rep.max_abs_slope, std::fabs(d.dalpha));
        if (!(h > 0.0)) rep.violations.push_back({t, "metric", h, 0.0});
        if (!(std::fabs(d.dalpha) < 1.0))
            rep.violations.push_back({t, "slope", d.dalpha, 1.0});
        if (d.dddalpha && h > 0.0) {
            const double a1 = d.dalpha;
            const double C = *d.dddalpha - 6.0 * a1 * d.ddalpha + 4.0 * a1 * a1 * a1 - 4.0 * a1;
            const double cap = 2.0 * bound.gamma * std::pow(h, 1.5);
            const double excess = std::fabs(C) - cap;
            rep.worst_cubic_excess = std::max(rep.worst_cubic_excess, excess);
            if (excess > 1e-9 * (1.0 + cap))
                rep.violations.push_back({t, "cubic", std::fabs(C), cap});
        } else if (!d.dddalpha && near_corner(t)) {
            ++rep.skipped_corners;
        }
        if (include_state_bounds && h > 0.0) {
            const double y = std::sqrt(h);
            const auto cls = state_bounds_check(d.dalpha, y, bound, 1e-9);
            if (cls.kind == StateClassification::Kind::Outside)
                rep.violations.push_back({t, "state", y, lower_boundary_y(d.dalpha, bound)});
        }
    }
    return rep;
}

void write_profile_csv(std::ostream& os, const ImmersionProfile& p, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("write_profile_csv: step must be positive");
    os << "t,alpha,dalpha,ddalpha,dddalpha\n";
    const double lo = p.t_lo(), hi = p.t_hi();
    const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / step)));
    for (int i = 0; i <= n; ++i) {
        const double t = lo + (hi - lo) * i / n;
        const ProfileDerivs d = p.eval(t);
        const double d3 = d.dddalpha ? *d.dddalpha : std::numeric_limits<double>::quiet_NaN();
        csv_row(os, {t, d.alpha, d.dalpha, d.ddalpha, d3});
    }
}

std::shared_ptr<ImmersionProfile> random_free_convexity_profile(double T, std::uint64_t seed) {
    if (!(T > 0.0)) throw std::invalid_argument("random_free_convexity_profile: requires T > 0");
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const int modes = 2 + static_cast<int>(rng() % 3);
    std::vector<double> amp(modes), freq(modes), phase(modes);
    for (int k = 0; k < modes; ++k) {
        amp[k] = 0.2 + 0.8 * unit();
        freq[k] = 0.3 + 2.2 * unit();
        phase[k] = 6.283185307179586 * unit();
    }
    auto d1_raw = [=](double t) {
        double s = 0.0;
        for (int k = 0; k < modes; ++k) s += amp[k] * std::sin(freq[k] * t + phase[k]);
        return s;
    };
    auto d2_raw = [=](double t) {
        double s = 0.0;
        for (int k = 0; k < modes; ++k) s += amp[k] * freq[k] * std::cos(freq[k] * t + phase[k]);
        return s;
    };
    // Scale amplitudes until |dalpha| <= 0.9 and h >= 0.05 on a dense grid.
    double scale = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        bool ok = true;
        for (int i = 0; i <= 400 && ok; ++i) {
            const double t = T * i / 400.0;
            const double x = scale * d1_raw(t);
            const double h = scale * d2_raw(t) - x * x + 1.0;
            if (std::fabs(x) > 0.9 || h < 0.05) ok = false;
        }
        if (ok) break;
        scale *= 0.8;
    }
    std::vector<double> a(modes);
    for (int k = 0; k < modes; ++k) a[k] = scale * amp[k];
    auto alpha = [=](double t) {
        double s = 0.0;
        for (int k = 0; k < modes; ++k) s += -a[k] / freq[k] * std::cos(freq[k] * t + phase[k]);
        return s;
    };
    auto d1 = [=](double t) {
        double s = 0.0;
        for (int k = 0; k < modes; ++k) s += a[k] * std::sin(freq[k] * t + phase[k]);
        return s;
    };
    auto d2 = [=](double t) {
        double s = 0.0;
        for (int k = 0; k < modes; ++k) s += a[k] * freq[k] * std::cos(freq[k] * t + phase[k]);
        return s;
    };
    auto d3 = [=](double t) {
        double s = 0.0;
        for (int k = 0; k < modes; ++k)
            s += -a[k] * freq[k] * freq[k] * std::sin(freq[k] * t + phase[k]);
        return s;
    };
    return std::make_shared<AnalyticProfile>(alpha, d1, d2, d3, 0.0, T);
}

} // namespace hcl
