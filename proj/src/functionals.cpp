#include "logsurf/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "logsurf/errors.hpp"
#include "logsurf/quadrature.hpp"

namespace logsurf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double log_unit_ball_volume(int d)
{
    const double half = 0.5 * static_cast<double>(d);
    return half * std::log(std::numbers::pi) - std::lgamma(half + 1.0);
}

double log_radial_density(const RadialPotential& phi, int k, double t)
{
    if (t < 0.0) return -kInf;
    const double v = phi.left_value(t);
    if (!std::isfinite(v)) return -kInf;
    if (k == 0) return -v;
    return static_cast<double>(k) * std::log(t) - v;
}

double peak_radius(const RadialPotential& phi, int k)
{
    if (k < 1) throw InputError("peak radius requires a radial exponent k >= 1");
    const double radius = phi.support_radius();
    const double kk = static_cast<double>(k);
    const auto reached = [&](double t) { return t >= radius || t * phi.derivative(t) >= kk; };

    double lo = phi.support_lower();
    double hi = radius;
    if (!std::isfinite(hi)) {
        hi = std::max(1.0, 2.0 * lo);
        int it = 0;
        while (!reached(hi)) {
            lo = hi;
            hi *= 2.0;
            if (++it > 1100 || !std::isfinite(hi)) throw NumericalError("measure not normalizable");
        }
    }
    return quad::bisect_boundary(reached, lo, hi);
}

LogScalar log_radial_moment(const RadialPotential& phi, int k)
{
    return log_radial_moment(phi, k, phi.support_lower(), phi.support_radius());
}

LogScalar log_radial_moment(const RadialPotential& phi, int k, double lo, double hi)
{
    if (k < 0) throw InputError("radial moment exponent must be nonnegative");
    lo = std::max(lo, phi.support_lower());
    hi = std::min(hi, phi.support_radius());
    if (!(hi > lo)) return LogScalar::zero();
    const auto log_f = [&phi, k](double t) { return log_radial_density(phi, k, t); };
    double peak;
    if (k >= 1)
        peak = peak_radius(phi, k);
    else
        peak = quad::locate_peak(log_f, phi.support_lower(), phi.support_radius());
    peak = std::clamp(peak, lo, hi);
    return quad::log_integral(log_f, lo, hi, peak, phi.kinks());
}

double log_profile_drop(const RadialPotential& phi, int m, double t0, double x)
{
    const double r = (1.0 + x) * t0;
    if (!(r > 0.0)) return kInf;
    if (r > phi.support_radius()) return kInf;
    const double v = phi.left_value(r);
    if (!std::isfinite(v)) return kInf;
    return v - phi.left_value(t0) - static_cast<double>(m) * std::log1p(x);
}

double inner_spread(const RadialPotential& phi, int m, double t0)
{
    const auto dropped = [&](double x) { return log_profile_drop(phi, m, t0, -x) >= 1.0; };
    return quad::bisect_boundary(dropped, 0.0, 1.0);
}

double outer_spread(const RadialPotential& phi, int m, double t0)
{
    const double radius = phi.support_radius();
    double hi;
    if (std::isfinite(radius)) {
        hi = radius / t0 - 1.0;
        if (!(hi > 0.0)) return 0.0;
        // phi jumps to +inf at the support radius, so the drop exceeds 1 there
        const double edge = hi;
        return quad::bisect_boundary(
            [&](double x) { return x >= edge || log_profile_drop(phi, m, t0, x) >= 1.0; }, 0.0, edge);
    }
    hi = 1.0;
    int it = 0;
    while (!(log_profile_drop(phi, m, t0, hi) >= 1.0)) {
        hi *= 2.0;
        if (++it > 1100) throw NumericalError("radial profile does not decay beyond its peak");
    }
    return quad::bisect_boundary([&](double x) { return log_profile_drop(phi, m, t0, x) >= 1.0; }, 0.0, hi);
}

LogScalar MeasureProfile::J(int k) const
{
    const auto it = log_J.find(k);
    if (it == log_J.end()) return log_radial_moment(potential, k);
    return it->second;
}

namespace {

// Integral of f(t) g_m(t) / J_m over the support, by adaptive quadrature on the
// union of the truncation windows of g_m and g_{m+2}.
double expectation_impl(const RadialPotential& phi, int m, double t0, LogScalar log_jm,
                        const std::function<double(double)>& f, std::span<const double> extra_breaks)
{
    const auto log_g = [&phi, m](double t) { return log_radial_density(phi, m, t); };
    const auto log_g2 = [&phi, m](double t) { return log_radial_density(phi, m + 2, t); };
    const double lo = phi.support_lower();
    const double hi = phi.support_radius();
    const quad::Window w1 = quad::find_window(log_g, lo, hi, t0);
    const double t2 = peak_radius(phi, m + 2);
    const quad::Window w2 = quad::find_window(log_g2, lo, hi, t2);
    const double a = std::min(w1.lo, w2.lo);
    const double b = std::max(w1.hi, w2.hi);

    std::vector<double> pts{a, b};
    for (double x : {t0, t2}) pts.push_back(x);
    for (double x : phi.kinks()) pts.push_back(x);
    for (double x : extra_breaks) pts.push_back(x);
    std::erase_if(pts, [&](double x) { return !(x >= a && x <= b); });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const double peak_value = log_g(t0);
    const auto integrand = [&](double t) {
        const double v = log_g(t) - peak_value;
        return v > -745.0 ? f(t) * std::exp(v) : 0.0;
    };
    const quad::QuadResult r = quad::integrate(integrand, pts, 1e-12, 1e-300);
    if (!r.converged) throw NumericalError("radial expectation quadrature did not converge");
    return r.value * std::exp(peak_value - log_jm.log_value);
}

}  // namespace

MeasureProfile make_profile(const RadialPotential& phi, int d)
{
    if (d < 2) throw InputError("dimension must be at least 2");
    MeasureProfile p;
    p.potential = phi;
    p.d = d;
    p.m = d - 1;
    p.t0 = peak_radius(phi, p.m);
    p.log_gm_t0 = LogScalar{log_radial_density(phi, p.m, p.t0)};
    for (int k = p.m - 1; k <= p.m + 2; ++k) p.log_J[k] = log_radial_moment(phi, k);
    p.lambda_i = inner_spread(phi, p.m, p.t0);
    p.lambda_o = outer_spread(phi, p.m, p.t0);
    p.lambda_sum = p.lambda_i + p.lambda_o;
    const LogScalar jm = p.log_J.at(p.m);
    p.lambda_ratio = std::exp(jm.log_value - std::log(p.t0) - p.log_gm_t0.log_value);
    p.log_normalizer = LogScalar{-(std::log(static_cast<double>(d)) + log_unit_ball_volume(d) + jm.log_value)};
    p.expectation = std::exp(p.log_J.at(p.m + 1).log_value - jm.log_value);
    const double mean = p.expectation;
    const double breaks[] = {mean};
    p.variance = expectation_impl(
        phi, p.m, p.t0, jm, [mean](double t) { return (t - mean) * (t - mean); }, breaks);
    return p;
}

double radial_expectation(const MeasureProfile& profile, const std::function<double(double)>& f)
{
    return expectation_impl(profile.potential, profile.m, profile.t0, profile.J(profile.m), f, {});
}

double radial_cdf(const MeasureProfile& profile, double r)
{
    if (!(r > profile.potential.support_lower())) return 0.0;
    const LogScalar part = log_radial_moment(profile.potential, profile.m, 0.0, r);
    return std::clamp(std::exp(part.log_value - profile.J(profile.m).log_value), 0.0, 1.0);
}

double max_surface_scale(const MeasureProfile& profile)
{
    return std::sqrt(static_cast<double>(profile.m)) / (std::sqrt(profile.lambda_ratio) * profile.t0);
}

double max_surface_scale_moments(const MeasureProfile& profile)
{
    return std::sqrt(static_cast<double>(profile.d)) /
           (std::sqrt(profile.expectation) * std::pow(profile.variance, 0.25));
}

double rough_surface_bound(const MeasureProfile& profile)
{
    return static_cast<double>(profile.m) *
           std::exp(profile.J(profile.m - 1).log_value - profile.J(profile.m).log_value);
}

LogScalar tail_mass_bound(const RadialPotential& phi, int m, double t0, double x, double drop)
{
    if (!(x > 0.0) || !(drop > 0.0)) throw InputError("tail bound requires x > 0 and drop > 0");
    const double actual = log_profile_drop(phi, m, t0, x);
    if (drop > actual + 1e-12 * std::max(1.0, std::abs(actual)))
        throw InputError("tail hypothesis not satisfied");
    return LogScalar{std::log(x) + std::log(t0) + log_radial_density(phi, m, t0) - std::log(drop) - drop};
}

AnnulusWidth check_annulus_width(const MeasureProfile& profile, double mu)
{
    if (!(mu > 0.0)) throw InputError("annulus width mu must be positive");
    AnnulusWidth out;
    out.mu = mu;
    out.drop = log_profile_drop(profile.potential, profile.m, profile.t0, mu);
    out.threshold = std::log(mu * std::sqrt(static_cast<double>(profile.m) / profile.lambda_sum));
    out.hypothesis_holds = out.drop >= out.threshold && out.threshold >= 1.0;
    return out;
}

AnnulusWidth annulus_width_candidate(const MeasureProfile& profile)
{
    if (profile.m < 2) throw InputError("annulus width candidate requires m >= 2");
    const double m = static_cast<double>(profile.m);
    return check_annulus_width(profile, std::log(m) / std::sqrt(m));
}

}  // namespace logsurf
