#include "logsurf/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "logsurf/errors.hpp"

namespace logsurf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double power_value(double p, double t)
{
    if (p == 2.0) return 0.5 * t * t;
    if (p == 1.0) return t;
    return std::pow(t, p) / p;
}

double power_derivative(double p, double t)
{
    if (p == 2.0) return t;
    if (p == 1.0) return 1.0;
    return std::pow(t, p - 1.0);
}

}  // namespace

double RadialPotential::value(double t) const
{
    switch (kind_) {
    case PotentialKind::gaussian:
    case PotentialKind::power:
        return power_value(exponent_, t);
    case PotentialKind::ball:
        return t < support_radius_ ? 0.0 : kInf;
    case PotentialKind::shell:
        return (t > support_lower_ && t < support_radius_) ? 0.0 : kInf;
    case PotentialKind::tabulated:
        if (t >= support_radius_) return kInf;
        return tabulated_value(t);
    }
    return kInf;
}

double RadialPotential::left_value(double t) const
{
    if (t == support_radius_ && std::isfinite(t)) {
        switch (kind_) {
        case PotentialKind::ball:
        case PotentialKind::shell:
            return 0.0;
        case PotentialKind::tabulated:
            return tabulated_value(t);
        default:
            break;
        }
    }
    return value(t);
}

double RadialPotential::derivative(double t) const
{
    switch (kind_) {
    case PotentialKind::gaussian:
    case PotentialKind::power:
        return power_derivative(exponent_, t);
    case PotentialKind::ball:
    case PotentialKind::shell:
        return t < support_radius_ ? 0.0 : kInf;
    case PotentialKind::tabulated:
        if (t >= support_radius_) return kInf;
        return tabulated_slope(t);
    }
    return kInf;
}

double RadialPotential::unnormalized_density(double t) const
{
    return std::exp(-value(t));
}

double RadialPotential::tabulated_value(double t) const
{
    // first knot strictly greater than t
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const auto i = static_cast<std::size_t>(it - knots_.begin());
    if (i == knots_.size()) return values_.back() + slopes_.back() * (t - knots_.back());
    const double x0 = i == 0 ? 0.0 : knots_[i - 1];
    const double v0 = i == 0 ? 0.0 : values_[i - 1];
    return v0 + slopes_[i] * (t - x0);
}

double RadialPotential::tabulated_slope(double t) const
{
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const auto i = static_cast<std::size_t>(it - knots_.begin());
    return i == knots_.size() ? slopes_.back() : slopes_[i];
}

std::string RadialPotential::describe() const
{
    std::ostringstream os;
    switch (kind_) {
    case PotentialKind::gaussian: os << "gaussian"; break;
    case PotentialKind::power: os << "gp:p=" << exponent_; break;
    case PotentialKind::ball: os << "ball:R=" << support_radius_; break;
    case PotentialKind::shell:
        os << "shell:R=" << support_radius_ << ",eps=" << support_radius_ - support_lower_;
        break;
    case PotentialKind::tabulated:
        os << "table(" << knots_.size() << " knots, "
           << (extrapolation_ == Extrapolation::linear ? "linear" : "cutoff") << ")";
        break;
    }
    return os.str();
}

RadialPotential make_gaussian()
{
    RadialPotential phi;
    phi.kind_ = PotentialKind::gaussian;
    phi.exponent_ = 2.0;
    return phi;
}

RadialPotential make_power(double p)
{
    if (!(p >= 1.0) || !std::isfinite(p))
        throw InputError("power potential requires p >= 1 (t^p/p is not convex for p < 1)");
    RadialPotential phi;
    phi.kind_ = PotentialKind::power;
    phi.exponent_ = p;
    return phi;
}

RadialPotential make_ball(double radius)
{
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw InputError("ball measure requires a finite radius R > 0");
    RadialPotential phi;
    phi.kind_ = PotentialKind::ball;
    phi.support_radius_ = radius;
    return phi;
}

RadialPotential make_shell(double radius, double width, bool allow_non_logconcave)
{
    if (!(radius > 0.0) || !std::isfinite(radius) || !(width > 0.0) || !(width < radius))
        throw InputError("shell measure requires 0 < eps < R");
    if (!allow_non_logconcave)
        throw NonLogConcaveError(
            "shell measure is not log-concave; the maximal surface law only covers rotation-invariant "
            "log-concave measures (pass --allow-non-logconcave to study it as a counterexample)");
    RadialPotential phi;
    phi.kind_ = PotentialKind::shell;
    phi.support_radius_ = radius;
    phi.support_lower_ = radius - width;
    return phi;
}

RadialPotential make_tabulated(const TabulatedPotential& table)
{
    const auto& x = table.knots;
    const auto& v = table.values;
    if (x.empty() || x.size() != v.size())
        throw InputError("tabulated potential needs matching, nonempty knot and value arrays");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(v[i]))
            throw InputError("tabulated potential entries must be finite");
        if (!(x[i] > (i == 0 ? 0.0 : x[i - 1])))
            throw InputError("tabulated knots must be positive and strictly increasing");
    }
    std::vector<double> slopes(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double x0 = i == 0 ? 0.0 : x[i - 1];
        const double v0 = i == 0 ? 0.0 : v[i - 1];
        slopes[i] = (v[i] - v0) / (x[i] - x0);
    }
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        const double tol = 1e-12 * std::max(1.0, std::abs(slopes[i]));
        if (slopes[i] < -tol)
            throw InputError("tabulated potential must be nondecreasing");
        if (i > 0 && slopes[i] < slopes[i - 1] - tol)
            throw InputError("tabulated potential must be convex (slopes nondecreasing)");
    }

    RadialPotential phi;
    phi.kind_ = PotentialKind::tabulated;
    phi.knots_ = x;
    phi.values_ = v;
    phi.slopes_ = std::move(slopes);
    phi.extrapolation_ = table.extrapolation;
    if (table.extrapolation == Extrapolation::hard_cutoff) phi.support_radius_ = x.back();
    return phi;
}

}  // namespace logsurf
