#pragma once

#include <limits>
#include <string>
#include <vector>

namespace logsurf {

enum class PotentialKind { gaussian, power, ball, shell, tabulated };

enum class Extrapolation { linear, hard_cutoff };

/// Constructor input for a piecewise-linear potential. The point (0, 0) is
/// implicit; `knots` are strictly increasing and positive.
struct TabulatedPotential {
    std::vector<double> knots;
    std::vector<double> values;
    Extrapolation extrapolation = Extrapolation::linear;
};

/// Radial potential phi of a rotation-invariant measure with density
/// proportional to exp(-phi(|y|)).
///
/// phi is nonnegative, nondecreasing, convex and may jump to +infinity at the
/// support radius. Immutable once built; safe to share across threads.
///
/// Two evaluation conventions exist for hard cutoffs. `value(t)` is +inf for
/// t >= support_radius(), while `left_value(t)` returns the left limit
/// phi(R-) at t == R. Surface densities on the support boundary use the left
/// limit, so the unit sphere under the ball-uniform measure has a nonzero
/// surface area.
class RadialPotential {
public:
    double value(double t) const;
    double left_value(double t) const;
    /// Right derivative; 0 where phi is flat or infinite below the support,
    /// +inf at and beyond a hard cutoff.
    double derivative(double t) const;
    /// exp(-value(t)); equals the shell indicator for the shell measure.
    double unnormalized_density(double t) const;

    double support_radius() const { return support_radius_; }
    /// Left end of the support. Nonzero only for the shell measure.
    double support_lower() const { return support_lower_; }

    PotentialKind kind() const { return kind_; }
    bool log_concave() const { return kind_ != PotentialKind::shell; }
    /// Smooth on the interior of the support (has a continuous derivative).
    bool smooth() const { return kind_ == PotentialKind::gaussian || kind_ == PotentialKind::power; }
    /// Power exponent for gaussian/power kinds.
    double exponent() const { return exponent_; }
    /// Breakpoints of a tabulated potential (knot positions), empty otherwise.
    const std::vector<double>& kinks() const { return knots_; }

    std::string describe() const;

private:
    friend RadialPotential make_gaussian();
    friend RadialPotential make_power(double p);
    friend RadialPotential make_ball(double radius);
    friend RadialPotential make_shell(double radius, double width, bool allow_non_logconcave);
    friend RadialPotential make_tabulated(const TabulatedPotential& table);

    double tabulated_value(double t) const;
    double tabulated_slope(double t) const;

    PotentialKind kind_ = PotentialKind::gaussian;
    double exponent_ = 2.0;
    double support_radius_ = std::numeric_limits<double>::infinity();
    double support_lower_ = 0.0;
    std::vector<double> knots_;   // without the implicit 0
    std::vector<double> values_;
    std::vector<double> slopes_;  // slopes_[i] on [knots_[i-1], knots_[i]], knots_[-1] = 0
    Extrapolation extrapolation_ = Extrapolation::linear;
};

/// phi(t) = t^2/2, the standard Gaussian measure.
RadialPotential make_gaussian();

/// phi(t) = t^p/p. Requires p >= 1; smaller p breaks convexity.
RadialPotential make_power(double p);

/// Normalized Lebesgue measure on the ball of the given radius.
RadialPotential make_ball(double radius);

/// Uniform measure on the annulus radius - width < |y| < radius. This measure
/// is not log-concave and is only constructed when the gate is open.
RadialPotential make_shell(double radius, double width, bool allow_non_logconcave = false);

/// Piecewise-linear interpolation of a convex nondecreasing table.
RadialPotential make_tabulated(const TabulatedPotential& table);

}  // namespace logsurf
