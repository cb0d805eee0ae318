#pragma once

#include <functional>
#include <map>

#include "logsurf/log_scalar.hpp"
#include "logsurf/potential.hpp"

namespace logsurf {

/// log of the volume of the unit ball in R^d, via log-Gamma.
double log_unit_ball_volume(int d);

/// log g_k(t) = k log t - phi(t-), with the k = 0 term dropped so that
/// t = 0 is well defined. Uses the left limit of phi at a hard cutoff.
double log_radial_density(const RadialPotential& phi, int k, double t);

/// Maximizer of k log t - phi(t) on (0, support_radius]: the interior root of
/// t phi'(t) = k, or the support radius when a hard cutoff comes first.
/// Throws NumericalError("measure not normalizable") when no maximum exists.
double peak_radius(const RadialPotential& phi, int k);

/// log of the radial integral of t^k e^{-phi(t)} over [0, inf).
LogScalar log_radial_moment(const RadialPotential& phi, int k);

/// log of the radial integral of t^k e^{-phi(t)} over [lo, hi].
LogScalar log_radial_moment(const RadialPotential& phi, int k, double lo, double hi);

/// Log drop of the radial profile g_m at (1+x) t0 relative to its peak:
/// phi((1+x) t0) - phi(t0) - m log(1+x). +inf beyond the support.
double log_profile_drop(const RadialPotential& phi, int m, double t0, double x);

/// Relative inner and outer distances from t0 at which g_m falls by a factor e.
/// The outer spread is 0 when phi jumps to +inf at t0.
double inner_spread(const RadialPotential& phi, int m, double t0);
double outer_spread(const RadialPotential& phi, int m, double t0);

/// Every scalar functional of a (phi, d) pair, with m = d - 1 the radial
/// exponent.
struct MeasureProfile {
    RadialPotential potential;
    int d = 0;
    int m = 0;
    double t0 = 0.0;                  ///< characteristic radius, the argmax of g_m
    LogScalar log_gm_t0;              ///< log g_m(t0)
    std::map<int, LogScalar> log_J;   ///< radial moments for k = m-1 .. m+2
    double lambda_i = 0.0;            ///< inner spread
    double lambda_o = 0.0;            ///< outer spread
    double lambda_sum = 0.0;          ///< lambda_i + lambda_o
    double lambda_ratio = 0.0;        ///< J_m / (t0 g_m(t0))
    LogScalar log_normalizer;         ///< density normalizer C_d
    double expectation = 0.0;         ///< E|X|
    double variance = 0.0;            ///< Var|X|

    LogScalar J(int k) const;
};

/// Assembles the full profile. Requires d >= 2.
MeasureProfile make_profile(const RadialPotential& phi, int d);

/// E f(|X|) for X distributed by the profile's measure, by direct quadrature
/// against g_m / J_m.
double radial_expectation(const MeasureProfile& profile, const std::function<double(double)>& f);

/// P(|X| <= r) by quadrature.
double radial_cdf(const MeasureProfile& profile, double r);

/// sqrt(m) / (sqrt(lambda_ratio) t0): the order of the maximal surface area.
double max_surface_scale(const MeasureProfile& profile);

/// sqrt(d) / (sqrt(E|X|) Var|X|^{1/4}): the same order in moment form.
double max_surface_scale_moments(const MeasureProfile& profile);

/// m J_{m-1} / J_m, an upper bound on the surface area of every convex set.
double rough_surface_bound(const MeasureProfile& profile);

/// log of x t0 g_m(t0) / (drop e^drop), which bounds the mass of g_m beyond
/// (1+x) t0 whenever the profile has fallen by at least `drop` nats there.
/// Throws InputError("tail hypothesis not satisfied") otherwise.
LogScalar tail_mass_bound(const RadialPotential& phi, int m, double t0, double x, double drop);

struct AnnulusWidth {
    double mu = 0.0;
    bool hypothesis_holds = false;
    double drop = 0.0;       ///< log-profile drop at (1+mu) t0
    double threshold = 0.0;  ///< log(mu sqrt(m / lambda))
};

/// mu = log(m)/sqrt(m) and whether drop(mu) >= log(mu sqrt(m/lambda)) >= 1
/// holds for this measure. Requires m >= 2.
AnnulusWidth annulus_width_candidate(const MeasureProfile& profile);

/// The same check for an arbitrary mu.
AnnulusWidth check_annulus_width(const MeasureProfile& profile, double mu);

}  // namespace logsurf
