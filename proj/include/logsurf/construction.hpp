#pragma once

#include <cstdint>
#include <vector>

#include "logsurf/bodies.hpp"
#include "logsurf/functionals.hpp"

namespace logsurf {

/// Parameters of a random polytope circumscribed about the sphere of radius
/// rho: N_eff half-spaces {<x, u_i> <= rho} with uniform directions u_i.
struct PolytopeSpec {
    double rho = 0.0;
    double annulus_width = 0.0;  ///< W = lambda t0
    double facets_real = 0.0;    ///< facet count before rounding
    std::int64_t facets = 1;     ///< max(1, round(facets_real))
    double c_rho = 0.2;
    std::uint64_t seed = 0;
};

/// rho = c_rho t0 / sqrt(lambda m), W = lambda t0 and
/// N = (sqrt(m) rho / t0) (1 - rho^2 / (t0 + W)^2)^{-m/2}.
/// Throws InputError when rho >= t0 - W.
PolytopeSpec plan_polytope(const MeasureProfile& profile, double c_rho = 0.2, std::uint64_t seed = 0);

/// Probability that a uniform direction u has <x, u> > rho for a fixed point x
/// with |x| = r, in dimension m + 1. Zero when r <= rho.
double cap_probability(const MeasureProfile& profile, double r, double rho);

/// Draws the polytope for `spec`. Each trial index gives an independent draw.
Polytope sample_polytope(const PolytopeSpec& spec, const MeasureProfile& profile, std::uint64_t trial = 0);

struct ConstructionEstimate {
    SurfaceEstimate estimate;            ///< mean over trials; std_error is the Monte Carlo part only
    double between_trial_stderr = 0.0;   ///< sample deviation of the trial values over sqrt(trials)
    std::vector<double> trial_values;
    PolytopeSpec spec;

    /// Larger of the two error measures, for significance tests.
    double total_stderr() const;
};

/// Mean facet-MC surface area over `trials` random polytopes. When the
/// polytope has more than `facet_subsample` facets, a uniform subset of that
/// size is estimated and scaled by N_eff / facet_subsample.
ConstructionEstimate expected_surface(const MeasureProfile& profile, double c_rho, int trials, int samples_per_facet,
                                      int facet_subsample, std::uint64_t seed);

}  // namespace logsurf
