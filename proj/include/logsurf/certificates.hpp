#pragma once

#include <optional>
#include <string>

#include "logsurf/bodies.hpp"
#include "logsurf/functionals.hpp"

namespace logsurf {

/// A point y on the boundary of a convex body, described by |y| and the cosine
/// of the angle between y and the outward normal at y.
struct BoundaryPoint {
    double radius = 1.0;
    double alpha = 1.0;
};

/// Log drop of g_m at (1 + x) t0 below its peak. +inf past the support.
double profile_drop(const MeasureProfile& profile, double x);

/// Relative step s with phi((1 + s) t) = phi(t) + 1. Empty when phi never
/// gains 1 before the support cutoff.
std::optional<double> unit_potential_step(const MeasureProfile& profile, double t);

/// Measure swept by the ray through y past the boundary, per unit surface
/// density at y: alpha e^{phi(|y|)} |y|^{-m} J_m. The surface area of any body
/// is at most 1 / min over its boundary.
double radial_exhaustion(const MeasureProfile& profile, BoundaryPoint point);

/// t1 / e, where t1 is the distance along the outward normal at which phi
/// has grown by 1 (or the support boundary is reached).
double normal_exhaustion_lower(const MeasureProfile& profile, BoundaryPoint point);

struct Certificate {
    double value = 0.0;           ///< min(radial_bound, rough_bound)
    double radial_bound = 0.0;    ///< 1 / min of radial_exhaustion over the probed boundary
    double rough_bound = 0.0;     ///< m J_{m-1} / J_m
    std::string binding;          ///< "radial" or "rough"
    BoundaryPoint argmin;         ///< boundary point attaining the probed minimum
    int facet = -1;
};

/// Upper bound on the surface area of a polytope. On each facet the radial
/// exhaustion is minimized exactly along `grid_per_facet` fixed rays from the
/// foot of the facet normal, plus one ray towards each neighbouring facet.
/// Offsets must be nonnegative; a zero offset drives the radial bound to +inf.
Certificate certificate_upper_bound(const MeasureProfile& profile, const Polytope& body, int grid_per_facet = 64);

/// Bound on the surface area outside the annulus of relative width mu around
/// t0. Throws InputError when mu fails the width hypothesis.
double annulus_remainder_bound(const MeasureProfile& profile, double mu);

}  // namespace logsurf
