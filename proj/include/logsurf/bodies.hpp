#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "logsurf/functionals.hpp"

namespace logsurf {

/// The sphere R S^{d-1} viewed as a surface.
struct SphereShell {
    double radius = 1.0;
};

struct Ball {
    double radius = 1.0;
};

/// {x : <x, direction> <= offset}
struct HalfSpace {
    Eigen::VectorXd direction;
    double offset = 0.0;
};

/// {x : -lower <= <x, direction> <= upper}
struct Slab {
    Eigen::VectorXd direction;
    double lower = 0.0;
    double upper = 0.0;
};

/// {x : <x, directions.row(i)> <= offsets[i] for all i}. Rows are unit
/// normals and offsets are strictly positive, so the origin is interior.
struct Polytope {
    Eigen::MatrixXd directions;
    Eigen::VectorXd offsets;

    int dim() const { return static_cast<int>(directions.cols()); }
    int facets() const { return static_cast<int>(directions.rows()); }
};

/// Axis-aligned box with the given half-widths, centred at the origin.
struct HyperRectangle {
    Eigen::VectorXd half_widths;
};

using ConvexBody = std::variant<SphereShell, Ball, HalfSpace, Slab, Polytope, HyperRectangle>;

/// Throws InputError unless the body is well formed in dimension d.
void validate_body(const ConvexBody& body, int d);

Polytope make_polytope(Eigen::MatrixXd directions, Eigen::VectorXd offsets);
Polytope to_polytope(const HyperRectangle& box);

enum class SurfaceMethod { exact, facet_mc, minkowski_fd };

std::string to_string(SurfaceMethod method);

struct SurfaceEstimate {
    double value = 0.0;
    double std_error = 0.0;
    SurfaceMethod method = SurfaceMethod::exact;
    std::int64_t samples = 0;
    std::string note;  ///< warnings such as "surface outside support"
};

/// Surface area of R S^{d-1}: R^m e^{-phi(R-)} / J_m.
SurfaceEstimate sphere_surface(const MeasureProfile& profile, double radius);

/// Radius of the sphere with the largest surface area, by golden-section search.
double sphere_argmax(const MeasureProfile& profile);

/// Surface area of a hyperplane at distance rho from the origin.
SurfaceEstimate halfspace_surface(const MeasureProfile& profile, double rho);

/// Sum of the two parallel facets of a slab.
SurfaceEstimate slab_surface(const MeasureProfile& profile, double lower, double upper);

/// Exact surface for sphere, ball, half-space and slab bodies.
SurfaceEstimate exact_surface(const MeasureProfile& profile, const ConvexBody& body);

struct FacetEstimate {
    double hyperplane_surface = 0.0;  ///< surface of the facet's full hyperplane
    double acceptance = 0.0;          ///< fraction of hyperplane mass inside the polytope
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
};

/// Monte Carlo estimate of one facet's contribution. Points are drawn on the
/// facet hyperplane from the restricted density and tested against the other
/// constraints. `stream` separates independent calls sharing a seed.
FacetEstimate facet_surface_mc(const MeasureProfile& profile, const Polytope& body, int facet, int samples,
                               std::uint64_t seed, std::uint64_t stream = 0);

/// Facet-wise Monte Carlo surface area of a polytope.
SurfaceEstimate polytope_surface_mc(const MeasureProfile& profile, const Polytope& body, int samples_per_facet,
                                    std::uint64_t seed);

/// Sum of the listed facets' contributions, each from `samples_per_facet`
/// points. Facets sharing an offset share one sampling table.
SurfaceEstimate facet_subset_mc(const MeasureProfile& profile, const Polytope& body, std::span<const int> facets,
                                int samples_per_facet, std::uint64_t seed);

/// [gamma(body + eps B) - gamma(body)] / eps by sampling the measure. Polytopes
/// are inflated by shifting every offset by eps, which over-counts near edges
/// by O(eps^2).
SurfaceEstimate minkowski_fd_surface(const MeasureProfile& profile, const ConvexBody& body, double eps,
                                     std::int64_t samples, std::uint64_t seed);

/// Uniform measure on the unit cube [-1/2, 1/2]^d: its maximal-surface body is
/// the cube itself with surface 2d. Moments of |X| come from one-dimensional
/// quadrature over the independent coordinates.
struct CubeCheck {
    double surface = 0.0;
    double expectation = 0.0;
    double variance = 0.0;
};

CubeCheck cube_lebesgue_check(int d);

}  // namespace logsurf
