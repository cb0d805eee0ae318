#include "logsurf/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "logsurf/errors.hpp"
#include "logsurf/quadrature.hpp"
#include "logsurf/sampling.hpp"

namespace logsurf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest t >= 0 where reached(t) holds, bracketing geometrically from `start`.
double grow_and_bisect(const std::function<bool(double)>& reached, double start, const char* what)
{
    double lo = 0.0;
    double hi = start;
    int it = 0;
    while (!reached(hi)) {
        lo = hi;
        hi *= 2.0;
        if (++it > 1100 || !std::isfinite(hi)) throw NumericalError(what);
    }
    return quad::bisect_boundary(reached, lo, hi);
}

}  // namespace

double profile_drop(const MeasureProfile& profile, double x)
{
    if (!(x > -1.0)) return kInf;
    return log_profile_drop(profile.potential, profile.m, profile.t0, x);
}

std::optional<double> unit_potential_step(const MeasureProfile& profile, double t)
{
    const RadialPotential& phi = profile.potential;
    const double radius = phi.support_radius();
    if (!(t > 0.0) || t >= radius) return std::nullopt;
    const double base = phi.value(t);
    const auto grown = [&](double s) { return phi.left_value((1.0 + s) * t) - base >= 1.0; };
    if (std::isfinite(radius)) {
        const double edge = radius / t - 1.0;
        if (!grown(edge)) return std::nullopt;
        return quad::bisect_boundary(grown, 0.0, edge);
    }
    return grow_and_bisect(grown, 1.0, "potential does not grow");
}

double radial_exhaustion(const MeasureProfile& profile, BoundaryPoint point)
{
    if (!(point.radius > 0.0)) throw InputError("boundary point radius must be positive");
    if (!(point.alpha >= 0.0 && point.alpha <= 1.0)) throw InputError("boundary point alpha must lie in [0, 1]");
    if (point.alpha == 0.0) return 0.0;
    const double v = profile.potential.left_value(point.radius);
    if (!std::isfinite(v)) return kInf;
    const double m = static_cast<double>(profile.m);
    return point.alpha * std::exp(v - m * std::log(point.radius) + profile.J(profile.m).log_value);
}

double normal_exhaustion_lower(const MeasureProfile& profile, BoundaryPoint point)
{
    if (!(point.radius > 0.0)) throw InputError("boundary point radius must be positive");
    if (!(point.alpha >= 0.0 && point.alpha <= 1.0)) throw InputError("boundary point alpha must lie in [0, 1]");
    const RadialPotential& phi = profile.potential;
    const double r = point.radius;
    const double a = point.alpha;
    const double radius = phi.support_radius();
    if (r >= radius) return 0.0;
    const double base = phi.value(r);
    const auto dist = [&](double t) { return std::sqrt(std::max(0.0, r * r + t * t + 2.0 * t * r * a)); };

    double t1;
    if (std::isfinite(radius)) {
        const double edge = -r * a + std::sqrt(r * r * a * a + radius * radius - r * r);
        t1 = quad::bisect_boundary(
            [&](double t) { return t >= edge || phi.left_value(dist(t)) - base >= 1.0; }, 0.0, edge);
    } else {
        t1 = grow_and_bisect([&](double t) { return phi.left_value(dist(t)) - base >= 1.0; }, std::max(1.0, r),
                             "potential does not grow along the normal");
    }
    return t1 / std::exp(1.0);
}

Certificate certificate_upper_bound(const MeasureProfile& profile, const Polytope& body, int grid_per_facet)
{
    const int d = profile.d;
    const int facets = body.facets();
    if (facets < 1 || body.dim() != d || body.offsets.size() != facets)
        throw InputError("polytope has inconsistent dimensions");
    if (grid_per_facet < 0) throw InputError("grid size must be nonnegative");
    for (int i = 0; i < facets; ++i) {
        if (!(std::abs(body.directions.row(i).norm() - 1.0) <= 1e-9))
            throw InputError("polytope normals must be unit vectors");
        if (!(body.offsets[i] >= 0.0)) throw InputError("polytope offsets must be nonnegative");
    }

    Certificate out;
    out.rough_bound = rough_surface_bound(profile);

    // Along a ray from the foot point, |y| grows monotonically and
    // phi(r) - (m+1) log r is convex in r, so the ray minimum sits at the
    // clamp of its unconstrained minimizer.
    const RadialPotential& phi = profile.potential;
    const double best_radius = peak_radius(phi, profile.m + 1);
    const double log_jm = profile.J(profile.m).log_value;
    const double m1 = static_cast<double>(profile.m + 1);
    const auto log_xi = [&](double rho, double r) {
        const double v = phi.left_value(r);
        if (!std::isfinite(v)) return kInf;
        return std::log(rho) + log_jm + v - m1 * std::log(r);
    };

    std::vector<double> facet_min(static_cast<std::size_t>(facets), kInf);
    std::vector<BoundaryPoint> facet_arg(static_cast<std::size_t>(facets));
    parallel_for(static_cast<std::size_t>(facets), [&](std::size_t fi) {
        const int i = static_cast<int>(fi);
        const double rho = body.offsets[i];
        if (rho == 0.0) {
            facet_min[fi] = -kInf;
            facet_arg[fi] = {best_radius, 0.0};
            return;
        }
        const Eigen::VectorXd normal = body.directions.row(i).transpose();
        const Eigen::VectorXd cosines = body.directions * normal;

        Eigen::MatrixXd rays(d, facets - 1 + grid_per_facet);
        int count = 0;
        const auto add_ray = [&](Eigen::VectorXd w) {
            w -= w.dot(normal) * normal;
            const double n = w.norm();
            if (n > 1e-12) rays.col(count++) = w / n;
        };
        for (int j = 0; j < facets; ++j)
            if (j != i) add_ray(body.directions.row(j).transpose());
        Rng rng = make_stream(0x6E7, static_cast<std::uint64_t>(i));
        for (int g = 0; g < grid_per_facet; ++g) add_ray(random_unit_vector(d, rng));
        for (int axis = 0; count == 0 && axis < d; ++axis) add_ray(Eigen::VectorXd::Unit(d, axis));

        const Eigen::MatrixXd slopes = body.directions * rays.leftCols(count);
        double best = kInf;
        BoundaryPoint arg;
        for (int k = 0; k < count; ++k) {
            double lo = 0.0;
            double hi = kInf;
            bool feasible = true;
            for (int j = 0; j < facets && feasible; ++j) {
                if (j == i) continue;
                const double slack = body.offsets[j] - rho * cosines[j];
                const double a = slopes(j, k);
                if (a > 0.0)
                    hi = std::min(hi, slack / a);
                else if (a < 0.0)
                    lo = std::max(lo, slack / a);
                else if (slack < 0.0)
                    feasible = false;
            }
            if (!feasible || lo > hi) continue;
            const double r_lo = std::hypot(rho, lo);
            const double r_hi = std::isfinite(hi) ? std::hypot(rho, hi) : kInf;
            const double r = std::clamp(best_radius, r_lo, r_hi);
            const double v = log_xi(rho, r);
            if (v < best) {
                best = v;
                arg = {r, rho / r};
            }
        }
        facet_min[fi] = best;
        facet_arg[fi] = arg;
    });

    double best = kInf;
    for (int i = 0; i < facets; ++i) {
        if (facet_min[static_cast<std::size_t>(i)] < best) {
            best = facet_min[static_cast<std::size_t>(i)];
            out.argmin = facet_arg[static_cast<std::size_t>(i)];
            out.facet = i;
        }
    }
    // no probed ray met a facet: the radial bound carries no information
    out.radial_bound = best == kInf ? kInf : std::exp(-best);
    if (out.radial_bound <= out.rough_bound) {
        out.value = out.radial_bound;
        out.binding = "radial";
    } else {
        out.value = out.rough_bound;
        out.binding = "rough";
    }
    return out;
}

double annulus_remainder_bound(const MeasureProfile& profile, double mu)
{
    const AnnulusWidth width = check_annulus_width(profile, mu);
    if (!width.hypothesis_holds) throw InputError("mu does not satisfy the annulus width hypothesis");
    const double m = static_cast<double>(profile.m);
    const double scale = 1.0 / (profile.lambda_sum * profile.t0);
    const double drop = width.threshold;
    const double inner = scale * std::exp(profile.potential.left_value(profile.t0) - m);
    const double outer = scale * (1.0 + mu * m / drop) * std::exp(-drop);
    return inner + outer;
}

}  // namespace logsurf
