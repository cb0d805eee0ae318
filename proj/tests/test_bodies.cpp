#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "logsurf/bodies.hpp"
#include "logsurf/errors.hpp"
#include "logsurf/sampling.hpp"
#include "support.hpp"

using namespace logsurf;
using logsurf::testing::rel_close;

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double normal_pdf(double x)
{
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

Polytope random_polytope(int d, int facets, std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> offset(lo, hi);
    Eigen::MatrixXd dirs(facets, d);
    Eigen::VectorXd offsets(facets);
    for (int i = 0; i < facets; ++i) {
        dirs.row(i) = random_unit_vector(d, rng).transpose();
        offsets[i] = offset(rng);
    }
    return make_polytope(dirs, offsets);
}

}  // namespace

TEST_CASE("sphere surfaces")
{
    const MeasureProfile g = make_profile(make_gaussian(), 3);
    CHECK(rel_close(sphere_surface(g, std::sqrt(2.0)).value, 0.58705065269495960, 1e-12));
    CHECK(rel_close(sphere_argmax(g), std::sqrt(2.0), 1e-8));

    for (int d = 3; d <= 128; ++d) {
        const MeasureProfile b = make_profile(make_ball(1.0), d);
        CHECK(rel_close(sphere_surface(b, 1.0).value, d, 1e-9));
    }
    const MeasureProfile b = make_profile(make_ball(1.0), 5);
    const SurfaceEstimate outside = sphere_surface(b, 1.5);
    CHECK(outside.value == 0.0);
    CHECK_FALSE(outside.note.empty());
    CHECK(rel_close(sphere_surface(b, 0.5).value, 5.0 * std::pow(0.5, 4), 1e-12));
}

TEST_CASE("half-space surfaces")
{
    for (int d : {2, 10, 100}) {
        const MeasureProfile g = make_profile(make_gaussian(), d);
        CHECK(std::abs(halfspace_surface(g, 0.0).value - kInvSqrt2Pi) <= 1e-8);
        CHECK(rel_close(halfspace_surface(g, 1.3).value, normal_pdf(1.3), 1e-9));
    }
    const MeasureProfile b3 = make_profile(make_ball(1.0), 3);
    CHECK(std::abs(halfspace_surface(b3, 0.0).value - 0.75) <= 1e-8);
    CHECK(halfspace_surface(b3, 1.0).value == 0.0);
    CHECK(rel_close(halfspace_surface(b3, 0.5).value, 0.75 * 0.75, 1e-10));

    const MeasureProfile b10 = make_profile(make_ball(1.0), 10);
    CHECK(rel_close(halfspace_surface(b10, 0.20558055846927993).value, 1.0650181082670227, 1e-10));

    const MeasureProfile g5 = make_profile(make_gaussian(), 5);
    CHECK(rel_close(slab_surface(g5, 0.5, 1.0).value, normal_pdf(0.5) + normal_pdf(1.0), 1e-9));
    CHECK_THROWS_AS(slab_surface(g5, -1.0, 0.5), InputError);
    CHECK_THROWS_AS(halfspace_surface(g5, -0.1), InputError);
}

TEST_CASE("exact dispatch")
{
    const MeasureProfile g = make_profile(make_gaussian(), 4);
    CHECK(exact_surface(g, HalfSpace{Eigen::VectorXd::Unit(4, 2), 0.7}).value ==
          doctest::Approx(normal_pdf(0.7)).epsilon(1e-9));
    CHECK(exact_surface(g, Ball{2.0}).value == doctest::Approx(sphere_surface(g, 2.0).value));
    CHECK_THROWS_AS(exact_surface(g, HyperRectangle{Eigen::VectorXd::Ones(4)}), InputError);
    CHECK_THROWS_AS(exact_surface(g, HalfSpace{Eigen::VectorXd::Ones(4), 0.7}), InputError);
    CHECK_THROWS_AS(exact_surface(g, HalfSpace{Eigen::VectorXd::Unit(3, 0), 0.7}), InputError);
}

TEST_CASE("polytope validation")
{
    Eigen::MatrixXd dirs = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(make_polytope(dirs, Eigen::Vector2d(1.0, 0.0)), InputError);
    CHECK_THROWS_AS(make_polytope(2.0 * dirs, Eigen::Vector2d(1.0, 1.0)), InputError);
    CHECK_THROWS_AS(make_polytope(dirs, Eigen::Vector3d(1.0, 1.0, 1.0)), InputError);
    CHECK_NOTHROW(make_polytope(dirs, Eigen::Vector2d(1.0, 2.0)));
}

TEST_CASE("facet Monte Carlo on a gaussian cube matches the product formula")
{
    const int d = 6;
    const double a = 0.8;
    const MeasureProfile g = make_profile(make_gaussian(), d);
    const Polytope cube = to_polytope(HyperRectangle{Eigen::VectorXd::Constant(d, a)});
    const double exact = 2.0 * d * normal_pdf(a) * std::pow(std::erf(a / std::sqrt(2.0)), d - 1);
    const SurfaceEstimate mc = polytope_surface_mc(g, cube, 20000, 3);
    CHECK(mc.method == SurfaceMethod::facet_mc);
    CHECK(std::abs(mc.value - exact) <= 4.0 * mc.std_error);
    CHECK(mc.value - 3.0 * mc.std_error <= rough_surface_bound(g));
}

TEST_CASE("single facet is the half-space")
{
    const MeasureProfile g = make_profile(make_gaussian(), 7);
    const Polytope one = make_polytope(Eigen::RowVectorXd::Unit(7, 3), Eigen::VectorXd::Constant(1, 0.4));
    const FacetEstimate f = facet_surface_mc(g, one, 0, 1000, 1);
    CHECK(f.acceptance == 1.0);
    CHECK(f.value == halfspace_surface(g, 0.4).value);
    CHECK(polytope_surface_mc(g, one, 1000, 1).std_error == 0.0);
}

TEST_CASE("Minkowski quotient agrees with exact surfaces")
{
    const MeasureProfile g = make_profile(make_gaussian(), 3);
    const SurfaceEstimate fd = minkowski_fd_surface(g, Ball{1.0}, 1e-2, 400000, 5);
    const double exact = sphere_surface(g, 1.0).value;
    CHECK(fd.method == SurfaceMethod::minkowski_fd);
    CHECK(std::abs(fd.value - exact) <= 4.0 * fd.std_error + 0.03 * exact);

    const SurfaceEstimate slab = minkowski_fd_surface(g, Slab{Eigen::VectorXd::Unit(3, 1), 0.5, 1.0}, 1e-2, 400000, 6);
    const double slab_exact = slab_surface(g, 0.5, 1.0).value;
    CHECK(std::abs(slab.value - slab_exact) <= 4.0 * slab.std_error + 0.03 * slab_exact);
}

TEST_CASE("facet Monte Carlo agrees with the Minkowski quotient on random polytopes")
{
    std::mt19937_64 rng(99);
    const MeasureProfile g = make_profile(make_gaussian(), 3);
    for (int trial = 0; trial < 4; ++trial) {
        const Polytope body = random_polytope(3, 6 + trial, rng, 0.5, 1.5);
        const SurfaceEstimate mc = polytope_surface_mc(g, body, 20000, 11 + trial);
        const SurfaceEstimate fd = minkowski_fd_surface(g, body, 2e-3, 1000000, 21 + trial);
        const double sigma = std::hypot(mc.std_error, fd.std_error);
        CHECK(std::abs(mc.value - fd.value) <= 3.0 * sigma + 0.02 * mc.value);
    }
}

TEST_CASE("homothety stability of spheres")
{
    for (const auto& [name, phi] : logsurf::testing::zoo()) {
        CAPTURE(name);
        for (int d : {4, 32}) {
            const MeasureProfile p = make_profile(phi, d);
            const double m = p.m;
            for (double scale : {0.5, 1.0}) {
                const double r = scale * p.t0;
                const double shrink = std::pow(1.0 + 1.0 / m, -m);
                const double inner = sphere_surface(p, r / (1.0 + 1.0 / m)).value;
                CHECK(inner >= shrink * sphere_surface(p, r).value * (1.0 - 1e-9));
                CHECK(shrink >= std::exp(-1.0));
            }
        }
    }
}

TEST_CASE("radial sampler matches the quadrature cdf")
{
    for (const auto& [name, phi] : logsurf::testing::zoo()) {
        CAPTURE(name);
        const MeasureProfile p = make_profile(phi, 12);
        const RadialSampler sampler(p);
        Rng rng = make_stream(17, 0);
        constexpr int n = 4000;
        std::vector<double> r(n);
        for (double& x : r) x = sampler.sample_radius(rng);
        std::sort(r.begin(), r.end());
        double ks = 0.0;
        for (int i = 0; i < n; ++i) {
            const double f = radial_cdf(p, r[static_cast<std::size_t>(i)]);
            ks = std::max({ks, std::abs(f - double(i) / n), std::abs(f - double(i + 1) / n)});
        }
        CHECK(ks < 4.0 / std::sqrt(n));
        CHECK(r.back() < phi.support_radius());
    }
}

TEST_CASE("cube check against the mpmath oracle")
{
    const double expect[] = {1.1472635804888374, 2.3057661383501623, 4.6169946518008990, 9.2367017879076124};
    const double var[] = {0.017119610217266254, 0.016775848571113511, 0.016693718575228816};
    const int dims[] = {16, 64, 256, 1024};
    for (int i = 0; i < 4; ++i) {
        const CubeCheck c = cube_lebesgue_check(dims[i]);
        CHECK(c.surface == 2.0 * dims[i]);
        CHECK(rel_close(c.expectation, expect[i], 1e-12));
        if (i < 3) CHECK(std::abs(c.variance - var[i]) <= 1e-11);
    }
}

TEST_CASE("Monte Carlo is reproducible and independent of the worker count")
{
    const MeasureProfile g = make_profile(make_gaussian(), 5);
    const Polytope cube = to_polytope(HyperRectangle{Eigen::VectorXd::Constant(5, 1.0)});
    setenv("LOGSURF_WORKERS", "1", 1);
    const SurfaceEstimate a = polytope_surface_mc(g, cube, 5000, 42);
    const SurfaceEstimate fa = minkowski_fd_surface(g, cube, 1e-2, 200000, 42);
    setenv("LOGSURF_WORKERS", "4", 1);
    const SurfaceEstimate b = polytope_surface_mc(g, cube, 5000, 42);
    const SurfaceEstimate fb = minkowski_fd_surface(g, cube, 1e-2, 200000, 42);
    unsetenv("LOGSURF_WORKERS");
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    CHECK(fa.value == fb.value);
    CHECK(polytope_surface_mc(g, cube, 5000, 43).value != a.value);
}
