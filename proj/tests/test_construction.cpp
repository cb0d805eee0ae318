#include <doctest.h>

#include <cmath>
#include <numbers>

#include "logsurf/construction.hpp"
#include "logsurf/errors.hpp"
#include "support.hpp"

using namespace logsurf;
using logsurf::testing::rel_close;

TEST_CASE("plan for the uniform ball in d=10")
{
    const MeasureProfile b = make_profile(make_ball(1.0), 10);
    const PolytopeSpec s = plan_polytope(b, 0.2);
    CHECK(rel_close(s.annulus_width, 0.10516068318563023, 1e-12));
    CHECK(rel_close(s.rho, 0.20558055846927993, 1e-12));
    CHECK(rel_close(s.facets_real, 0.72264742574188366, 1e-10));
    CHECK(s.facets == 1);
    CHECK_THROWS_WITH_AS(plan_polytope(b, 1.0), doctest::Contains("smaller c_rho"), InputError);
    CHECK_THROWS_AS(plan_polytope(b, 0.0), InputError);
}

TEST_CASE("gaussian facet counts grow with dimension")
{
    double prev = 0.0;
    for (int d : {16, 64, 256}) {
        const PolytopeSpec s = plan_polytope(make_profile(make_gaussian(), d), 1.0);
        CHECK(s.facets_real > prev);
        CHECK(s.rho < make_profile(make_gaussian(), d).t0);
        prev = s.facets_real;
    }
}

TEST_CASE("cap probability closed forms")
{
    const MeasureProfile m2 = make_profile(make_gaussian(), 3);
    CHECK(cap_probability(m2, 1.0, 1.0) == 0.0);
    CHECK(cap_probability(m2, 1.0, 2.0) == 0.0);
    CHECK(rel_close(cap_probability(m2, 2.0, 0.5), 0.375, 1e-12));
    for (double rho : {0.1, 0.9, 1.7})
        CHECK(rel_close(cap_probability(m2, 2.0, rho), (2.0 - rho) / 4.0, 1e-12));

    const MeasureProfile m1 = make_profile(make_gaussian(), 2);
    CHECK(rel_close(cap_probability(m1, 2.0, 1.0), std::acos(0.5) / std::numbers::pi, 1e-14));

    const MeasureProfile m9 = make_profile(make_gaussian(), 10);
    CHECK(rel_close(cap_probability(m9, 1.0, 0.3), 0.18504156114103394, 1e-10));

    for (int d : {2, 3, 4, 17, 300})
        CHECK(cap_probability(make_profile(make_gaussian(), d), 1.3, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("cap probability is monotone")
{
    for (int d : {4, 20, 200}) {
        const MeasureProfile p = make_profile(make_gaussian(), d);
        for (int i = 0; i <= 10; ++i) {
            const double rho = 0.2 * i;
            double prev = 0.0;
            for (int k = 1; k <= 30; ++k) {
                const double v = cap_probability(p, 0.1 * k, rho);
                CHECK(v >= prev - 1e-14);
                prev = v;
            }
        }
        for (int k = 1; k <= 10; ++k) {
            double prev = 1.0;
            for (int i = 0; i <= 30; ++i) {
                const double v = cap_probability(p, 0.3 * k, 0.1 * i);
                CHECK(v <= prev + 1e-14);
                prev = v;
            }
        }
    }
}

TEST_CASE("cap probability against the separation reference on the annulus")
{
    constexpr double kSlack = 3.0;
    for (int d : {16, 64, 256}) {
        const MeasureProfile p = make_profile(make_gaussian(), d);
        const PolytopeSpec s = plan_polytope(p, 1.0);
        const double m = p.m;
        for (int k = 0; k <= 20; ++k) {
            const double r = p.t0 - s.annulus_width + 2.0 * s.annulus_width * k / 20.0;
            const double q = s.rho / r;
            const double ref = r / (std::sqrt(m) * s.rho) * std::exp(0.5 * m * std::log1p(-q * q));
            CHECK(cap_probability(p, r, s.rho) <= kSlack * ref);
        }
    }
}

TEST_CASE("sampled polytopes")
{
    const MeasureProfile p = make_profile(make_gaussian(), 33);
    PolytopeSpec s = plan_polytope(p, 1.0, 77);
    s.facets = 400;
    const Polytope a = sample_polytope(s, p);
    const Polytope b = sample_polytope(s, p);
    CHECK(a.directions == b.directions);
    CHECK(sample_polytope(s, p, 1).directions != a.directions);
    CHECK((a.offsets.array() == s.rho).all());
    for (int i = 0; i < a.facets(); ++i) CHECK(a.directions.row(i).norm() == doctest::Approx(1.0));

    const Eigen::MatrixXd gram = a.directions * a.directions.transpose();
    const double n = a.facets();
    const double mean = (gram.sum() - gram.trace()) / (n * (n - 1.0));
    CHECK(std::abs(mean) <= 4.0 / std::sqrt(n * 33.0));
}

TEST_CASE("single-facet construction is the half-space")
{
    const MeasureProfile b = make_profile(make_ball(1.0), 10);
    const ConstructionEstimate e = expected_surface(b, 0.2, 3, 1000, 64, 1);
    CHECK(e.spec.facets == 1);
    CHECK(e.estimate.value == halfspace_surface(b, e.spec.rho).value);
    CHECK(e.estimate.value > 0.0);
    CHECK(e.estimate.value < 10.0);
    CHECK(e.between_trial_stderr == 0.0);
}

TEST_CASE("Monte Carlo error scales with samples per facet")
{
    const MeasureProfile g = make_profile(make_gaussian(), 32);
    const ConstructionEstimate a = expected_surface(g, 1.0, 4, 4000, 64, 9);
    const ConstructionEstimate b = expected_surface(g, 1.0, 4, 8000, 64, 9);
    REQUIRE(a.spec.facets > 1);
    const double ratio = b.estimate.std_error / a.estimate.std_error;
    CHECK(ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.2));
}

TEST_CASE("construction reaches a fixed fraction of the theorem bound at d=65")
{
    const MeasureProfile g = make_profile(make_gaussian(), 65);
    const ConstructionEstimate e = expected_surface(g, 1.0, 8, 2000, 64, 3);
    CHECK(e.estimate.value - 3.0 * e.total_stderr() >= 0.05 * max_surface_scale(g));
}

TEST_CASE("facet subsampling is unbiased")
{
    const MeasureProfile g = make_profile(make_gaussian(), 128);
    const ConstructionEstimate full = expected_surface(g, 1.0, 8, 2000, 1000, 12);
    const ConstructionEstimate sub = expected_surface(g, 1.0, 8, 2000, 4, 12);
    REQUIRE(full.spec.facets > 4);
    const double sigma = std::hypot(full.total_stderr(), sub.total_stderr());
    CHECK(std::abs(full.estimate.value - sub.estimate.value) <= 4.0 * sigma);
}

TEST_CASE("construction is reproducible")
{
    const MeasureProfile g = make_profile(make_gaussian(), 40);
    const ConstructionEstimate a = expected_surface(g, 1.0, 3, 1500, 8, 21);
    const ConstructionEstimate b = expected_surface(g, 1.0, 3, 1500, 8, 21);
    CHECK(a.trial_values == b.trial_values);
    CHECK(a.estimate.std_error == b.estimate.std_error);
    CHECK_THROWS_AS(expected_surface(g, 1.0, 0, 100, 8, 1), InputError);
}
