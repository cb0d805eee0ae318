#include "logsurf/construction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "logsurf/errors.hpp"
#include "logsurf/quadrature.hpp"
#include "logsurf/sampling.hpp"

namespace logsurf {

namespace {

constexpr std::int64_t kMaxFacets = 10'000'000;

}  // namespace

PolytopeSpec plan_polytope(const MeasureProfile& profile, double c_rho, std::uint64_t seed)
{
    if (!(c_rho > 0.0)) throw InputError("c_rho must be positive");
    const double m = static_cast<double>(profile.m);
    const double lambda = profile.lambda_sum;
    const double t0 = profile.t0;

    PolytopeSpec spec;
    spec.c_rho = c_rho;
    spec.seed = seed;
    spec.rho = c_rho * t0 / std::sqrt(lambda * m);
    spec.annulus_width = lambda * t0;
    if (spec.rho >= t0 - spec.annulus_width)
        throw InputError("construction degenerate: rho >= t0 - W; use a smaller c_rho");

    const double ratio = spec.rho / (t0 + spec.annulus_width);
    const double log_n = std::log(std::sqrt(m) * spec.rho / t0) - 0.5 * m * std::log1p(-ratio * ratio);
    if (log_n > std::log(static_cast<double>(kMaxFacets)))
        throw InputError("construction needs more than 1e7 facets; use a smaller c_rho");
    spec.facets_real = std::exp(log_n);
    spec.facets = std::max<std::int64_t>(1, std::llround(spec.facets_real));
    return spec;
}

double cap_probability(const MeasureProfile& profile, double r, double rho)
{
    if (!(r > 0.0) || !(rho >= 0.0)) throw InputError("cap probability requires r > 0 and rho >= 0");
    if (r <= rho) return 0.0;
    const double a = rho / r;
    const int m = profile.m;
    if (m == 1) return std::acos(a) / std::numbers::pi;
    // p = int_a^1 (1 - u^2)^k du / int_{-1}^1 (1 - u^2)^k du with k = (m - 2) / 2
    const double k = 0.5 * static_cast<double>(m - 2);
    const auto log_f = [k](double u) {
        if (k == 0.0) return 0.0;
        return k * std::log1p(-u * u);
    };
    const LogScalar part = quad::log_integral(log_f, a, 1.0, a);
    const double log_full = 0.5 * std::log(std::numbers::pi) + std::lgamma(k + 1.0) - std::lgamma(k + 1.5);
    return std::clamp(std::exp(part.log_value - log_full), 0.0, 1.0);
}

Polytope sample_polytope(const PolytopeSpec& spec, const MeasureProfile& profile, std::uint64_t trial)
{
    const int d = profile.d;
    const auto n = static_cast<Eigen::Index>(spec.facets);
    Polytope p{Eigen::MatrixXd(n, d), Eigen::VectorXd::Constant(n, spec.rho)};
    Rng rng = make_stream(spec.seed, 0x9017, trial);
    for (Eigen::Index i = 0; i < n; ++i) p.directions.row(i) = random_unit_vector(d, rng).transpose();
    return p;
}

double ConstructionEstimate::total_stderr() const
{
    return std::max(estimate.std_error, between_trial_stderr);
}

ConstructionEstimate expected_surface(const MeasureProfile& profile, double c_rho, int trials, int samples_per_facet,
                                      int facet_subsample, std::uint64_t seed)
{
    if (trials < 1) throw InputError("trials must be at least 1");
    if (samples_per_facet < 1) throw InputError("samples per facet must be positive");
    if (facet_subsample < 1) throw InputError("facet subsample must be positive");

    ConstructionEstimate out;
    out.spec = plan_polytope(profile, c_rho, seed);
    out.estimate.method = SurfaceMethod::facet_mc;
    const std::int64_t n = out.spec.facets;
    const int used = static_cast<int>(std::min<std::int64_t>(n, facet_subsample));
    const double scale = static_cast<double>(n) / static_cast<double>(used);

    double var = 0.0;
    for (int t = 0; t < trials; ++t) {
        const auto trial = static_cast<std::uint64_t>(t);
        const Polytope body = sample_polytope(out.spec, profile, trial);
        std::vector<int> facets(static_cast<std::size_t>(n));
        std::iota(facets.begin(), facets.end(), 0);
        if (used < n) {
            Rng rng = make_stream(seed, 0x5B5, trial);
            // partial Fisher-Yates: the first `used` entries are a uniform subset
            for (int i = 0; i < used; ++i) {
                std::uniform_int_distribution<std::int64_t> pick(i, n - 1);
                std::swap(facets[static_cast<std::size_t>(i)], facets[static_cast<std::size_t>(pick(rng))]);
            }
            facets.resize(static_cast<std::size_t>(used));
            std::sort(facets.begin(), facets.end());
        }
        const std::uint64_t trial_seed = make_stream(seed, 0x7121, trial)();
        const SurfaceEstimate e = facet_subset_mc(profile, body, facets, samples_per_facet, trial_seed);
        out.trial_values.push_back(scale * e.value);
        var += scale * scale * e.std_error * e.std_error;
        out.estimate.samples += e.samples;
        if (!e.note.empty()) out.estimate.note = e.note;
    }

    const double count = static_cast<double>(trials);
    double sum = 0.0;
    for (double v : out.trial_values) sum += v;
    const double mean = sum / count;
    out.estimate.value = mean;
    out.estimate.std_error = std::sqrt(var) / count;
    if (trials > 1) {
        double ss = 0.0;
        for (double v : out.trial_values) ss += (v - mean) * (v - mean);
        out.between_trial_stderr = std::sqrt(ss / (count - 1.0) / count);
    }
    return out;
}

}  // namespace logsurf
