#include "logsurf/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <vector>

#include "logsurf/errors.hpp"
#include "logsurf/quadrature.hpp"
#include "logsurf/sampling.hpp"

namespace logsurf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kChunk = 1024;
constexpr int kBatch = 256;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_unit(const Eigen::VectorXd& v, int d, const char* what)
{
    if (v.size() != d) throw InputError(std::string(what) + " has the wrong dimension");
    if (!(std::abs(v.norm() - 1.0) <= 1e-9)) throw InputError(std::string(what) + " must be a unit vector");
}

// Radial density along a hyperplane at distance rho, in polar coordinates of
// the hyperplane: s^{m-1} e^{-phi(sqrt(rho^2 + s^2))}.
struct FacetDensity {
    const RadialPotential* phi;
    int m;
    double rho;
    double lo;
    double hi;

    double operator()(double s) const
    {
        if (s < 0.0) return -kInf;
        const double v = phi->left_value(std::hypot(rho, s));
        if (!std::isfinite(v)) return -kInf;
        if (m == 1) return -v;
        return static_cast<double>(m - 1) * std::log(s) - v;
    }
};

FacetDensity facet_density(const MeasureProfile& profile, double rho)
{
    const RadialPotential& phi = profile.potential;
    const double lower = phi.support_lower();
    const double radius = phi.support_radius();
    FacetDensity f{&phi, profile.m, rho, 0.0, kInf};
    if (lower > rho) f.lo = std::sqrt(lower * lower - rho * rho);
    if (std::isfinite(radius)) f.hi = std::sqrt(std::max(0.0, radius * radius - rho * rho));
    return f;
}

double facet_peak(const FacetDensity& f, double scale)
{
    return quad::locate_peak(f, f.lo, f.hi, scale);
}

FacetEstimate facet_mc_impl(const Polytope& body, int facet, int samples, std::uint64_t seed, std::uint64_t stream,
                            const quad::InverseCdfTable* table, double hyperplane)
{
    FacetEstimate out;
    out.hyperplane_surface = hyperplane;
    out.samples = samples;
    if (hyperplane <= 0.0 || samples <= 0) return out;
    if (body.facets() == 1) {
        out.acceptance = 1.0;
        out.value = hyperplane;
        return out;
    }

    const int d = body.dim();
    const Eigen::VectorXd normal = body.directions.row(facet).transpose();
    const double rho = body.offsets[facet];
    const Eigen::VectorXd foot_proj = rho * (body.directions * normal);

    const std::int64_t chunks = (samples + kChunk - 1) / kChunk;
    std::vector<std::int64_t> accepted(static_cast<std::size_t>(chunks), 0);
    parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
        Rng rng = make_stream(seed, stream, static_cast<std::uint64_t>(facet), c);
        std::normal_distribution<double> normal_dist;
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
        const std::int64_t n = std::min<std::int64_t>(kChunk, samples - begin);
        std::int64_t count = 0;
        Eigen::MatrixXd w(d, kBatch);
        Eigen::VectorXd s(kBatch);
        for (std::int64_t done = 0; done < n; done += kBatch) {
            const int b = static_cast<int>(std::min<std::int64_t>(kBatch, n - done));
            for (int k = 0; k < b; ++k) {
                Eigen::VectorXd g(d);
                double norm2 = 0.0;
                do {
                    for (int i = 0; i < d; ++i) g[i] = normal_dist(rng);
                    g -= g.dot(normal) * normal;
                    norm2 = g.squaredNorm();
                } while (norm2 == 0.0);
                w.col(k) = g / std::sqrt(norm2);
                s[k] = table->quantile(uniform(rng));
            }
            const Eigen::MatrixXd proj = body.directions * w.leftCols(b);
            for (int k = 0; k < b; ++k) {
                bool inside = true;
                for (int j = 0; j < body.facets() && inside; ++j) {
                    if (j == facet) continue;
                    inside = foot_proj[j] + s[k] * proj(j, k) <= body.offsets[j];
                }
                if (inside) ++count;
            }
        }
        accepted[c] = count;
    });

    std::int64_t total = 0;
    for (auto a : accepted) total += a;
    const double n = static_cast<double>(samples);
    out.acceptance = static_cast<double>(total) / n;
    out.value = hyperplane * out.acceptance;
    out.std_error = hyperplane * std::sqrt(out.acceptance * (1.0 - out.acceptance) / n);
    return out;
}

bool inflated_member(const ConvexBody& body, const Eigen::VectorXd& x, double eps)
{
    return std::visit(
        Overloaded{
            [&](const SphereShell& b) {
                const double r = x.norm();
                return r > b.radius && r <= b.radius + eps;
            },
            [&](const Ball& b) {
                const double r = x.norm();
                return r > b.radius && r <= b.radius + eps;
            },
            [&](const HalfSpace& b) {
                const double p = x.dot(b.direction);
                return p > b.offset && p <= b.offset + eps;
            },
            [&](const Slab& b) {
                const double p = x.dot(b.direction);
                return (p > b.upper && p <= b.upper + eps) || (p < -b.lower && p >= -b.lower - eps);
            },
            [&](const Polytope& b) {
                const double excess = ((b.directions * x) - b.offsets).maxCoeff();
                return excess > 0.0 && excess <= eps;
            },
            [&](const HyperRectangle& b) {
                const double dist = (x.cwiseAbs() - b.half_widths).cwiseMax(0.0).norm();
                return dist > 0.0 && dist <= eps;
            },
        },
        body);
}

}  // namespace

std::string to_string(SurfaceMethod method)
{
    switch (method) {
    case SurfaceMethod::exact: return "exact";
    case SurfaceMethod::facet_mc: return "facet-mc";
    case SurfaceMethod::minkowski_fd: return "minkowski-fd";
    }
    return "unknown";
}

void validate_body(const ConvexBody& body, int d)
{
    std::visit(Overloaded{
                   [](const SphereShell& b) {
                       if (!(b.radius > 0.0)) throw InputError("sphere radius must be positive");
                   },
                   [](const Ball& b) {
                       if (!(b.radius > 0.0)) throw InputError("ball radius must be positive");
                   },
                   [d](const HalfSpace& b) {
                       require_unit(b.direction, d, "half-space direction");
                       if (!(b.offset >= 0.0)) throw InputError("half-space offset must be nonnegative");
                   },
                   [d](const Slab& b) {
                       require_unit(b.direction, d, "slab direction");
                       if (!(-b.lower < b.upper)) throw InputError("slab must satisfy -rho1 < rho2");
                   },
                   [d](const Polytope& b) {
                       if (b.facets() < 1 || b.dim() != d || b.offsets.size() != b.facets())
                           throw InputError("polytope has inconsistent dimensions");
                       for (int i = 0; i < b.facets(); ++i) {
                           require_unit(b.directions.row(i).transpose(), d, "polytope normal");
                           if (!(b.offsets[i] > 0.0))
                               throw InputError("polytope offsets must be positive (origin interior)");
                       }
                   },
                   [d](const HyperRectangle& b) {
                       if (b.half_widths.size() != d) throw InputError("box has the wrong dimension");
                       if (!(b.half_widths.minCoeff() > 0.0)) throw InputError("box half-widths must be positive");
                   },
               },
               body);
}

Polytope make_polytope(Eigen::MatrixXd directions, Eigen::VectorXd offsets)
{
    Polytope p{std::move(directions), std::move(offsets)};
    validate_body(p, p.dim());
    return p;
}

Polytope to_polytope(const HyperRectangle& box)
{
    const auto d = box.half_widths.size();
    Eigen::MatrixXd dirs = Eigen::MatrixXd::Zero(2 * d, d);
    Eigen::VectorXd offsets(2 * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        dirs(2 * i, i) = 1.0;
        dirs(2 * i + 1, i) = -1.0;
        offsets[2 * i] = box.half_widths[i];
        offsets[2 * i + 1] = box.half_widths[i];
    }
    return {dirs, offsets};
}

SurfaceEstimate sphere_surface(const MeasureProfile& profile, double radius)
{
    SurfaceEstimate out;
    if (!(radius > 0.0)) return out;
    if (radius > profile.potential.support_radius()) {
        out.note = "sphere lies outside the support of the measure";
        return out;
    }
    const double log_s = log_radial_density(profile.potential, profile.m, radius) - profile.J(profile.m).log_value;
    out.value = std::exp(log_s);
    return out;
}

double sphere_argmax(const MeasureProfile& profile)
{
    const RadialPotential& phi = profile.potential;
    const int m = profile.m;
    return quad::locate_peak([&phi, m](double r) { return log_radial_density(phi, m, r); }, phi.support_lower(),
                             phi.support_radius());
}

SurfaceEstimate halfspace_surface(const MeasureProfile& profile, double rho)
{
    if (!(rho >= 0.0)) throw InputError("half-space offset must be nonnegative");
    SurfaceEstimate out;
    if (rho >= profile.potential.support_radius()) {
        out.note = "hyperplane lies outside the support of the measure";
        return out;
    }
    const FacetDensity f = facet_density(profile, rho);
    if (!(f.hi > f.lo)) return out;
    const double peak = facet_peak(f, profile.t0);
    const LogScalar integral = quad::log_integral(f, f.lo, f.hi, peak);
    if (integral.is_zero()) return out;
    const double m = static_cast<double>(profile.m);
    const double log_value =
        profile.log_normalizer.log_value + std::log(m) + log_unit_ball_volume(profile.m) + integral.log_value;
    out.value = std::exp(log_value);
    return out;
}

SurfaceEstimate slab_surface(const MeasureProfile& profile, double lower, double upper)
{
    if (!(-lower < upper)) throw InputError("slab must satisfy -rho1 < rho2");
    const SurfaceEstimate a = halfspace_surface(profile, std::abs(lower));
    const SurfaceEstimate b = halfspace_surface(profile, std::abs(upper));
    SurfaceEstimate out;
    out.value = a.value + b.value;
    return out;
}

SurfaceEstimate exact_surface(const MeasureProfile& profile, const ConvexBody& body)
{
    validate_body(body, profile.d);
    return std::visit(Overloaded{
                          [&](const SphereShell& b) { return sphere_surface(profile, b.radius); },
                          [&](const Ball& b) { return sphere_surface(profile, b.radius); },
                          [&](const HalfSpace& b) { return halfspace_surface(profile, b.offset); },
                          [&](const Slab& b) { return slab_surface(profile, b.lower, b.upper); },
                          [](const Polytope&) -> SurfaceEstimate {
                              throw InputError("no exact surface formula for polytopes; use mc or fd");
                          },
                          [](const HyperRectangle&) -> SurfaceEstimate {
                              throw InputError("no exact surface formula for boxes; use mc or fd");
                          },
                      },
                      body);
}

FacetEstimate facet_surface_mc(const MeasureProfile& profile, const Polytope& body, int facet, int samples,
                               std::uint64_t seed, std::uint64_t stream)
{
    if (facet < 0 || facet >= body.facets()) throw InputError("facet index out of range");
    const double rho = body.offsets[facet];
    const double hyperplane = halfspace_surface(profile, rho).value;
    if (hyperplane <= 0.0) return facet_mc_impl(body, facet, samples, seed, stream, nullptr, 0.0);
    const FacetDensity f = facet_density(profile, rho);
    const quad::InverseCdfTable table(f, f.lo, f.hi, facet_peak(f, profile.t0));
    return facet_mc_impl(body, facet, samples, seed, stream, &table, hyperplane);
}

SurfaceEstimate polytope_surface_mc(const MeasureProfile& profile, const Polytope& body, int samples_per_facet,
                                    std::uint64_t seed)
{
    validate_body(body, profile.d);
    std::vector<int> all(static_cast<std::size_t>(body.facets()));
    for (int i = 0; i < body.facets(); ++i) all[static_cast<std::size_t>(i)] = i;
    return facet_subset_mc(profile, body, all, samples_per_facet, seed);
}

SurfaceEstimate facet_subset_mc(const MeasureProfile& profile, const Polytope& body, std::span<const int> facets,
                                int samples_per_facet, std::uint64_t seed)
{
    validate_body(body, profile.d);
    if (samples_per_facet < 1) throw InputError("samples per facet must be positive");

    std::map<double, std::pair<double, std::shared_ptr<quad::InverseCdfTable>>> tables;
    for (int i : facets) {
        if (i < 0 || i >= body.facets()) throw InputError("facet index out of range");
        const double rho = body.offsets[i];
        if (tables.count(rho)) continue;
        const double hyperplane = halfspace_surface(profile, rho).value;
        std::shared_ptr<quad::InverseCdfTable> table;
        if (hyperplane > 0.0 && body.facets() > 1) {
            const FacetDensity f = facet_density(profile, rho);
            table = std::make_shared<quad::InverseCdfTable>(f, f.lo, f.hi, facet_peak(f, profile.t0));
        }
        tables.emplace(rho, std::make_pair(hyperplane, table));
    }

    SurfaceEstimate out;
    out.method = SurfaceMethod::facet_mc;
    double var = 0.0;
    bool any_accepted = false;
    for (int i : facets) {
        const auto& [hyperplane, table] = tables.at(body.offsets[i]);
        const FacetEstimate e = facet_mc_impl(body, i, samples_per_facet, seed, 0, table.get(), hyperplane);
        out.value += e.value;
        var += e.std_error * e.std_error;
        out.samples += e.samples;
        any_accepted = any_accepted || e.acceptance > 0.0;
    }
    out.std_error = std::sqrt(var);
    if (!facets.empty() && !any_accepted) out.note = "unreliable: zero acceptance on every facet";
    return out;
}

SurfaceEstimate minkowski_fd_surface(const MeasureProfile& profile, const ConvexBody& body, double eps,
                                     std::int64_t samples, std::uint64_t seed)
{
    validate_body(body, profile.d);
    if (!(eps > 0.0)) throw InputError("finite-difference step must be positive");
    if (samples < 1) throw InputError("sample count must be positive");

    const RadialSampler sampler(profile);
    constexpr std::int64_t kFdChunk = 65536;
    const std::int64_t chunks = (samples + kFdChunk - 1) / kFdChunk;
    std::vector<std::int64_t> hits(static_cast<std::size_t>(chunks), 0);
    parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
        Rng rng = make_stream(seed, 0xFDu, c);
        const std::int64_t n = std::min<std::int64_t>(kFdChunk, samples - static_cast<std::int64_t>(c) * kFdChunk);
        std::int64_t count = 0;
        for (std::int64_t k = 0; k < n; ++k)
            if (inflated_member(body, sampler.sample(rng), eps)) ++count;
        hits[c] = count;
    });
    std::int64_t total = 0;
    for (auto h : hits) total += h;

    SurfaceEstimate out;
    out.method = SurfaceMethod::minkowski_fd;
    out.samples = samples;
    const double n = static_cast<double>(samples);
    const double p = static_cast<double>(total) / n;
    out.value = p / eps;
    out.std_error = std::sqrt(p * (1.0 - p) / n) / eps;
    return out;
}

namespace {

// 1 - E exp(-u X^2) for X uniform on [-1/2, 1/2], accurate for small u.
double cube_coordinate_deficit(double u)
{
    if (u <= 2.0) {
        double term = 1.0;  // (-u)^k / (k! 4^k)
        double sum = 0.0;
        for (int k = 1; k < 40; ++k) {
            term *= -u / (4.0 * k);
            const double add = -term / (2.0 * k + 1.0);
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return 1.0 - std::sqrt(std::numbers::pi / u) * std::erf(0.5 * std::sqrt(u));
}

}  // namespace

CubeCheck cube_lebesgue_check(int d)
{
    if (d < 2) throw InputError("dimension must be at least 2");
    const double dd = static_cast<double>(d);
    // E sqrt(S) = (1 / (2 sqrt(pi))) int_0^inf (1 - E e^{-u S}) u^{-3/2} du with
    // u = v^2 on [0, 1] and u = 1 / w^2 on [1, inf).
    const auto inner = [dd](double v) {
        const double deficit = cube_coordinate_deficit(v * v);
        return -2.0 * std::expm1(dd * std::log1p(-deficit)) / (v * v);
    };
    const auto outer = [dd](double w) {
        const double deficit = cube_coordinate_deficit(1.0 / (w * w));
        return 2.0 * std::exp(dd * std::log1p(-deficit));
    };
    const double unit[] = {0.0, 0.25, 0.5, 1.0};
    const quad::QuadResult a = quad::integrate(inner, unit, 1e-12);
    const quad::QuadResult b = quad::integrate(outer, unit, 1e-12, 1e-300);
    if (!a.converged || !b.converged) throw NumericalError("cube moment quadrature did not converge");

    CubeCheck out;
    out.surface = 2.0 * dd;
    out.expectation = (a.value + 2.0 - b.value) / (2.0 * std::sqrt(std::numbers::pi));
    out.variance = dd / 12.0 - out.expectation * out.expectation;
    return out;
}

}  // namespace logsurf
