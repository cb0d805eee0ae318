#include "logsurf/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <variant>

#include "logsurf/bodies.hpp"
#include "logsurf/certificates.hpp"
#include "logsurf/construction.hpp"
#include "logsurf/errors.hpp"
#include "logsurf/functionals.hpp"
#include "logsurf/parse.hpp"
#include "logsurf/sampling.hpp"

namespace logsurf::cli {

namespace {

using Value = std::variant<double, std::int64_t, std::string, bool>;
using Record = std::vector<std::pair<std::string, Value>>;

enum class Format { human, csv, json };

struct Common {
    std::string measure;
    int dim = 0;
    std::string dims;
    bool json = false;
    bool csv = false;
    std::string out;
    std::uint64_t seed = 0;
    bool allow_non_logconcave = false;

    Format format(Format fallback = Format::human) const
    {
        if (json) return Format::json;
        if (csv) return Format::csv;
        return fallback;
    }
};

std::string format_real(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string to_text(const Value& v)
{
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>)
                return format_real(x);
            else if constexpr (std::is_same_v<T, std::int64_t>)
                return std::to_string(x);
            else if constexpr (std::is_same_v<T, bool>)
                return x ? "true" : "false";
            else
                return x;
        },
        v);
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

nlohmann::ordered_json to_json(const Record& r)
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r) std::visit([&, key = k](const auto& x) { j[key] = x; }, v);
    return j;
}

// `list` selects array/table output even for a single row.
void emit(const std::vector<Record>& rows, Format format, bool list, std::ostream& os)
{
    switch (format) {
    case Format::json: {
        if (!list && rows.size() == 1) {
            os << to_json(rows.front()).dump(2) << '\n';
        } else {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const auto& r : rows) arr.push_back(to_json(r));
            os << arr.dump(2) << '\n';
        }
        return;
    }
    case Format::csv: {
        if (rows.empty()) return;
        for (std::size_t i = 0; i < rows.front().size(); ++i) os << (i ? "," : "") << rows.front()[i].first;
        os << '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(to_text(r[i].second));
            os << '\n';
        }
        return;
    }
    case Format::human: {
        if (!list && rows.size() == 1) {
            std::size_t width = 0;
            for (const auto& [k, v] : rows.front()) width = std::max(width, k.size());
            for (const auto& [k, v] : rows.front())
                os << k << std::string(width - k.size() + 2, ' ') << to_text(v) << '\n';
            return;
        }
        if (rows.empty()) return;
        std::vector<std::size_t> widths;
        for (const auto& [k, v] : rows.front()) widths.push_back(k.size());
        for (const auto& r : rows)
            for (std::size_t i = 0; i < r.size(); ++i) widths[i] = std::max(widths[i], to_text(r[i].second).size());
        const auto line = [&](const auto& cell) {
            for (std::size_t i = 0; i < widths.size(); ++i) {
                const std::string s = cell(i);
                os << s;
                if (i + 1 < widths.size()) os << std::string(widths[i] - s.size() + 2, ' ');
            }
            os << '\n';
        };
        line([&](std::size_t i) { return rows.front()[i].first; });
        for (const auto& r : rows) line([&](std::size_t i) { return to_text(r[i].second); });
        return;
    }
    }
}

void write_output(const std::vector<Record>& rows, const Common& c, Format fallback, bool list, std::ostream& out)
{
    if (c.out.empty()) {
        emit(rows, c.format(fallback), list, out);
        return;
    }
    std::ofstream file(c.out);
    if (!file) throw InputError("cannot write to " + c.out);
    emit(rows, c.json ? Format::json : Format::csv, list, file);
    if (!file) throw InputError("failed writing " + c.out);
}

void add_common(CLI::App* sub, Common& c, bool dim_required)
{
    sub->add_option("--measure", c.measure, "gaussian | gp:p= | ball:R= | shell:R=,eps= | table:file=")->required();
    auto* dim = sub->add_option("--dim", c.dim, "ambient dimension d >= 2");
    if (dim_required) dim->required();
    auto* json = sub->add_flag("--json", c.json, "JSON output");
    sub->add_flag("--csv", c.csv, "CSV output")->excludes(json);
    sub->add_option("--out", c.out, "write CSV to this file instead of stdout");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_flag("--allow-non-logconcave", c.allow_non_logconcave, "admit the shell measure");
}

MeasureProfile load_profile(const Common& c, int d)
{
    return make_profile(parse_measure(c.measure, c.allow_non_logconcave), d);
}

// ---------------------------------------------------------------- functionals

int run_functionals(const Common& c, std::ostream& out)
{
    const MeasureProfile p = load_profile(c, c.dim);
    Record r{
        {"measure", p.potential.describe()},
        {"d", std::int64_t{p.d}},
        {"m", std::int64_t{p.m}},
        {"t0", p.t0},
        {"lambda_i", p.lambda_i},
        {"lambda_o", p.lambda_o},
        {"lambda_sum", p.lambda_sum},
        {"lambda_ratio", p.lambda_ratio},
        {"log_Jm", p.J(p.m).log_value},
        {"log_normalizer", p.log_normalizer.log_value},
        {"expectation", p.expectation},
        {"variance", p.variance},
        {"theorem_bound", max_surface_scale(p)},
        {"theorem_bound_probabilistic", max_surface_scale_moments(p)},
        {"rough_bound", rough_surface_bound(p)},
    };
    write_output({r}, c, Format::human, false, out);
    return ok;
}

// -------------------------------------------------------------------- surface

struct SurfaceArgs {
    std::string body;
    std::string method = "auto";
    std::int64_t samples = 0;
    double eps = 1e-3;
};

int run_surface(const Common& c, const SurfaceArgs& a, std::ostream& out)
{
    const MeasureProfile p = load_profile(c, c.dim);
    const ConvexBody body = parse_body(a.body, c.dim);
    std::string method = a.method;
    if (method == "auto")
        method = std::holds_alternative<Polytope>(body) || std::holds_alternative<HyperRectangle>(body) ? "mc" : "exact";

    SurfaceEstimate e;
    if (method == "exact") {
        e = exact_surface(p, body);
    } else if (method == "mc") {
        const auto poly = as_polytope(body);
        if (!poly) throw InputError("method mc needs a half-space, slab, box or polytope body");
        const std::int64_t n = a.samples > 0 ? a.samples : 100000;
        if (n > std::numeric_limits<int>::max()) throw InputError("too many samples per facet");
        e = polytope_surface_mc(p, *poly, static_cast<int>(n), c.seed);
    } else if (method == "fd") {
        e = minkowski_fd_surface(p, body, a.eps, a.samples > 0 ? a.samples : 1000000, c.seed);
    } else {
        throw InputError("method must be exact, mc or fd");
    }
    Record r{
        {"measure", p.potential.describe()},
        {"d", std::int64_t{p.d}},
        {"body", a.body},
        {"method", to_string(e.method)},
        {"value", e.value},
        {"std_error", e.std_error},
        {"samples", e.samples},
        {"note", e.note},
    };
    write_output({r}, c, Format::human, false, out);
    return ok;
}

// ---------------------------------------------------------------- certificate

int run_certificate(const Common& c, const std::string& body_text, int grid, std::ostream& out)
{
    const MeasureProfile p = load_profile(c, c.dim);
    const auto poly = as_polytope(parse_body(body_text, c.dim));
    if (!poly) throw InputError("certificate needs a half-space, slab, box or polytope body");
    const Certificate cert = certificate_upper_bound(p, *poly, grid);
    Record r{
        {"measure", p.potential.describe()},
        {"d", std::int64_t{p.d}},
        {"facets", std::int64_t{poly->facets()}},
        {"certificate", cert.value},
        {"radial_bound", cert.radial_bound},
        {"rough_bound", cert.rough_bound},
        {"binding", cert.binding},
        {"argmin_radius", cert.argmin.radius},
        {"argmin_alpha", cert.argmin.alpha},
        {"argmin_facet", std::int64_t{cert.facet}},
    };
    write_output({r}, c, Format::human, false, out);
    return ok;
}

// ------------------------------------------------------------------ construct

struct ConstructArgs {
    double c_rho = 0.2;
    int trials = 8;
    int samples = 2000;
    int facet_subsample = 64;
    bool construction = true;
};

Record construction_record(const ConstructionEstimate& e)
{
    return {
        {"rho", e.spec.rho},
        {"W", e.spec.annulus_width},
        {"N_real", e.spec.facets_real},
        {"N_eff", e.spec.facets},
        {"c_rho", e.spec.c_rho},
        {"seed", static_cast<std::int64_t>(e.spec.seed)},
        {"trials", static_cast<std::int64_t>(e.trial_values.size())},
        {"method", to_string(e.estimate.method)},
        {"value", e.estimate.value},
        {"std_error", e.estimate.std_error},
        {"between_trial_stderr", e.between_trial_stderr},
        {"total_stderr", e.total_stderr()},
        {"samples", e.estimate.samples},
        {"note", e.estimate.note},
    };
}

int run_construct(const Common& c, const ConstructArgs& a, std::ostream& out)
{
    const MeasureProfile p = load_profile(c, c.dim);
    const ConstructionEstimate e = expected_surface(p, a.c_rho, a.trials, a.samples, a.facet_subsample, c.seed);
    Record r{{"measure", p.potential.describe()}, {"d", std::int64_t{p.d}}};
    for (auto& kv : construction_record(e)) r.push_back(std::move(kv));
    write_output({r}, c, Format::human, false, out);
    return ok;
}

// ---------------------------------------------------------------------- sweep

int run_sweep(const Common& c, const ConstructArgs& a, std::ostream& out, std::ostream& err)
{
    if (c.dims.empty()) throw InputError("sweep needs --dims a:b:geometric");
    const RadialPotential phi = parse_measure(c.measure, c.allow_non_logconcave);
    std::vector<Record> rows;
    for (int d : parse_dims(c.dims)) {
        const MeasureProfile p = make_profile(phi, d);
        const double sphere = sphere_surface(p, sphere_argmax(p)).value;
        double estimate = std::nan("");
        double stderr_value = std::nan("");
        if (a.construction) {
            try {
                const ConstructionEstimate e =
                    expected_surface(p, a.c_rho, a.trials, a.samples, a.facet_subsample, c.seed);
                estimate = e.estimate.value;
                stderr_value = e.total_stderr();
            } catch (const InputError& ex) {
                err << "construction skipped at d=" << d << ": " << ex.what() << '\n';
            }
        }
        rows.push_back({
            {"d", std::int64_t{d}},
            {"t0", p.t0},
            {"lambda_ratio", p.lambda_ratio},
            {"theorem_bound", max_surface_scale(p)},
            {"theorem_bound_probabilistic", max_surface_scale_moments(p)},
            {"halfspace_surface", halfspace_surface(p, 0.0).value},
            {"max_sphere_surface", sphere},
            {"construction_estimate", estimate},
            {"construction_stderr", stderr_value},
        });
    }
    write_output(rows, c, Format::csv, true, out);
    return ok;
}

// --------------------------------------------------------------------- verify

struct Check {
    int d = 0;
    std::string name;
    std::string status;  // PASS, FAIL, SKIP or EXPECTED
    double measured = std::nan("");
    double bound = std::nan("");
    std::string detail;
};

class CheckList {
public:
    explicit CheckList(int d) : d_(d) {}

    void add(const std::string& name, bool pass, double measured, double bound, std::string detail = {})
    {
        checks_.push_back({d_, name, pass ? "PASS" : "FAIL", measured, bound, std::move(detail)});
    }
    void skip(const std::string& name, std::string why)
    {
        checks_.push_back({d_, name, "SKIP", std::nan(""), std::nan(""), std::move(why)});
    }
    void expected(const std::string& name, double measured, double bound, std::string detail)
    {
        checks_.push_back({d_, name, "EXPECTED", measured, bound, std::move(detail)});
    }
    std::vector<Check>& checks() { return checks_; }

private:
    int d_;
    std::vector<Check> checks_;
};

// Probe radii strictly inside the support, up to 4 t0 for unbounded supports.
std::vector<double> probe_radii(const MeasureProfile& p, int n)
{
    const double lo = p.potential.support_lower();
    const double radius = p.potential.support_radius();
    const double hi = std::isfinite(radius) ? radius : 4.0 * p.t0;
    std::vector<double> ts;
    for (int k = 0; k < n; ++k) ts.push_back(lo + (hi - lo) * (k + 0.5) / n);
    return ts;
}

void verify_potential(const MeasureProfile& p, CheckList& out)
{
    const RadialPotential& phi = p.potential;
    const auto ts = probe_radii(p, 64);
    double worst_mono = 0.0;
    double worst_convex = 0.0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        worst_mono = std::max(worst_mono, phi.value(ts[i]) - phi.value(ts[i + 1]));
        if (i + 2 < ts.size()) {
            const double mid = phi.value(ts[i + 1]);
            const double excess = mid - 0.5 * (phi.value(ts[i]) + phi.value(ts[i + 2]));
            worst_convex = std::max(worst_convex, excess / std::max(1.0, std::abs(mid)));
        }
    }
    out.add("potential_monotone", worst_mono <= 0.0, worst_mono, 0.0);
    out.add("potential_midpoint_convex", worst_convex <= 1e-12, worst_convex, 1e-12);

    if (!phi.smooth()) {
        out.skip("potential_derivative_fd", "potential is not smooth");
        return;
    }
    double worst = 0.0;
    for (double t : ts) {
        const double h = 1e-5 * t;
        const double fd = (phi.value(t + h) - phi.value(t - h)) / (2.0 * h);
        const double exact = phi.derivative(t);
        worst = std::max(worst, std::abs(fd - exact) / std::max(std::abs(exact), 1e-300));
    }
    out.add("potential_derivative_fd", worst <= 1e-6, worst, 1e-6);
}

void verify_functionals(const MeasureProfile& p, CheckList& out)
{
    const double m = static_cast<double>(p.m);
    const double e = std::numbers::e;
    const double log_peak_mass = p.log_gm_t0.log_value + std::log(p.t0);
    const double log_jm = p.J(p.m).log_value;
    const double sqrt2pi = std::sqrt(2.0 * std::numbers::pi);

    const double lower = std::exp(log_peak_mass - std::log(m + 1.0) - log_jm);
    out.add("moment_lower_bound", lower <= 1.0 + 1e-9, lower, 1.0, "g_m(t0) t0 / ((m+1) J_m)");
    const double upper = std::exp(log_jm - log_peak_mass) / (2.0 * sqrt2pi / std::sqrt(m));
    out.add("moment_upper_bound", upper <= 1.0, upper, 1.0, "J_m / (2 sqrt(2 pi) g_m(t0) t0 / sqrt(m))");

    const double band = p.lambda_ratio / p.lambda_sum;
    out.add("spread_mass_band", band >= 1.0 / e && band <= (e + 1.0) / e, band, (e + 1.0) / e,
            "J_m / (lambda t0 g_m(t0)) in [1/e, (e+1)/e]");
    const double lam_lo = (e / (e + 1.0)) / (m + 1.0);
    const double lam_hi = 2.0 * sqrt2pi * e / std::sqrt(m);
    out.add("spread_band", p.lambda_sum >= lam_lo && p.lambda_sum <= lam_hi, p.lambda_sum, lam_hi);
    out.add("inner_spread_lower", p.lambda_i >= lam_lo, p.lambda_i, lam_lo);
    const double phi_t0 = p.potential.left_value(p.t0);
    out.add("potential_at_peak", phi_t0 <= m, phi_t0, m);

    if (p.potential.smooth() && p.m >= 2) {
        const double ratio = p.t0 / peak_radius(p.potential, p.m - 1);
        out.add("peak_radius_ratio", ratio >= 1.0 && ratio <= 1.0 + 1.0 / (m - 1.0), ratio, 1.0 + 1.0 / (m - 1.0));
    } else {
        out.skip("peak_radius_ratio", "needs a smooth potential and m >= 2");
    }
    const double jr = std::exp(log_jm - p.J(p.m - 1).log_value) / p.t0;
    out.add("moment_ratio_band", jr >= 1.0 / 8.0 && jr <= 8.0, jr, 8.0, "J_m / (J_{m-1} t0)");

    const double direct = radial_expectation(p, [](double t) { return t; });
    const double rel = std::abs(direct - p.expectation) / p.expectation;
    out.add("expectation_identity", rel <= 1e-10, rel, 1e-10);
}

void verify_bodies(const MeasureProfile& p, std::uint64_t seed, CheckList& out)
{
    const double rough = rough_surface_bound(p);
    const double sphere = sphere_surface(p, sphere_argmax(p)).value;
    out.add("rough_bound_sphere", sphere <= rough * (1.0 + 1e-9), sphere, rough);
    const double plane = halfspace_surface(p, 0.0).value;
    out.add("rough_bound_halfspace", plane <= rough * (1.0 + 1e-9), plane, rough);

    const double m = static_cast<double>(p.m);
    const double shrink = std::pow(1.0 + 1.0 / m, -m);
    const double outer = sphere_surface(p, p.t0).value;
    const double inner = sphere_surface(p, p.t0 / (1.0 + 1.0 / m)).value;
    out.add("homothety_stability", inner >= shrink * outer * (1.0 - 1e-9) && shrink >= std::exp(-1.0),
            inner / outer, shrink);

    const RadialSampler sampler(p);
    constexpr int n = 2000;
    Rng rng = make_stream(seed, 0xC5);
    std::vector<double> radii(n);
    for (double& r : radii) r = sampler.sample_radius(rng);
    std::sort(radii.begin(), radii.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = radial_cdf(p, radii[static_cast<std::size_t>(i)]);
        ks = std::max({ks, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
    }
    out.add("sampler_ks_distance", ks < 4.0 / std::sqrt(n), ks, 4.0 / std::sqrt(n));
}

void verify_certificates(const MeasureProfile& p, std::uint64_t seed, CheckList& out)
{
    double worst = 0.0;
    std::vector<double> radii{0.5 * p.t0, p.t0};
    if (!std::isfinite(p.potential.support_radius())) radii.push_back(1.5 * p.t0);
    for (double r : radii) {
        const double prod = radial_exhaustion(p, {r, 1.0}) * sphere_surface(p, r).value;
        worst = std::max(worst, std::abs(prod - 1.0));
    }
    out.add("exhaustion_reciprocity", worst <= 1e-9, worst, 1e-9);

    bool monotone = true;
    double prev = profile_drop(p, 0.0);
    for (int k = 1; k <= 40; ++k) {
        const double x = 2.0 * k / 40.0;
        const double v = profile_drop(p, x);
        monotone = monotone && (v >= prev || v >= prev - 1e-12 * std::max(1.0, std::abs(prev)));
        prev = v;
    }
    prev = profile_drop(p, 0.0);
    for (int k = 1; k < 40; ++k) {
        const double x = -0.95 * k / 40.0;
        const double v = profile_drop(p, x);
        monotone = monotone && (v >= prev || v >= prev - 1e-12 * std::max(1.0, std::abs(prev)));
        prev = v;
    }
    out.add("profile_drop_monotone", monotone, profile_drop(p, 0.0), 0.0);

    if (p.potential.smooth()) {
        double ratio = 0.0;
        bool ok_chain = true;
        for (int k = 0; k <= 8; ++k) {
            const double t = p.t0 * (1.0 + 0.25 * k);
            const auto step = unit_potential_step(p, t);
            const double cap = 1.0 / (t * p.potential.derivative(t));
            if (!step) continue;
            ratio = std::max(ratio, *step / cap);
            ok_chain = ok_chain && *step <= cap * (1.0 + 1e-9) && cap <= (1.0 + 1e-9) / p.m;
        }
        out.add("unit_step_bound", ok_chain, ratio, 1.0, "Lambda(t) <= 1/(t phi'(t)) <= 1/m for t >= t0");
    } else {
        out.skip("unit_step_bound", "potential is not smooth");
    }

    std::optional<PolytopeSpec> spec;
    for (double c_rho : {1.0, 0.2}) {
        try {
            spec = plan_polytope(p, c_rho, seed);
            break;
        } catch (const InputError&) {
        }
    }
    if (!spec || spec->facets > 512) {
        out.skip("certificate_dominates", "no construction polytope with at most 512 facets");
        return;
    }
    const Polytope body = sample_polytope(*spec, p);
    const SurfaceEstimate mc = polytope_surface_mc(p, body, 4000, seed);
    const Certificate cert = certificate_upper_bound(p, body);
    const double low = mc.value - 3.0 * mc.std_error;
    out.add("certificate_dominates", low <= cert.value && cert.value <= cert.rough_bound * (1.0 + 1e-12), low,
            cert.value, "facet MC - 3 sigma <= certificate <= rough bound");
}

void verify_construction(const MeasureProfile& p, CheckList& out)
{
    bool monotone = true;
    for (int i = 1; i <= 8; ++i) {
        const double rho = 0.25 * p.t0 * i / 8.0;
        double prev = 0.0;
        for (int k = 1; k <= 16; ++k) {
            const double v = cap_probability(p, 2.0 * p.t0 * k / 16.0, rho);
            monotone = monotone && v >= prev - 1e-12;
            prev = v;
        }
    }
    for (int k = 1; k <= 8; ++k) {
        double prev = 1.0;
        for (int i = 0; i <= 16; ++i) {
            const double v = cap_probability(p, p.t0 * k / 4.0, p.t0 * i / 16.0);
            monotone = monotone && v <= prev + 1e-12;
            prev = v;
        }
    }
    out.add("cap_probability_monotone", monotone, 0.0, 0.0);

    std::optional<PolytopeSpec> spec;
    for (double c_rho : {1.0, 0.2}) {
        try {
            spec = plan_polytope(p, c_rho);
            break;
        } catch (const InputError&) {
        }
    }
    if (!spec || p.m < 2) {
        out.skip("cap_separation_bound", "no admissible construction");
        return;
    }
    constexpr double kSlack = 3.0;
    const double m = static_cast<double>(p.m);
    double worst = 0.0;
    for (int k = 0; k <= 16; ++k) {
        const double r = p.t0 - spec->annulus_width + 2.0 * spec->annulus_width * k / 16.0;
        if (r <= spec->rho) continue;
        const double q = spec->rho / r;
        const double ref = r / (std::sqrt(m) * spec->rho) * std::exp(0.5 * m * std::log1p(-q * q));
        worst = std::max(worst, cap_probability(p, r, spec->rho) / ref);
    }
    out.add("cap_separation_bound", worst <= kSlack, worst, kSlack, "p(r) / reference over the annulus");
}

std::vector<Check> verify_dimension(const RadialPotential& phi, int d, std::uint64_t seed)
{
    const MeasureProfile p = make_profile(phi, d);
    CheckList out(d);
    if (!phi.log_concave()) {
        const double sphere = sphere_surface(p, phi.support_radius()).value;
        const double bound = max_surface_scale_moments(p);
        out.expected("shell_counterexample", sphere, bound,
                      sphere > bound ? "sphere surface exceeds the moment bound: expected for a non-log-concave measure"
                                     : "moment bound not exceeded");
        return out.checks();
    }
    verify_potential(p, out);
    verify_functionals(p, out);
    verify_bodies(p, seed, out);
    verify_certificates(p, seed, out);
    verify_construction(p, out);
    return out.checks();
}

int run_verify(const Common& c, std::ostream& out)
{
    const RadialPotential phi = parse_measure(c.measure, c.allow_non_logconcave);
    std::vector<int> dims;
    if (!c.dims.empty())
        dims = parse_dims(c.dims);
    else if (c.dim != 0)
        dims = {c.dim};
    else
        throw InputError("verify needs --dim or --dims");

    std::vector<Check> checks;
    for (int d : dims) {
        auto part = verify_dimension(phi, d, c.seed);
        checks.insert(checks.end(), part.begin(), part.end());
    }
    int failed = 0;
    std::vector<Record> rows;
    for (const auto& ch : checks) {
        if (ch.status == "FAIL") ++failed;
        rows.push_back({
            {"status", ch.status},
            {"d", std::int64_t{ch.d}},
            {"check", ch.name},
            {"measured", ch.measured},
            {"bound", ch.bound},
            {"detail", ch.detail},
        });
    }
    write_output(rows, c, Format::human, true, out);
    if (c.format() == Format::human && c.out.empty())
        out << checks.size() << " checks, " << failed << " failed\n";
    return failed == 0 ? ok : invariant_failure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Surface areas of convex bodies under rotation-invariant log-concave measures", "logsurf"};
    app.require_subcommand(1);

    Common common;
    SurfaceArgs surface;
    ConstructArgs construct;
    ConstructArgs sweep{1.0, 8, 1000, 32, true};
    int grid = 64;
    std::string cert_body;

    auto* functionals = app.add_subcommand("functionals", "scalar functionals of a measure");
    add_common(functionals, common, true);

    auto* surf = app.add_subcommand("surface", "surface area of a convex body");
    add_common(surf, common, true);
    surf->add_option("--body", surface.body, "sphere:R= | ball:R= | halfspace:rho= | slab:rho1=,rho2= | "
                                             "polytope:file= | box:halfwidths=")
        ->required();
    surf->add_option("--method", surface.method, "exact | mc | fd (default: exact when available)");
    surf->add_option("--samples", surface.samples, "Monte Carlo samples (per facet for mc)");
    surf->add_option("--eps", surface.eps, "finite-difference step for fd");

    auto* certificate = app.add_subcommand("certificate", "upper-bound certificate for a polytope");
    add_common(certificate, common, true);
    certificate->add_option("--body", cert_body, "polytope:file= (or halfspace, slab, box)")->required();
    certificate->add_option("--grid", grid, "probe rays per facet");

    auto* cons = app.add_subcommand("construct", "random circumscribed polytope construction");
    add_common(cons, common, true);
    cons->add_option("--c-rho", construct.c_rho, "scale of the facet offset");
    cons->add_option("--trials", construct.trials, "independent polytopes");
    cons->add_option("--samples", construct.samples, "Monte Carlo samples per facet");
    cons->add_option("--facet-subsample", construct.facet_subsample, "facets estimated per polytope");

    auto* sw = app.add_subcommand("sweep", "functionals and construction across dimensions");
    add_common(sw, common, false);
    sw->add_option("--dims", common.dims, "a:b:geometric or a:b:linear")->required();
    sw->add_option("--c-rho", sweep.c_rho, "scale of the facet offset");
    sw->add_option("--trials", sweep.trials, "independent polytopes");
    sw->add_option("--samples", sweep.samples, "Monte Carlo samples per facet");
    sw->add_option("--facet-subsample", sweep.facet_subsample, "facets estimated per polytope");
    auto* no_construction = sw->add_flag("--no-construction", "skip the Monte Carlo construction columns");

    auto* verify = app.add_subcommand("verify", "check every invariant for a measure");
    add_common(verify, common, false);
    verify->add_option("--dims", common.dims, "a:b:geometric or a:b:linear");

    std::vector<std::string> argv_storage{"logsurf"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_storage) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? ok : bad_input;
    }

    try {
        if (common.dim != 0 && common.dim < 2) throw InputError("dimension must be at least 2");
        if (*functionals) return run_functionals(common, out);
        if (*surf) return run_surface(common, surface, out);
        if (*certificate) return run_certificate(common, cert_body, grid, out);
        if (*cons) return run_construct(common, construct, out);
        if (*sw) {
            sweep.construction = no_construction->count() == 0;
            return run_sweep(common, sweep, out, err);
        }
        if (*verify) return run_verify(common, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return bad_input;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    }
    return bad_input;
}

}  // namespace logsurf::cli
