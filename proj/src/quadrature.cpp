#include "logsurf/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "logsurf/errors.hpp"

namespace logsurf::quad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// 21-point Kronrod abscissae (positive half, descending) and weights; the
// odd-indexed abscissae are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208643474695, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a, b, value, error;
    bool splittable;
};

Segment gauss_kronrod21(const Function& f, double a, double b)
{
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double resg = 0.0;
    double resk = kWgk[10] * fc;
    double resabs = std::abs(resk);
    std::array<double, 10> fv1{}, fv2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        fv1[j] = f(centre - dx);
        fv2[j] = f(centre + dx);
        const double sum = fv1[j] + fv2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j)
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    const double value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
    const double mid = centre;
    return {a, b, value, err, mid > a && mid < b};
}

}  // namespace

QuadResult integrate(const Function& f, std::span<const double> breaks, double rel_tol, double abs_tol,
                     int max_intervals)
{
    QuadResult out;
    if (breaks.size() < 2) return out;
    std::vector<Segment> segs;
    segs.reserve(static_cast<std::size_t>(max_intervals) + breaks.size());
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] > breaks[i]) segs.push_back(gauss_kronrod21(f, breaks[i], breaks[i + 1]));
    }

    while (true) {
        double total = 0.0, total_err = 0.0;
        for (const auto& s : segs) {
            total += s.value;
            total_err += s.error;
        }
        out.value = total;
        out.abs_error = total_err;
        out.intervals = static_cast<int>(segs.size());
        if (!std::isfinite(total)) {
            out.converged = false;
            return out;
        }
        if (total_err <= std::max(abs_tol, rel_tol * std::abs(total))) {
            out.converged = true;
            return out;
        }
        if (static_cast<int>(segs.size()) >= max_intervals) return out;

        std::size_t worst = segs.size();
        for (std::size_t i = 0; i < segs.size(); ++i) {
            if (segs[i].splittable && (worst == segs.size() || segs[i].error > segs[worst].error)) worst = i;
        }
        if (worst == segs.size()) return out;
        const Segment s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        segs[worst] = gauss_kronrod21(f, s.a, mid);
        segs.insert(segs.begin() + static_cast<std::ptrdiff_t>(worst) + 1, gauss_kronrod21(f, mid, s.b));
    }
}

double bisect_boundary(const std::function<bool(double)>& pred, double lo, double hi)
{
    for (int it = 0; it < 4000; ++it) {
        double mid;
        if (lo > 0.0 && hi > 4.0 * lo)
            mid = std::sqrt(lo) * std::sqrt(hi);
        else
            mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) break;
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double locate_peak(const Function& log_f, double lo, double hi, double scale)
{
    if (!std::isfinite(hi)) {
        double x = std::max(lo, 0.0) + (scale > 0.0 ? scale : 1.0);
        double fx = log_f(x);
        for (int it = 0; it < 2000; ++it) {
            const double x2 = lo + 2.0 * (x - lo);
            const double f2 = log_f(x2);
            if (f2 < fx || !std::isfinite(x2)) {
                hi = x2;
                break;
            }
            x = x2;
            fx = f2;
        }
        if (!std::isfinite(hi)) throw NumericalError("log-density keeps increasing; measure not normalizable");
    }

    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = log_f(c), fd = log_f(d);
    double best_x = fc >= fd ? c : d;
    double best_f = std::max(fc, fd);
    for (int it = 0; it < 400; ++it) {
        if (b - a <= 4.0 * kEps * std::max(std::abs(a), std::abs(b))) break;
        if (fc < fd) {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = log_f(d);
            if (fd > best_f) { best_f = fd; best_x = d; }
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = log_f(c);
            if (fc > best_f) { best_f = fc; best_x = c; }
        }
    }
    return best_x;
}

Window find_window(const Function& log_f, double lo, double hi, double peak, double drop)
{
    const double target = log_f(peak) - drop;
    Window w{lo, hi};
    if (peak > lo && !(log_f(lo) >= target))
        w.lo = bisect_boundary([&](double x) { return log_f(x) >= target; }, lo, peak);
    else
        w.lo = std::min(lo, peak);

    if (std::isfinite(hi)) {
        if (peak < hi && !(log_f(hi) >= target))
            w.hi = bisect_boundary([&](double x) { return !(log_f(x) >= target); }, peak, hi);
    } else {
        double step = peak > 0.0 ? peak : 1.0;
        double x = peak + step;
        for (int it = 0; it < 2000 && log_f(x) >= target; ++it) {
            step *= 2.0;
            x = peak + step;
        }
        if (!std::isfinite(x)) throw NumericalError("log-density tail does not decay; measure not normalizable");
        w.hi = bisect_boundary([&](double y) { return !(log_f(y) >= target); }, peak, x);
    }
    return w;
}

LogScalar log_integral(const Function& log_f, double lo, double hi, double peak, std::span<const double> breaks,
                       double rel_tol)
{
    const double peak_value = log_f(peak);
    if (!std::isfinite(peak_value)) {
        if (peak_value > 0) throw NumericalError("log-density is unbounded at its peak");
        return LogScalar::zero();
    }
    const Window w = find_window(log_f, lo, hi, peak);
    if (!(w.hi > w.lo)) return LogScalar::zero();

    std::vector<double> pts{w.lo, w.hi};
    if (peak > w.lo && peak < w.hi) pts.push_back(peak);
    for (double b : breaks)
        if (b > w.lo && b < w.hi) pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const auto shifted = [&](double x) {
        const double v = log_f(x) - peak_value;
        return v > -745.0 ? std::exp(v) : 0.0;
    };
    const QuadResult r = integrate(shifted, pts, rel_tol);
    if (!r.converged) {
        std::ostringstream os;
        os << "quadrature did not converge: estimate " << r.value << " with error " << r.abs_error << " after "
           << r.intervals << " intervals";
        throw NumericalError(os.str());
    }
    if (!(r.value > 0.0)) return LogScalar::zero();
    return LogScalar{peak_value + std::log(r.value)};
}

InverseCdfTable::InverseCdfTable(const Function& log_f, double lo, double hi, double peak, int cells)
{
    const double peak_value = log_f(peak);
    if (!std::isfinite(peak_value)) throw NumericalError("cannot tabulate a density with no mass");
    const Window w = find_window(log_f, lo, hi, peak);
    if (!(w.hi > w.lo)) throw NumericalError("cannot tabulate a density concentrated at a point");

    const auto n = static_cast<std::size_t>(std::max(cells, 1));
    const double h = (w.hi - w.lo) / static_cast<double>(n);
    x_.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) x_[j] = w.lo + h * static_cast<double>(j);
    x_[n] = w.hi;

    // endpoints nudged inside so jump discontinuities at the window edge do
    // not poison the log-linear shape of the boundary cells
    const double nudge = 1e-9 * h;
    std::vector<double> logd(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        double x = x_[j];
        if (j == 0) x += nudge;
        if (j == n) x -= nudge;
        logd[j] = log_f(x) - peak_value;
    }

    const auto shifted = [&](double x) {
        const double v = log_f(x) - peak_value;
        return v > -745.0 ? std::exp(v) : 0.0;
    };
    cdf_.assign(n + 1, 0.0);
    slope_.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const Segment s = gauss_kronrod21(shifted, x_[j], x_[j + 1]);
        cdf_[j + 1] = cdf_[j] + std::max(s.value, 0.0);
        if (std::isfinite(logd[j]) && std::isfinite(logd[j + 1])) slope_[j] = (logd[j + 1] - logd[j]) / h;
    }
    const double total = cdf_[n];
    if (!(total > 0.0)) throw NumericalError("cannot tabulate a density with no mass");
    for (auto& c : cdf_) c /= total;
    cdf_[n] = 1.0;
}

double InverseCdfTable::quantile(double u) const
{
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t j = it == cdf_.begin() ? 0 : static_cast<std::size_t>(it - cdf_.begin()) - 1;
    j = std::min(j, slope_.size() - 1);
    while (j > 0 && !(cdf_[j + 1] > cdf_[j])) --j;
    const double mass = cdf_[j + 1] - cdf_[j];
    const double h = x_[j + 1] - x_[j];
    if (!(mass > 0.0)) return x_[j];
    const double v = std::clamp((u - cdf_[j]) / mass, 0.0, 1.0);
    const double b = std::clamp(slope_[j] * h, -700.0, 700.0);
    double frac;
    if (std::abs(b) < 1e-9)
        frac = v;
    else
        frac = std::log1p(v * std::expm1(b)) / b;
    return x_[j] + std::clamp(frac, 0.0, 1.0) * h;
}

double InverseCdfTable::cdf(double x) const
{
    if (x <= x_.front()) return 0.0;
    if (x >= x_.back()) return 1.0;
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[j + 1] - x_[j];
    const double b = std::clamp(slope_[j] * h, -700.0, 700.0);
    const double s = (x - x_[j]) / h;
    double frac;
    if (std::abs(b) < 1e-9)
        frac = s;
    else
        frac = std::expm1(b * s) / std::expm1(b);
    return cdf_[j] + frac * (cdf_[j + 1] - cdf_[j]);
}

}  // namespace logsurf::quad
