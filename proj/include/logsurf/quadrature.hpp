#pragma once

#include <functional>
#include <span>
#include <vector>

#include "logsurf/log_scalar.hpp"

namespace logsurf::quad {

using Function = std::function<double(double)>;

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    int intervals = 0;
    bool converged = false;
};

/// Globally adaptive 21-point Gauss-Kronrod integration of f over the
/// consecutive segments [breaks[0], breaks[1]], [breaks[1], breaks[2]], ...
///
/// The worst interval is bisected until the summed error estimate is below
/// max(abs_tol, rel_tol * |I|) or `max_intervals` is reached. Partial sums are
/// always accumulated in interval order, so results are reproducible.
QuadResult integrate(const Function& f, std::span<const double> breaks, double rel_tol = 1e-12,
                     double abs_tol = 0.0, int max_intervals = 4000);

/// Smallest x in [lo, hi] with pred(x) true, for a predicate that is false then
/// true along the interval. Assumes pred(hi) is true; iterates to adjacent
/// doubles.
double bisect_boundary(const std::function<bool(double)>& pred, double lo, double hi);

/// Maximizer of a concave (possibly extended-valued) log_f on [lo, hi].
/// `hi` may be +inf, in which case the bracket is grown geometrically from
/// `scale`.
double locate_peak(const Function& log_f, double lo, double hi, double scale = 1.0);

struct Window {
    double lo = 0.0;
    double hi = 0.0;
};

/// Nats below the peak at which integration windows are truncated. The tails
/// of a log-concave profile beyond this point weigh less than e^{-60}.
inline constexpr double kWindowDrop = 60.0;

/// Interval around `peak` outside which the concave log_f lies more than
/// `drop` below log_f(peak), clipped to [lo, hi].
Window find_window(const Function& log_f, double lo, double hi, double peak, double drop = kWindowDrop);

/// log of the integral of exp(log_f) over [lo, hi] for concave log_f with its
/// maximum at `peak`. Integration runs relative to the peak value over the
/// truncated window; `breaks` adds extra subdivision points (kinks).
LogScalar log_integral(const Function& log_f, double lo, double hi, double peak,
                       std::span<const double> breaks = {}, double rel_tol = 1e-12);

/// Monotone inverse-CDF table for a one-dimensional log-concave density.
///
/// Knots are uniform over the truncated window; cell masses come from a
/// Gauss-Kronrod rule, and within a cell the density is taken as log-linear so
/// sampling inverts an exponential exactly.
class InverseCdfTable {
public:
    InverseCdfTable() = default;
    InverseCdfTable(const Function& log_f, double lo, double hi, double peak, int cells = 4096);

    /// Quantile for u in [0, 1).
    double quantile(double u) const;
    /// Table CDF at x.
    double cdf(double x) const;

    double lower() const { return x_.front(); }
    double upper() const { return x_.back(); }

private:
    std::vector<double> x_;
    std::vector<double> cdf_;
    std::vector<double> slope_;  // log-density slope per cell
};

}  // namespace logsurf::quad
