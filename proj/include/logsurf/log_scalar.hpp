#pragma once

#include <cmath>
#include <limits>

namespace logsurf {

/// A nonnegative magnitude stored as its natural logarithm.
///
/// Radial integrals such as t^m e^{-phi(t)} over- or underflow double
/// precision long before m reaches the dimensions of interest, while every
/// quantity we report is a ratio of them. Products and quotients stay in log
/// space; exp is only taken on the final O(1) ratio.
struct LogScalar {
    double log_value = -std::numeric_limits<double>::infinity();

    static LogScalar from_value(double v) { return LogScalar{std::log(v)}; }
    static LogScalar zero() { return LogScalar{}; }
    static LogScalar one() { return LogScalar{0.0}; }

    double value() const { return std::exp(log_value); }
    bool is_zero() const { return std::isinf(log_value) && log_value < 0; }

    friend LogScalar operator*(LogScalar a, LogScalar b) { return {a.log_value + b.log_value}; }
    friend LogScalar operator/(LogScalar a, LogScalar b) { return {a.log_value - b.log_value}; }

    friend LogScalar operator+(LogScalar a, LogScalar b)
    {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const double hi = std::max(a.log_value, b.log_value);
        const double lo = std::min(a.log_value, b.log_value);
        return {hi + std::log1p(std::exp(lo - hi))};
    }

    friend bool operator<(LogScalar a, LogScalar b) { return a.log_value < b.log_value; }
};

}  // namespace logsurf
