#pragma once

#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "logsurf/potential.hpp"

namespace logsurf::testing {

inline bool rel_close(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

// Convex nondecreasing piecewise-linear potential with random knots and
// strictly positive, increasing slopes.
inline TabulatedPotential random_valid_table(std::mt19937_64& rng, Extrapolation mode = Extrapolation::linear)
{
    std::uniform_real_distribution<double> gap(0.2, 1.5);
    std::uniform_real_distribution<double> rise(0.05, 1.0);
    std::uniform_int_distribution<int> count(3, 9);
    TabulatedPotential table;
    table.extrapolation = mode;
    double x = 0.0;
    double v = 0.0;
    double slope = 0.0;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        slope += rise(rng);
        const double h = gap(rng);
        x += h;
        v += slope * h;
        table.knots.push_back(x);
        table.values.push_back(v);
    }
    return table;
}

// Test measures with a label; the table member is seeded deterministically.
inline std::vector<std::pair<std::string, RadialPotential>> zoo()
{
    std::mt19937_64 rng(20240611);
    return {
        {"gaussian", make_gaussian()},
        {"gp:p=1", make_power(1.0)},
        {"gp:p=4", make_power(4.0)},
        {"ball:R=1", make_ball(1.0)},
        {"table", make_tabulated(random_valid_table(rng))},
    };
}

}  // namespace logsurf::testing
