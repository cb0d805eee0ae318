#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "logsurf/functionals.hpp"
#include "logsurf/quadrature.hpp"

namespace logsurf {

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream tags). The same tags always give
/// the same stream regardless of worker count or scheduling.
Rng make_stream(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b = 0, std::uint64_t tag_c = 0);

/// Worker threads used for Monte Carlo fan-out. LOGSURF_WORKERS overrides the
/// hardware default; the value never affects results.
unsigned worker_count();

/// Runs body(i) for every i in [0, count) across worker threads. Callers write
/// into per-index slots and reduce in index order afterwards.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Uniformly distributed unit vector in R^d.
Eigen::VectorXd random_unit_vector(int d, Rng& rng);

/// Draws points from the measure: radius from g_m / J_m through an inverse
/// CDF table, direction uniform on the sphere.
class RadialSampler {
public:
    explicit RadialSampler(const MeasureProfile& profile, int table_cells = 4096);

    double sample_radius(Rng& rng) const;
    Eigen::VectorXd sample(Rng& rng) const;

    const quad::InverseCdfTable& table() const { return table_; }
    int dimension() const { return d_; }

private:
    int d_;
    quad::InverseCdfTable table_;
};

}  // namespace logsurf
