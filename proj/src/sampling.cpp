#include "logsurf/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace logsurf {

Rng make_stream(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b, std::uint64_t tag_c)
{
    const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(tag_a), hi(tag_a), lo(tag_b), hi(tag_b), lo(tag_c), hi(tag_c)};
    return Rng(seq);
}

unsigned worker_count()
{
    if (const char* env = std::getenv("LOGSURF_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body)
{
    const std::size_t workers = std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

Eigen::VectorXd random_unit_vector(int d, Rng& rng)
{
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(d);
    do {
        for (int i = 0; i < d; ++i) v[i] = normal(rng);
    } while (v.squaredNorm() == 0.0);
    return v.normalized();
}

RadialSampler::RadialSampler(const MeasureProfile& profile, int table_cells) : d_(profile.d)
{
    const RadialPotential& phi = profile.potential;
    const int m = profile.m;
    table_ = quad::InverseCdfTable([&phi, m](double t) { return log_radial_density(phi, m, t); },
                                   phi.support_lower(), phi.support_radius(), profile.t0, table_cells);
}

double RadialSampler::sample_radius(Rng& rng) const
{
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double r = table_.quantile(uniform(rng));
    // the support radius itself carries no mass
    return r < table_.upper() ? r : std::nextafter(table_.upper(), 0.0);
}

Eigen::VectorXd RadialSampler::sample(Rng& rng) const
{
    const double r = sample_radius(rng);
    return r * random_unit_vector(d_, rng);
}

}  // namespace logsurf
