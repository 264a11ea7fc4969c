#ifndef ZONOPLAN_RNG_HPP_
#define ZONOPLAN_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

#include "types.hpp"

namespace zonoplan
{

/// Deterministic random stream backed by std::mt19937_64.
/// Identical seeds yield identical sequences; the uniform mapping is computed
/// directly from the raw 64-bit output so results do not depend on the
/// standard library's distribution implementations.
class RngStream
{
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform draw from [a, b]
    double uniform(double a, double b)
    {
        if (a > b)
        {
            throw InvalidInterval("rand_uniform: a > b.");
        }
        const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53; // [0,1)
        return a + (b - a) * u;
    }

    // Box-Muller; two uniform draws per sample
    double normal(double mu, double sigma)
    {
        const double u1 = uniform(0.0, 1.0);
        const double u2 = uniform(0.0, 1.0);
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        return mu + sigma * r * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 gen_;
};

inline double rand_uniform(RngStream& rng, double a, double b)
{
    return rng.uniform(a, b);
}

} // namespace zonoplan

#endif
