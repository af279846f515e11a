#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <idemfac/idemfac.hpp>

namespace support {

using idemfac::Integer;
using idemfac::QuadInt;
using idemfac::RingContext;

inline std::mt19937_64& rng()
{
    static std::mt19937_64 g(20240611);
    return g;
}

inline long long uniform(long long lo, long long hi)
{
    return std::uniform_int_distribution<long long>(lo, hi)(rng());
}

/// Random element with coordinates in [-bound, bound]; half-integers appear
/// with probability 1/2 when the ring has them.
inline QuadInt random_elem(const RingContext& ctx, long long bound)
{
    if (ctx.half_integers() && uniform(0, 1) == 1) {
        long long x = 2 * uniform(-bound / 2, bound / 2) + 1, y = 2 * uniform(-bound / 2, bound / 2) + 1;
        return QuadInt::make(ctx, x, y, 2);
    }
    return QuadInt::make(ctx, uniform(-bound, bound), uniform(-bound, bound));
}

inline const std::vector<long long>& test_rings()
{
    static const std::vector<long long> Ds{-5, -3, -1, 2, 3, 5, 10, 13, 15};
    return Ds;
}

/// Every well-formed A(p, z) with D in Ds, prime p <= p_max and
/// |z1|, |z2| <= coord_max (both denominators where the ring allows).
inline std::vector<idemfac::MatrixA> small_targets(const std::vector<long long>& Ds, long long p_max, long long coord_max)
{
    std::vector<idemfac::MatrixA> out;
    for (long long D : Ds) {
        auto ctx = idemfac::make_context(D);
        for (long long p = 2; p <= p_max; ++p) {
            if (!idemfac::is_prime(p) || !idemfac::prime_status(p, ctx).valid_setting) continue;
            for (int den : {1, 2}) {
                if (den == 2 && !ctx.half_integers()) continue;
                for (long long x = -coord_max; x <= coord_max; ++x) {
                    for (long long y = -coord_max; y <= coord_max; ++y) {
                        if (den == 2 && (x % 2 == 0 || y % 2 == 0)) continue;
                        try {
                            out.push_back(idemfac::build_matrix(p, QuadInt::make(ctx, x, y, den)));
                        } catch (const idemfac::error&) {
                        }
                    }
                }
            }
        }
    }
    return out;
}

} // namespace support
