#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace idemfac {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Least non-negative residue of a modulo m (m > 0).
inline Integer floor_mod(const Integer& a, const Integer& m)
{
    Integer r = a % m;
    if (r < 0) r += m;
    return r;
}

/// Floor division for m != 0.
inline Integer floor_div(const Integer& a, const Integer& m)
{
    Integer q = a / m;
    if ((a % m != 0) && ((a < 0) != (m < 0))) --q;
    return q;
}

inline Integer abs(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd(const Integer& a, const Integer& b)
{
    return boost::multiprecision::gcd(a, b);
}

inline Integer lcm(const Integer& a, const Integer& b)
{
    if (a == 0 || b == 0) return 0;
    return abs(a / gcd(a, b) * b);
}

/// floor(sqrt(n)) for n >= 0.
inline Integer isqrt(const Integer& n) { return boost::multiprecision::sqrt(n); }

inline std::optional<Integer> exact_sqrt(const Integer& n)
{
    if (n < 0) return std::nullopt;
    Integer r = isqrt(n);
    if (r * r != n) return std::nullopt;
    return r;
}

inline bool is_square(const Integer& n) { return exact_sqrt(n).has_value(); }

struct ExtGcd {
    Integer g; ///< gcd(a, b) >= 0
    Integer x;
    Integer y; ///< a*x + b*y == g
};

inline ExtGcd ext_gcd(const Integer& a, const Integer& b)
{
    Integer old_r = a, r = b;
    Integer old_s = 1, s = 0;
    Integer old_t = 0, t = 1;
    while (r != 0) {
        Integer q = old_r / r;
        Integer tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    return {old_r, old_s, old_t};
}

/// Inverse of a modulo m, if it exists.
inline std::optional<Integer> mod_inverse(const Integer& a, const Integer& m)
{
    auto e = ext_gcd(floor_mod(a, m), m);
    if (e.g != 1) return std::nullopt;
    return floor_mod(e.x, m);
}

inline bool is_prime(const Integer& n)
{
    if (n < 2) return false;
    return mpz_probab_prime_p(n.backend().data(), 40) > 0;
}

/// No prime square divides n. Trial division; intended for ring parameters.
inline bool is_square_free(const Integer& n)
{
    Integer m = abs(n);
    if (m == 0) return false;
    for (Integer q = 2; q * q <= m; ++q) {
        if (m % q == 0) {
            m /= q;
            if (m % q == 0) return false;
        }
    }
    return true;
}

/// Prime factorisation by trial division, as (prime, exponent) pairs.
inline std::vector<std::pair<Integer, unsigned>> factorize(const Integer& n)
{
    std::vector<std::pair<Integer, unsigned>> out;
    Integer m = abs(n);
    for (Integer q = 2; q * q <= m; ++q) {
        unsigned e = 0;
        while (m % q == 0) {
            m /= q;
            ++e;
        }
        if (e) out.emplace_back(q, e);
    }
    if (m > 1) out.emplace_back(m, 1u);
    return out;
}

inline bool fits_int64(const Integer& a)
{
    return a >= std::numeric_limits<std::int64_t>::min() &&
           a <= std::numeric_limits<std::int64_t>::max();
}

inline std::string to_string(const Integer& a) { return a.str(); }

inline Integer pow(const Integer& base, unsigned e)
{
    return boost::multiprecision::pow(base, e);
}

} // namespace idemfac
