#pragma once

#include <string>

#include "pell.hpp"

namespace idemfac {

/// Kronecker symbol (a/b). Returns 0 for a = b = 0 as well.
inline int kronecker(Integer a, Integer b)
{
    static constexpr int tab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};
    if (b == 0) return abs(a) == 1 ? 1 : 0;
    if (a % 2 == 0 && b % 2 == 0) return 0;
    unsigned v = 0;
    while (b % 2 == 0) {
        b /= 2;
        ++v;
    }
    int k = (v % 2 == 0) ? 1 : tab2[static_cast<int>(floor_mod(a, 8))];
    if (b < 0) {
        b = -b;
        if (a < 0) k = -k;
    }
    // b is odd and positive from here on
    for (;;) {
        if (a == 0) return b == 1 ? k : 0;
        v = 0;
        while (a % 2 == 0) {
            a /= 2;
            ++v;
        }
        if (v % 2 == 1) k *= tab2[static_cast<int>(floor_mod(b, 8))];
        if (floor_mod(a, 4) == 3 && floor_mod(b, 4) == 3) k = -k;
        Integer r = abs(a);
        a = floor_mod(b, r);
        b = r;
    }
}

enum class Splitting { inert, split, ramified };

inline const char* splitting_name(Splitting s)
{
    switch (s) {
    case Splitting::inert: return "inert";
    case Splitting::split: return "split";
    case Splitting::ramified: return "ramified";
    }
    return "?";
}

struct PrimeStatus {
    Integer p;
    Integer D;
    Splitting splitting;
    bool irreducible;
    bool prime_in_ring;
    bool valid_setting; ///< irreducible but not prime
};

/// Behaviour of a rational prime p in the maximal order of Q(√D).
inline PrimeStatus prime_status(const Integer& p, const RingContext& ctx)
{
    if (!is_prime(p)) throw error(errc::not_prime, to_string(p) + " is not a rational prime");
    const Integer& D = ctx.D();
    Splitting s;
    if (p == 2) {
        if (ctx.half_integers())
            s = floor_mod(D, 8) == 5 ? Splitting::inert : Splitting::split;
        else
            s = Splitting::ramified;
    } else if (D % p == 0) {
        s = Splitting::ramified;
    } else {
        s = kronecker(D, p) == 1 ? Splitting::split : Splitting::inert;
    }
    // An element of norm ±p exists iff p is a product of two non-units.
    // In the half-integer order (x + y√D)/2 has norm (x² - Dy²)/4.
    Integer scale = ctx.half_integers() ? 4 : 1;
    bool has_norm_p = !solve_norm_equation(D, scale * p).empty();
    if (!has_norm_p && D > 0) has_norm_p = !solve_norm_equation(D, -scale * p).empty();
    PrimeStatus st{p, D, s, !has_norm_p, s == Splitting::inert, false};
    st.valid_setting = st.irreducible && !st.prime_in_ring;
    return st;
}

/// z ∈ I_p(D), equivalently <p, z> is non-principal: z is a non-unit,
/// p ∤ z in the ring, and p | norm(z).
inline bool in_Ip(const QuadInt& z, const Integer& p)
{
    auto st = prime_status(p, z.context());
    if (!st.valid_setting)
        throw error(errc::invalid_setting, to_string(p) + " is not irreducible-but-not-prime in Z[√" + to_string(z.context().D()) + "]");
    if (z.is_unit()) return false;
    if (divides(QuadInt::from_integer(z.context(), p), z)) return false;
    return z.norm() % p == 0;
}

/// m ∈ S_z: m ∉ <p> and z·m ∈ <p>.
inline bool in_Sz(const QuadInt& m, const QuadInt& z, const Integer& p)
{
    if (!in_Ip(z, p)) throw error(errc::invalid_setting, z.str() + " is not in I_" + to_string(p));
    QuadInt P = QuadInt::from_integer(z.context(), p);
    return !divides(P, m) && divides(P, z * m);
}

} // namespace idemfac
