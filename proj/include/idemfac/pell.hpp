#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "quadring.hpp"

namespace idemfac {

/// Simple continued fraction of √D: [a0; period...] with the minimal period.
struct CFExpansion {
    Integer a0;
    std::vector<Integer> period;
};

namespace detail {

struct PQaResult {
    Integer G;                     ///< Q0*A - P0*B at the last index of the first period
    Integer B;
    std::vector<Integer> partials; ///< a_0 .. a_l
};

// Continued fraction of (P0 + √D)/Q0 up to the end of its first period.
// Requires D > 0 non-square, Q0 > 0, Q0 | D - P0², and that the quotient
// with denominator Q0 recurs (true for (0, 1) and, when D ≡ 1 mod 4, (1, 2)).
inline PQaResult pqa_first_period(const Integer& P0, const Integer& Q0, const Integer& D)
{
    const Integer root = isqrt(D);
    Integer P = P0, Q = Q0;
    Integer A2 = 0, A1 = 1, B2 = 1, B1 = 0, G2 = -P0, G1 = Q0;
    PQaResult out;
    for (;;) {
        Integer a = (P + root) / Q; // Q > 0 throughout
        out.partials.push_back(a);
        Integer A = a * A1 + A2, B = a * B1 + B2, G = a * G1 + G2;
        A2 = A1; A1 = A;
        B2 = B1; B1 = B;
        G2 = G1; G1 = G;
        P = a * Q - P;
        Q = (D - P * P) / Q;
        if (Q == Q0) {
            out.G = G;
            out.B = B;
            return out;
        }
    }
}

} // namespace detail

inline CFExpansion sqrt_continued_fraction(const Integer& D)
{
    if (D <= 1 || is_square(D)) throw error(errc::malformed_input, "continued fraction of √D needs D > 1 non-square");
    auto r = detail::pqa_first_period(0, 1, D);
    CFExpansion cf;
    cf.a0 = r.partials.front();
    // The period of √D is a_1..a_l; the walk stopped at a_{l-1}, and a_l = 2 a_0.
    cf.period.assign(r.partials.begin() + 1, r.partials.end());
    cf.period.push_back(2 * cf.a0);
    return cf;
}

/// Fundamental unit ε > 1 of the maximal order of a real quadratic field.
/// Half-integral when D ≡ 1 (mod 4) requires it; its norm may be -1.
inline QuadInt fundamental_unit(const RingContext& ctx)
{
    if (!ctx.real()) throw error(errc::imaginary_ring, "unit group of Z[√" + to_string(ctx.D()) + "] is finite; use torsion_generator");
    if (ctx.half_integers()) {
        auto r = detail::pqa_first_period(1, 2, ctx.D());
        return QuadInt::make(ctx, r.G, r.B, 2);
    }
    auto r = detail::pqa_first_period(0, 1, ctx.D());
    return QuadInt::make(ctx, r.G, r.B, 1);
}

/// Generator of the (finite) unit group of an imaginary quadratic order,
/// together with its multiplicative order.
struct TorsionUnit {
    QuadInt unit;
    int order;
};

inline TorsionUnit torsion_generator(const RingContext& ctx)
{
    if (ctx.real()) throw error(errc::malformed_input, "torsion_generator needs D < 0");
    if (ctx.D() == -1) return {QuadInt::make(ctx, 0, 1), 4};
    if (ctx.D() == -3) return {QuadInt::make(ctx, 1, 1, 2), 6};
    return {QuadInt::make(ctx, -1, 0), 2};
}

/// Least unit > 1 with integer coordinates and norm +1, i.e. the
/// fundamental solution of x² - Dy² = 1. This is the unit whose powers act
/// on the solutions of x² - Dy² = N.
inline QuadInt pell_unit(const RingContext& ctx)
{
    if (!ctx.real()) throw error(errc::imaginary_ring, "no infinite-order unit for D < 0");
    auto r = detail::pqa_first_period(0, 1, ctx.D());
    QuadInt eps = QuadInt::make(ctx, r.G, r.B, 1);
    return eps.norm() == 1 ? eps : eps * eps;
}

/// Unit generating solution classes of x² - Dy² = N inside the lattice Z[√D]
/// (together with -1).
inline QuadInt class_unit(const RingContext& ctx)
{
    if (ctx.real()) return pell_unit(ctx);
    if (ctx.D() == -1) return QuadInt::make(ctx, 0, 1);
    return QuadInt::make(ctx, -1, 0);
}

struct PellSolution {
    Integer x;
    Integer y;

    friend bool operator==(const PellSolution&, const PellSolution&) = default;
};

/// One class of solutions of x² - Dy² = N: all ±rep·unit^n.
struct PellSolutionClass {
    Integer D;
    Integer N;
    PellSolution rep;
    QuadInt unit;
};

/// (s/t) lies in Z[√D] (hence is a norm-one unit) iff the two cross terms
/// of s·conj(t) are divisible by N.
inline bool same_class(const Integer& D, const Integer& N, const PellSolution& s, const PellSolution& t)
{
    Integer n = abs(N);
    return (s.x * t.x - D * s.y * t.y) % n == 0 && (s.y * t.x - s.x * t.y) % n == 0;
}

/// Every class of solutions of x² - Dy² = N, N != 0. An empty result
/// certifies that the equation has no integer solution.
///
/// For D > 0 each class has a member with 0 <= y <= y1·sqrt(|N| / (2(x1 ± 1)))
/// where x1 + y1√D is the fundamental solution of the Pell equation, so a
/// scan below that bound is complete. For D < 0 the solution set is finite.
///
/// Representatives are the class member with the least positive y (ties:
/// larger x); a class without such a member (D < -1, N a square) keeps (√N, 0).
/// Conjugate classes are reported separately.
inline std::vector<PellSolutionClass> solve_norm_equation(const Integer& D, const Integer& N)
{
    RingContext ctx = make_context(D);
    if (N == 0) throw error(errc::malformed_input, "N must be nonzero");
    QuadInt unit = class_unit(ctx);

    std::vector<PellSolution> found;
    auto try_y = [&](const Integer& y) {
        Integer x2 = N + D * y * y;
        if (auto r = exact_sqrt(x2)) {
            found.push_back({*r, y});
            if (*r != 0) found.push_back({-*r, y});
        }
    };
    if (D < 0) {
        if (N > 0)
            for (Integer y = 0; -D * y * y <= N; ++y) try_y(y);
    } else {
        const Integer& x1 = unit.x();
        const Integer& y1 = unit.y();
        Integer ymax = N > 0 ? isqrt(y1 * y1 * N / (2 * (x1 + 1))) : isqrt(y1 * y1 * (-N) / (2 * (x1 - 1)));
        for (Integer y = 0; y <= ymax; ++y) try_y(y);
    }

    std::vector<std::vector<PellSolution>> groups;
    for (const auto& s : found) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return same_class(D, N, g.front(), s); });
        if (it == groups.end())
            groups.push_back({s});
        else
            it->push_back(s);
    }

    std::vector<PellSolutionClass> out;
    for (const auto& g : groups) {
        std::optional<PellSolution> best;
        for (const auto& s : g) {
            if (s.y <= 0) continue;
            if (!best || s.y < best->y || (s.y == best->y && s.x > best->x)) best = s;
        }
        if (!best) {
            Integer r = abs(g.front().x);
            if (D > 0)
                best = PellSolution{r * unit.x(), r * unit.y()};
            else if (D == -1)
                best = PellSolution{0, r};
            else
                best = PellSolution{r, 0};
        }
        out.push_back({D, N, *best, unit});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.rep.y != b.rep.y ? a.rep.y < b.rep.y : a.rep.x > b.rep.x;
    });
    return out;
}

/// Coordinates of (x + y√D)·u^k. u must be a unit; the product must stay in
/// the lattice Z[√D] (use a power of a half-integral unit otherwise).
inline PellSolution unit_action(const PellSolution& s, const QuadInt& u, long k)
{
    if (!u.is_unit()) throw error(errc::not_a_unit, u.str() + " is not a unit");
    const RingContext& ctx = u.context();
    QuadInt step = k >= 0 ? u : QuadInt::from_integer(ctx, u.norm()) * u.conjugate();
    QuadInt r = QuadInt::make(ctx, s.x, s.y) * pow(step, static_cast<unsigned>(k >= 0 ? k : -k));
    if (r.den() != 1) throw error(errc::not_in_ring, "unit action left the lattice Z[√D]; use a power of the unit lying in Z[√D]");
    return {r.x(), r.y()};
}

namespace detail {

using i128 = __int128;

inline i128 mod128(i128 a, i128 m)
{
    a %= m;
    return a < 0 ? a + m : a;
}

inline i128 to_i128(const Integer& a)
{
    // Caller guarantees |a| < 2^62.
    return static_cast<i128>(a.convert_to<long long>());
}

inline Integer to_integer(i128 v) { return Integer(static_cast<long long>(v)); }
inline const Integer& to_integer(const Integer& v) { return v; }

} // namespace detail

/// Residues visited by the class ±rep·unit^n modulo m, n >= 0. The unit is
/// invertible mod m (norm +1), so the walk is a pure cycle of length <= m².
/// visit(x, y, n, negated) receives least non-negative residues (as __int128
/// when m < 2^62, Integer otherwise) and returns true to stop; the result is (steps, negated) of the hit.
struct OrbitHit {
    std::size_t steps;
    bool negated;
};

struct OrbitWalk {
    std::optional<OrbitHit> hit;
    std::size_t cycle_length = 0; ///< length of the ± orbit of rep mod m under unit
};

template <class Visit>
OrbitWalk walk_class_orbit(const PellSolutionClass& cls, const Integer& m, Visit&& visit)
{
    if (m < 1) throw error(errc::malformed_input, "modulus must be >= 1");
    const QuadInt& u = cls.unit;
    OrbitWalk out;
    const Integer limit = Integer(1) << 62;
    if (m < limit && abs(cls.D) < limit) {
        using detail::i128;
        const i128 M = detail::to_i128(m);
        const i128 Dm = detail::mod128(detail::to_i128(cls.D), M);
        const i128 ux = detail::to_i128(floor_mod(u.x(), m)), uy = detail::to_i128(floor_mod(u.y(), m));
        const i128 x0 = detail::to_i128(floor_mod(cls.rep.x, m)), y0 = detail::to_i128(floor_mod(cls.rep.y, m));
        i128 x = x0, y = y0;
        for (std::size_t n = 0;; ++n) {
            if (visit(x, y, n, false)) {
                out.hit = OrbitHit{n, false};
                break;
            }
            i128 nx = detail::mod128(-x, M), ny = detail::mod128(-y, M);
            if (visit(nx, ny, n, true)) {
                out.hit = OrbitHit{n, true};
                break;
            }
            i128 dy = (Dm * y) % M;
            i128 xn = (x * ux % M + dy * uy % M) % M;
            i128 yn = (x * uy % M + y * ux % M) % M;
            x = xn;
            y = yn;
            ++out.cycle_length;
            if (x == x0 && y == y0) break;
        }
        return out;
    }
    Integer x = floor_mod(cls.rep.x, m), y = floor_mod(cls.rep.y, m);
    const Integer x0 = x, y0 = y;
    const Integer ux = floor_mod(u.x(), m), uy = floor_mod(u.y(), m), Dm = floor_mod(cls.D, m);
    for (std::size_t n = 0;; ++n) {
        if (visit(x, y, n, false)) {
            out.hit = OrbitHit{n, false};
            break;
        }
        if (visit(floor_mod(-x, m), floor_mod(-y, m), n, true)) {
            out.hit = OrbitHit{n, true};
            break;
        }
        Integer xn = floor_mod(x * ux + Dm * y * uy, m);
        Integer yn = floor_mod(x * uy + y * ux, m);
        x = std::move(xn);
        y = std::move(yn);
        ++out.cycle_length;
        if (x == x0 && y == y0) break;
    }
    return out;
}

/// The exact class member ±rep·unit^steps named by an orbit hit.
inline PellSolution class_member(const PellSolutionClass& cls, const OrbitHit& hit)
{
    PellSolution s = unit_action(cls.rep, cls.unit, static_cast<long>(hit.steps));
    if (hit.negated) s = {-s.x, -s.y};
    return s;
}

inline std::set<std::pair<Integer, Integer>> enumerate_class_residues(const PellSolutionClass& cls, const Integer& m)
{
    std::set<std::pair<Integer, Integer>> out;
    walk_class_orbit(cls, m, [&](const auto& x, const auto& y, std::size_t, bool) {
        out.emplace(detail::to_integer(x), detail::to_integer(y));
        return false;
    });
    return out;
}

} // namespace idemfac
