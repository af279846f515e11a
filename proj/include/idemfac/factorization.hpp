#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "ideals.hpp"

namespace idemfac {

/// Shape of z: case 1 is D ≡ 1 (mod 4) with z = (z1 + z2√D)/2, case 2 is
/// D ≡ 1 (mod 4) with integer coordinates, case 3 is D ≡ 2, 3 (mod 4).
enum class CaseTag { case1 = 1, case2 = 2, case3 = 3 };

inline CaseTag case_of(const QuadInt& z)
{
    if (!z.context().half_integers()) return CaseTag::case3;
    return z.den() == 2 ? CaseTag::case1 : CaseTag::case2;
}

/// Denominator of the free coordinates: b = (b1 + b2√D)/δ.
inline int coord_den(CaseTag c) { return c == CaseTag::case3 ? 1 : 2; }

struct MatrixA {
    Integer p;
    QuadInt z;
    Integer k;
    Mat2<QuadInt> matrix;

    const RingContext& context() const { return z.context(); }
    CaseTag case_tag() const { return case_of(z); }
};

/// A(p, z) = [[p, z], [z̄, k]] with k = norm(z)/p.
inline MatrixA build_matrix(const Integer& p, const QuadInt& z)
{
    const RingContext& ctx = z.context();
    auto st = prime_status(p, ctx);
    if (!st.valid_setting) {
        std::string why = st.prime_in_ring ? " is prime (inert)" : " is reducible";
        throw error(errc::invalid_setting, to_string(p) + why + " in Z[√" + to_string(ctx.D()) + "]");
    }
    if (z.is_rational_integer()) throw error(errc::invalid_setting, "z = " + z.str() + " is a rational integer");
    if (z.is_unit()) throw error(errc::invalid_setting, "z = " + z.str() + " is a unit");
    QuadInt P = QuadInt::from_integer(ctx, p);
    if (divides(P, z)) throw error(errc::invalid_setting, to_string(p) + " divides z = " + z.str());
    Integer n = z.norm();
    if (n % p != 0)
        throw error(errc::norm_not_divisible, "p | norm(z) is required: " + to_string(p) + " does not divide norm(" + z.str() + ") = " + to_string(n));
    Integer k = n / p;
    return MatrixA{p, z, k, Mat2<QuadInt>(P, z, z.conjugate(), QuadInt::from_integer(ctx, k))};
}

// ---------------------------------------------------------------------------
// Five-relation check for a factor pair (a, b; c, 1-a)·(d, e; f, 1-d).

inline constexpr std::array<const char*, 5> relation_names = {
    "p = ad + bf", "z(1-a) = kb", "z̄a = pc", "zd = pe", "z̄(1-d) = kf"};

struct RelationCheck {
    std::array<bool, 5> holds{};

    bool ok() const
    {
        for (bool h : holds)
            if (!h) return false;
        return true;
    }
};

inline RelationCheck check_relations(const QuadInt& a, const QuadInt& b, const QuadInt& c, const QuadInt& d,
                                const QuadInt& e, const QuadInt& f, const MatrixA& t)
{
    const RingContext& ctx = t.context();
    QuadInt P = QuadInt::from_integer(ctx, t.p), K = QuadInt::from_integer(ctx, t.k), one = QuadInt::from_integer(ctx, 1);
    QuadInt zb = t.z.conjugate();
    RelationCheck r;
    r.holds[0] = (P == a * d + b * f);
    r.holds[1] = (t.z * (one - a) == K * b);
    r.holds[2] = (zb * a == P * c);
    r.holds[3] = (t.z * d == P * e);
    r.holds[4] = (zb * (one - d) == K * f);
    return r;
}

inline bool verify_relations(const QuadInt& a, const QuadInt& b, const QuadInt& c, const QuadInt& d,
                           const QuadInt& e, const QuadInt& f, const MatrixA& t)
{
    return check_relations(a, b, c, d, e, f, t).ok();
}

// ---------------------------------------------------------------------------
// Parametrisation of the factors by the free coordinates of b (resp. f).

struct Coords {
    Integer c1;
    Integer c2;
};

/// (c1 + c2√D)/δ as an exact field element.
inline QuadRational element_from_coords(const RingContext& ctx, CaseTag tag, const Coords& v)
{
    return QuadRational(ctx, Rational(v.c1, coord_den(tag)), Rational(v.c2, coord_den(tag)));
}

struct ACPair {
    QuadRational a;
    QuadRational c;
};

/// a and c forced by b through z(1-a) = kb and z̄a = pc:
/// a = 1 - b·z̄/p, c = z̄·a/p.
inline ACPair params_ac(const Coords& b, const MatrixA& t)
{
    const RingContext& ctx = t.context();
    QuadRational bq = element_from_coords(ctx, t.case_tag(), b);
    QuadRational one = QuadRational::from_integer(ctx, 1);
    QuadRational zb = t.z.conjugate().to_rational();
    QuadRational a = one - bq * zb / t.p;
    return {a, zb * a / t.p};
}

struct DEPair {
    QuadRational d;
    QuadRational e;
};

/// d and e forced by f through z̄(1-d) = kf and zd = pe:
/// d = 1 - f·z/p, e = z·d/p.
inline DEPair params_de(const Coords& f, const MatrixA& t)
{
    const RingContext& ctx = t.context();
    QuadRational fq = element_from_coords(ctx, t.case_tag(), f);
    QuadRational one = QuadRational::from_integer(ctx, 1);
    QuadRational z = t.z.to_rational();
    QuadRational d = one - fq * z / t.p;
    return {d, z * d / t.p};
}

/// ad + bf - p with a from params_ac(b) and d from params_de(f).
inline QuadRational pairing_residual(const Coords& b, const Coords& f, const MatrixA& t)
{
    const RingContext& ctx = t.context();
    auto ac = params_ac(b, t);
    auto de = params_de(f, t);
    QuadRational bq = element_from_coords(ctx, t.case_tag(), b);
    QuadRational fq = element_from_coords(ctx, t.case_tag(), f);
    return ac.a * de.d + bq * fq - QuadRational::from_integer(ctx, t.p);
}

// ---------------------------------------------------------------------------
// The conjugate-pair criterion as a binary quadratic in (b1, b2).

/// a·x² + b·xy + c·y² + d·x + e·y + f.
struct BinaryQuadratic {
    Integer a, b, c, d, e, f;

    Integer operator()(const Integer& x, const Integer& y) const
    {
        return a * x * x + b * x * y + c * y * y + d * x + e * y + f;
    }

    friend bool operator==(const BinaryQuadratic&, const BinaryQuadratic&) = default;
};

/// (p+k)·norm(b) - trace(b·z̄) + p - p² = 0, cleared of the denominators of
/// b = (b1 + b2√D)/δ and z, then divided by the content (leading sign kept).
inline BinaryQuadratic conjecture_equation(const MatrixA& t)
{
    const Integer& D = t.context().D();
    const Integer db = coord_den(t.case_tag());
    const Integer dz = t.z.den();
    const Integer s = t.p + t.k;
    // δb²·[(p+k)(b1² - Db2²)/δb² - 2(b1z1 - Db2z2)/(δb·δz) + p - p²]
    const Integer lam = 2 * db / dz;
    BinaryQuadratic q{s, 0, -s * D, -lam * t.z.x(), lam * D * t.z.y(), db * db * (t.p - t.p * t.p)};
    Integer g = gcd(gcd(gcd(q.a, q.c), gcd(q.d, q.e)), q.f);
    if (g > 1) {
        q.a /= g;
        q.c /= g;
        q.d /= g;
        q.e /= g;
        q.f /= g;
    }
    return q;
}

// ---------------------------------------------------------------------------
// Certificates.

enum class Method { norm_minus_p2, pell_decision, corp2, general_search, unit_transfer, transpose, external };

inline const char* method_name(Method m)
{
    switch (m) {
    case Method::norm_minus_p2: return "norm_minus_p2";
    case Method::pell_decision: return "pell_decision";
    case Method::corp2: return "corp2";
    case Method::general_search: return "general_search";
    case Method::unit_transfer: return "unit_transfer";
    case Method::transpose: return "transpose";
    case Method::external: return "external";
    }
    return "external";
}

inline Method method_from_name(const std::string& s)
{
    for (Method m : {Method::norm_minus_p2, Method::pell_decision, Method::corp2, Method::general_search,
                     Method::unit_transfer, Method::transpose, Method::external})
        if (s == method_name(m)) return m;
    throw error(errc::malformed_input, "unknown method '" + s + "'");
}

struct Certificate {
    MatrixA target;
    Mat2<QuadInt> B;
    Mat2<QuadInt> C;
    Method method = Method::external;
    std::map<std::string, Integer> params;
};

struct CertificateCheck {
    bool B_shape = false; ///< B = (a, b; c, 1-a)
    bool C_shape = false;
    bool B_idempotent = false;
    bool C_idempotent = false;
    bool product = false; ///< B·C = A(p, z)
    bool conjecture_form = false; ///< C = (ā, c̄; b̄, 1-ā)
    RelationCheck relations;

    bool ok() const { return B_shape && C_shape && B_idempotent && C_idempotent && product && relations.ok(); }
};

inline bool is_conjecture_form(const Mat2<QuadInt>& B, const Mat2<QuadInt>& C)
{
    return C(0, 0) == B(0, 0).conjugate() && C(0, 1) == B(1, 0).conjugate() && C(1, 0) == B(0, 1).conjugate() &&
           C(1, 1) == B(1, 1).conjugate();
}

inline CertificateCheck check_certificate(const Certificate& cert)
{
    const RingContext& ctx = cert.target.context();
    QuadInt one = QuadInt::from_integer(ctx, 1);
    CertificateCheck r;
    r.B_shape = cert.B(1, 1) == one - cert.B(0, 0);
    r.C_shape = cert.C(1, 1) == one - cert.C(0, 0);
    r.B_idempotent = is_idempotent(cert.B);
    r.C_idempotent = is_idempotent(cert.C);
    r.product = cert.B * cert.C == cert.target.matrix;
    r.conjecture_form = is_conjecture_form(cert.B, cert.C);
    r.relations = check_relations(cert.B(0, 0), cert.B(0, 1), cert.B(1, 0), cert.C(0, 0), cert.C(0, 1), cert.C(1, 0), cert.target);
    return r;
}

inline bool verify(const Certificate& cert) { return check_certificate(cert).ok(); }

/// Conjecture-form certificate (a, b; c, 1-a)·(ā, c̄; b̄, 1-ā).
inline Certificate conjecture_certificate(const MatrixA& t, const QuadInt& a, const QuadInt& b, const QuadInt& c,
                                          Method method, std::map<std::string, Integer> params = {})
{
    QuadInt one = QuadInt::from_integer(t.context(), 1);
    Mat2<QuadInt> B(a, b, c, one - a);
    Mat2<QuadInt> C(a.conjugate(), c.conjugate(), b.conjugate(), one - a.conjugate());
    return Certificate{t, B, C, method, std::move(params)};
}

/// Conjecture-form certificate from the free coordinates of b, if a and c
/// come out integral.
inline std::optional<Certificate> certificate_from_b(const MatrixA& t, const Coords& b, Method method,
                                                     std::map<std::string, Integer> params = {})
{
    auto bi = element_from_coords(t.context(), t.case_tag(), b).to_quadint();
    if (!bi) return std::nullopt;
    auto ac = params_ac(b, t);
    auto a = ac.a.to_quadint();
    auto c = ac.c.to_quadint();
    if (!a || !c) return std::nullopt;
    params["b1"] = b.c1;
    params["b2"] = b.c2;
    return conjecture_certificate(t, *a, *bi, *c, method, std::move(params));
}

/// Explicit factorisation when norm(z) = -p², one for every integer m.
/// b solves z1·b1 - D·z2·b2 = T (T depends on the case) through the extended
/// gcd of (z1, -z2·D); m moves along the solution line.
inline Certificate construct_norm_minus_p2(const MatrixA& t, const Integer& m)
{
    const Integer& p = t.p;
    if (t.z.norm() != -p * p)
        throw error(errc::norm_mismatch, "norm(" + t.z.str() + ") = " + to_string(t.z.norm()) + ", expected " + to_string(-p * p));
    if (p == 2) throw error(errc::odd_prime_required, "the construction needs an odd prime p");
    const Integer& D = t.context().D();
    const Integer& z1 = t.z.x();
    const Integer& z2 = t.z.y();
    Integer T;
    switch (t.case_tag()) {
    case CaseTag::case3: T = p * (1 - p) / 2; break;
    case CaseTag::case2: T = p - p * p; break;
    case CaseTag::case1: T = 2 * (p - p * p); break;
    }
    ExtGcd eg = ext_gcd(z1, -z2 * D);
    if (T % eg.g != 0)
        throw error(errc::invalid_setting, "gcd(z1, z2·D) = " + to_string(eg.g) + " does not divide " + to_string(T));
    Integer q = T / eg.g;
    Coords b{eg.x * q - z2 * D / eg.g * m, eg.y * q - z1 / eg.g * m};
    auto cert = certificate_from_b(t, b, Method::norm_minus_p2, {{"m", m}, {"x", eg.x}, {"y", eg.y}});
    if (!cert) throw error(errc::not_in_ring, "construction produced a non-integral factor for m = " + to_string(m));
    return *cert;
}

/// For a unit u of norm +1, diag(1, ū)·A(p, z)·diag(1, u) = A(p, z·u); the
/// same conjugation carries the factors over:
/// (a, b·u; c·ū, 1-a) and (ā, c̄·u; b̄·ū, 1-ā).
inline Certificate transfer_by_unit(const Certificate& cert, const QuadInt& u)
{
    if (!u.is_unit()) throw error(errc::not_a_unit, u.str() + " is not a unit");
    if (u.norm() != 1)
        throw error(errc::not_a_unit, u.str() + " has norm -1; the transfer needs norm +1 (use its square)");
    QuadInt ub = u.conjugate();
    auto conj = [&](const Mat2<QuadInt>& M) { return Mat2<QuadInt>(M(0, 0), M(0, 1) * u, M(1, 0) * ub, M(1, 1)); };
    Certificate out{build_matrix(cert.target.p, cert.target.z * u), conj(cert.B), conj(cert.C), Method::unit_transfer, cert.params};
    out.params["unit_x"] = u.x();
    out.params["unit_y"] = u.y();
    out.params["unit_den"] = u.den();
    return out;
}

/// A(p, z̄) = A(p, z)ᵀ = Cᵀ·Bᵀ.
inline Certificate transpose_cert(const Certificate& cert)
{
    return Certificate{build_matrix(cert.target.p, cert.target.z.conjugate()), mat_transpose(cert.C), mat_transpose(cert.B),
                       Method::transpose, cert.params};
}

} // namespace idemfac
