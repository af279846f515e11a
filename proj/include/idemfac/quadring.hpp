#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "error.hpp"
#include "integer.hpp"

namespace idemfac {

/// The maximal order of Q(√D) for a square-free D ∉ {0, 1}.
///
/// For D ≡ 1 (mod 4) the order contains the half-integers (a + b√D)/2 with
/// a ≡ b (mod 2); otherwise it is Z[√D] itself.
class RingContext {
public:
    static RingContext make(const Integer& D)
    {
        if (D == 0 || D == 1) throw error(errc::degenerate_d, "D must not be 0 or 1 (got " + to_string(D) + ")");
        if (!is_square_free(D)) throw error(errc::not_square_free, "D = " + to_string(D) + " is divisible by a prime square");
        return RingContext(D);
    }

    const Integer& D() const noexcept { return D_; }
    int d_mod4() const noexcept { return d_mod4_; }
    bool half_integers() const noexcept { return d_mod4_ == 1; }
    bool real() const noexcept { return D_ > 0; }

    /// Human-readable description of the integral basis.
    std::string basis() const
    {
        std::string r = "√" + to_string(D_);
        if (half_integers()) return "(a+b" + r + ")/2, a≡b mod 2";
        return "a+b" + r;
    }

    friend bool operator==(const RingContext& a, const RingContext& b) { return a.D_ == b.D_; }

private:
    explicit RingContext(const Integer& D) : D_(D), d_mod4_(static_cast<int>(floor_mod(D, 4))) {}

    Integer D_;
    int d_mod4_;
};

inline RingContext make_context(const Integer& D) { return RingContext::make(D); }

namespace detail {

inline void require_same(const RingContext& a, const RingContext& b)
{
    if (!(a == b)) throw error(errc::context_mismatch, "operands live in Z[√" + to_string(a.D()) + "] and Z[√" + to_string(b.D()) + "]");
}

inline std::string format_coords(const std::string& x, const std::string& y, const Integer& D, bool x_zero, bool y_zero)
{
    std::string root = "√" + to_string(D);
    if (y_zero) return x;
    std::string ypart;
    bool neg = !y.empty() && y[0] == '-';
    std::string mag = neg ? y.substr(1) : y;
    ypart = (mag == "1" ? "" : mag) + root;
    if (x_zero) return (neg ? "-" : "") + ypart;
    return x + (neg ? "-" : "+") + ypart;
}

} // namespace detail

class QuadRational;

/// An element (x + y√D)/den of the maximal order, den ∈ {1, 2}.
///
/// Canonical form: den = 2 only for D ≡ 1 (mod 4) and then x, y are both odd.
class QuadInt {
public:
    static QuadInt make(const RingContext& ctx, Integer x, Integer y, int den = 1)
    {
        if (den != 1 && den != 2) throw error(errc::not_in_ring, "denominator must be 1 or 2");
        if (den == 2) {
            bool xo = (x % 2 != 0), yo = (y % 2 != 0);
            if (!xo && !yo) return QuadInt(ctx, x / 2, y / 2, 1);
            if (!ctx.half_integers())
                throw error(errc::not_in_ring, "half-integers require D ≡ 1 (mod 4), D = " + to_string(ctx.D()));
            if (xo != yo) throw error(errc::not_in_ring, "half-integer coordinates must have equal parity");
        }
        return QuadInt(ctx, std::move(x), std::move(y), den);
    }

    static QuadInt from_integer(const RingContext& ctx, Integer n) { return QuadInt(ctx, std::move(n), 0, 1); }

    const RingContext& context() const noexcept { return ctx_; }
    const Integer& x() const noexcept { return x_; }
    const Integer& y() const noexcept { return y_; }
    int den() const noexcept { return den_; }

    bool is_zero() const { return x_ == 0 && y_ == 0; }
    bool is_rational_integer() const { return y_ == 0; }

    QuadInt conjugate() const { return QuadInt(ctx_, x_, -y_, den_); }
    Integer trace() const { return 2 * x_ / den_; }
    Integer norm() const { return (x_ * x_ - ctx_.D() * y_ * y_) / (den_ * den_); }
    bool is_unit() const { return abs(norm()) == 1; }

    QuadRational to_rational() const;

    friend QuadInt operator+(const QuadInt& a, const QuadInt& b)
    {
        detail::require_same(a.ctx_, b.ctx_);
        if (a.den_ == b.den_) return normalized(a.ctx_, a.x_ + b.x_, a.y_ + b.y_, a.den_);
        Integer sa = 2 / a.den_, sb = 2 / b.den_;
        return normalized(a.ctx_, a.x_ * sa + b.x_ * sb, a.y_ * sa + b.y_ * sb, 2);
    }
    friend QuadInt operator-(const QuadInt& a) { return QuadInt(a.ctx_, -a.x_, -a.y_, a.den_); }
    friend QuadInt operator-(const QuadInt& a, const QuadInt& b) { return a + (-b); }
    friend QuadInt operator*(const QuadInt& a, const QuadInt& b)
    {
        detail::require_same(a.ctx_, b.ctx_);
        return normalized(a.ctx_, a.x_ * b.x_ + a.ctx_.D() * a.y_ * b.y_, a.x_ * b.y_ + a.y_ * b.x_, a.den_ * b.den_);
    }
    QuadInt& operator+=(const QuadInt& o) { return *this = *this + o; }
    QuadInt& operator-=(const QuadInt& o) { return *this = *this - o; }
    QuadInt& operator*=(const QuadInt& o) { return *this = *this * o; }

    friend bool operator==(const QuadInt& a, const QuadInt& b)
    {
        return a.ctx_ == b.ctx_ && a.x_ == b.x_ && a.y_ == b.y_ && a.den_ == b.den_;
    }

    std::string str() const
    {
        std::string body = detail::format_coords(x_.str(), y_.str(), ctx_.D(), x_ == 0, y_ == 0);
        if (den_ == 1) return body;
        return "(" + body + ")/2";
    }

    friend std::ostream& operator<<(std::ostream& os, const QuadInt& a) { return os << a.str(); }

private:
    QuadInt(const RingContext& ctx, Integer x, Integer y, int den)
        : ctx_(ctx), x_(std::move(x)), y_(std::move(y)), den_(den)
    {
    }

    // Results of ring operations; den may be 1, 2 or 4 before reduction.
    static QuadInt normalized(const RingContext& ctx, Integer x, Integer y, int den)
    {
        while (den > 1 && x % 2 == 0 && y % 2 == 0) {
            x /= 2;
            y /= 2;
            den /= 2;
        }
        if (den > 2) throw error(errc::not_in_ring, "ring operation left the order (internal)");
        return QuadInt(ctx, std::move(x), std::move(y), den);
    }

    RingContext ctx_;
    Integer x_;
    Integer y_;
    int den_;
};

inline QuadInt make_elem(const RingContext& ctx, Integer x, Integer y, int den = 1)
{
    return QuadInt::make(ctx, std::move(x), std::move(y), den);
}

/// x + y√D with exact rational x, y.
class QuadRational {
public:
    QuadRational(const RingContext& ctx, Rational x, Rational y) : ctx_(ctx), x_(std::move(x)), y_(std::move(y)) {}

    static QuadRational from_integer(const RingContext& ctx, const Integer& n) { return QuadRational(ctx, Rational(n), Rational(0)); }

    const RingContext& context() const noexcept { return ctx_; }
    const Rational& x() const noexcept { return x_; }
    const Rational& y() const noexcept { return y_; }

    bool is_zero() const { return x_ == 0 && y_ == 0; }
    QuadRational conjugate() const { return QuadRational(ctx_, x_, -y_); }
    Rational norm() const { return x_ * x_ - Rational(ctx_.D()) * y_ * y_; }
    Rational trace() const { return 2 * x_; }

    /// Ring-membership predicate shared by every integrality test: clears
    /// denominators and applies the parity rule of the maximal order.
    std::optional<QuadInt> to_quadint() const
    {
        Rational tx = 2 * x_, ty = 2 * y_;
        if (denominator(tx) != 1 || denominator(ty) != 1) return std::nullopt;
        Integer X = numerator(tx), Y = numerator(ty);
        bool xe = (X % 2 == 0), ye = (Y % 2 == 0);
        if (xe && ye) return QuadInt::make(ctx_, X / 2, Y / 2, 1);
        if (!ctx_.half_integers() || xe != ye) return std::nullopt;
        return QuadInt::make(ctx_, X, Y, 2);
    }
    bool is_integral() const { return to_quadint().has_value(); }

    friend QuadRational operator+(const QuadRational& a, const QuadRational& b)
    {
        detail::require_same(a.ctx_, b.ctx_);
        return QuadRational(a.ctx_, a.x_ + b.x_, a.y_ + b.y_);
    }
    friend QuadRational operator-(const QuadRational& a) { return QuadRational(a.ctx_, -a.x_, -a.y_); }
    friend QuadRational operator-(const QuadRational& a, const QuadRational& b) { return a + (-b); }
    friend QuadRational operator*(const QuadRational& a, const QuadRational& b)
    {
        detail::require_same(a.ctx_, b.ctx_);
        Rational D(a.ctx_.D());
        return QuadRational(a.ctx_, a.x_ * b.x_ + D * a.y_ * b.y_, a.x_ * b.y_ + a.y_ * b.x_);
    }
    friend QuadRational operator/(const QuadRational& a, const QuadRational& b)
    {
        Rational n = b.norm();
        if (n == 0) throw error(errc::not_divisible, "division by zero");
        QuadRational t = a * b.conjugate();
        return QuadRational(a.ctx_, t.x_ / n, t.y_ / n);
    }
    friend QuadRational operator/(const QuadRational& a, const Integer& n)
    {
        if (n == 0) throw error(errc::not_divisible, "division by zero");
        return QuadRational(a.ctx_, a.x_ / Rational(n), a.y_ / Rational(n));
    }

    friend bool operator==(const QuadRational& a, const QuadRational& b)
    {
        return a.ctx_ == b.ctx_ && a.x_ == b.x_ && a.y_ == b.y_;
    }

    std::string str() const
    {
        return detail::format_coords(x_.str(), y_.str(), ctx_.D(), x_ == 0, y_ == 0);
    }
    friend std::ostream& operator<<(std::ostream& os, const QuadRational& a) { return os << a.str(); }

private:
    RingContext ctx_;
    Rational x_;
    Rational y_;
};

inline QuadRational QuadInt::to_rational() const
{
    return QuadRational(ctx_, Rational(x_, den_), Rational(y_, den_));
}

inline QuadRational operator+(const QuadInt& a, const QuadRational& b) { return a.to_rational() + b; }
inline QuadRational operator+(const QuadRational& a, const QuadInt& b) { return a + b.to_rational(); }
inline QuadRational operator-(const QuadInt& a, const QuadRational& b) { return a.to_rational() - b; }
inline QuadRational operator-(const QuadRational& a, const QuadInt& b) { return a - b.to_rational(); }
inline QuadRational operator*(const QuadInt& a, const QuadRational& b) { return a.to_rational() * b; }
inline QuadRational operator*(const QuadRational& a, const QuadInt& b) { return a * b.to_rational(); }

/// True iff a/w lies in the ring. Requires w != 0.
inline bool divides(const QuadInt& w, const QuadInt& a)
{
    if (w.is_zero()) throw error(errc::not_divisible, "divisor is zero");
    return (a.to_rational() / w.to_rational()).is_integral();
}

inline QuadInt div_exact(const QuadInt& w, const QuadInt& a)
{
    if (w.is_zero()) throw error(errc::not_divisible, "divisor is zero");
    auto q = (a.to_rational() / w.to_rational()).to_quadint();
    if (!q) throw error(errc::not_divisible, w.str() + " does not divide " + a.str());
    return *q;
}

inline QuadInt pow(const QuadInt& a, unsigned e)
{
    QuadInt r = QuadInt::from_integer(a.context(), 1), b = a;
    while (e) {
        if (e & 1u) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

/// 2×2 matrix over QuadInt or QuadRational, row-major.
template <class T>
struct Mat2 {
    std::array<T, 4> e;

    Mat2(T a, T b, T c, T d) : e{std::move(a), std::move(b), std::move(c), std::move(d)} {}

    T& operator()(int i, int j) { return e[2 * i + j]; }
    const T& operator()(int i, int j) const { return e[2 * i + j]; }

    const RingContext& context() const { return e[0].context(); }

    friend bool operator==(const Mat2& a, const Mat2& b) { return a.e == b.e; }
};

template <class T>
Mat2<T> mat_mul(const Mat2<T>& a, const Mat2<T>& b)
{
    return Mat2<T>(a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
                   a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1));
}

template <class T>
Mat2<T> operator*(const Mat2<T>& a, const Mat2<T>& b)
{
    return mat_mul(a, b);
}

template <class T>
Mat2<T> mat_transpose(const Mat2<T>& m)
{
    return Mat2<T>(m(0, 0), m(1, 0), m(0, 1), m(1, 1));
}

template <class T>
T det(const Mat2<T>& m)
{
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

template <class T>
bool is_idempotent(const Mat2<T>& m)
{
    return mat_mul(m, m) == m;
}

inline Mat2<QuadInt> identity(const RingContext& ctx)
{
    auto one = QuadInt::from_integer(ctx, 1), zero = QuadInt::from_integer(ctx, 0);
    return Mat2<QuadInt>(one, zero, zero, one);
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Mat2<T>& m)
{
    return os << "[[" << m(0, 0) << ", " << m(0, 1) << "], [" << m(1, 0) << ", " << m(1, 1) << "]]";
}

} // namespace idemfac
