#ifndef CRHO_INTERVAL_HPP
#define CRHO_INTERVAL_HPP

// Closed rational intervals and complex boxes with outward dyadic rounding.

#include <algorithm>
#include <string>

#include "crho/rational.hpp"

namespace crho {

namespace detail {

/// floor(x * 2^bits) / 2^bits, or ceil when up is true.
inline Rational round_dyadic(const Rational& x, long bits, bool up) {
    if (x.is_integer()) return x;
    Integer n = x.num();
    mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    Integer q;
    if (up) mpz_cdiv_q(q.get_mpz_t(), n.get_mpz_t(), x.den().get_mpz_t());
    else mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), x.den().get_mpz_t());
    Integer d = 1;
    mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    return Rational(q, d);
}

}  // namespace detail

struct Interval {
    Rational lo, hi;

    Interval() = default;
    Interval(const Rational& x) : lo(x), hi(x) {}
    Interval(const Rational& l, const Rational& h) : lo(l), hi(h) {}

    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    bool contains_zero() const { return lo.sign() <= 0 && hi.sign() >= 0; }
    bool intersects(const Interval& o) const { return !(hi < o.lo || o.hi < lo); }
    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) / Rational(2); }
    Rational mag() const { return std::max(lo.abs(), hi.abs()); }

    /// Widens the endpoints outward to multiples of 2^-bits.
    Interval rounded(long bits) const { return {detail::round_dyadic(lo, bits, false), detail::round_dyadic(hi, bits, true)}; }

    friend Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
    friend Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
    friend Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }
    friend Interval operator*(const Interval& a, const Interval& b) {
        Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
        return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
    }
    /// Requires 0 outside b.
    friend Interval operator/(const Interval& a, const Interval& b) { return a * Interval(b.hi.inv(), b.lo.inv()); }
};

/// Axis-aligned box in the complex plane.
struct CBox {
    Interval re, im;

    CBox() = default;
    CBox(const Rational& x) : re(x), im(Rational(0)) {}
    CBox(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}

    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
    bool intersects(const CBox& o) const { return re.intersects(o.re) && im.intersects(o.im); }
    bool contains(const CBox& o) const { return re.lo <= o.re.lo && o.re.hi <= re.hi && im.lo <= o.im.lo && o.im.hi <= im.hi; }
    Rational width() const { return std::max(re.width(), im.width()); }
    CBox conj() const { return {re, -im}; }
    CBox widened(const Rational& r) const { return {{re.lo - r, re.hi + r}, {im.lo - r, im.hi + r}}; }
    CBox rounded(long bits) const { return {re.rounded(bits), im.rounded(bits)}; }

    /// Interval enclosure of |z|^2.
    Interval abs2() const {
        auto sq = [](const Interval& x) {
            Interval p = x * x;
            if (x.contains_zero()) p.lo = Rational(0);
            return p;
        };
        return sq(re) + sq(im);
    }

    friend CBox operator+(const CBox& a, const CBox& b) { return {a.re + b.re, a.im + b.im}; }
    friend CBox operator-(const CBox& a, const CBox& b) { return {a.re - b.re, a.im - b.im}; }
    friend CBox operator-(const CBox& a) { return {-a.re, -a.im}; }
    friend CBox operator*(const CBox& a, const CBox& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

    /// Enclosure of 1/z; requires 0 outside abs2().
    CBox inv() const {
        Interval n = abs2();
        return {re / n, (-im) / n};
    }

    std::string to_string() const {
        return "[" + re.lo.to_string() + ", " + re.hi.to_string() + "] + i[" + im.lo.to_string() + ", " + im.hi.to_string() + "]";
    }
};

/// Deterministic ordering: real part, then imaginary part, of the midpoint. The real
/// part is snapped to a 2^-32 grid so that a conjugate pair ties on it.
inline bool box_less(const CBox& a, const CBox& b) {
    const Rational half(Integer(1), Integer(1) << 33);
    Rational ar = detail::round_dyadic(a.re.mid() + half, 32, false), br = detail::round_dyadic(b.re.mid() + half, 32, false);
    if (ar != br) return ar < br;
    return a.im.mid() < b.im.mid();
}

}  // namespace crho

#endif  // CRHO_INTERVAL_HPP
