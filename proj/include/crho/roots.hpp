#ifndef CRHO_ROOTS_HPP
#define CRHO_ROOTS_HPP

// Certified isolation of the complex roots of a square-free rational polynomial.
//
// Roots are approximated by Aberth iteration in multiprecision floating point and
// then certified with Smith's inclusion theorem evaluated in exact rational
// arithmetic: the discs D(z_i, r_i) with r_i = n |p(z_i)| / (|lc| prod_{j!=i} |z_i - z_j|)
// cover all roots, and a connected component made of k discs holds k roots. Boxes
// circumscribing the discs that are pairwise disjoint therefore isolate one root each.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <tuple>
#include <string>
#include <vector>

#include "crho/errors.hpp"
#include "crho/interval.hpp"
#include "crho/poly.hpp"

namespace crho {

/// Refinement cap (precision rounds of +64 bits). Overridable through CRHO_REFINE_CAP.
inline int refine_cap() {
    static const int cap = [] {
        const char* s = std::getenv("CRHO_REFINE_CAP");
        if (s == nullptr) return 256;
        int v = std::atoi(s);
        return v > 0 ? v : 256;
    }();
    return cap;
}

namespace detail {

struct MpfC {
    mpf_class re, im;
};

inline MpfC mpf_mul(const MpfC& a, const MpfC& b, mp_bitcnt_t p) {
    MpfC r{mpf_class(0, p), mpf_class(0, p)};
    r.re = a.re * b.re - a.im * b.im;
    r.im = a.re * b.im + a.im * b.re;
    return r;
}

inline MpfC mpf_div(const MpfC& a, const MpfC& b, mp_bitcnt_t p) {
    mpf_class d(b.re * b.re + b.im * b.im, p);
    MpfC r{mpf_class(0, p), mpf_class(0, p)};
    r.re = (a.re * b.re + a.im * b.im) / d;
    r.im = (a.im * b.re - a.re * b.im) / d;
    return r;
}

inline mpf_class mpf_abs(const MpfC& a, mp_bitcnt_t p) {
    mpf_class s(a.re * a.re + a.im * a.im, p);
    return sqrt(s);
}

/// Exact complex rational.
struct QC {
    Rational re, im;
    friend QC operator*(const QC& a, const QC& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
    friend QC operator+(const QC& a, const QC& b) { return {a.re + b.re, a.im + b.im}; }
    friend QC operator-(const QC& a, const QC& b) { return {a.re - b.re, a.im - b.im}; }
    Rational abs2() const { return re * re + im * im; }
};

inline Rational mpf_to_dyadic(const mpf_class& x, long bits) {
    mpq_class q(x);
    return round_dyadic(Rational(q), bits, false);
}

/// Smallest dyadic s >= sqrt(x), x >= 0.
inline Rational sqrt_upper(const Rational& x, long bits) {
    if (x.is_zero()) return Rational(0);
    mpf_class f(x.raw(), static_cast<mp_bitcnt_t>(bits + 64));
    f = sqrt(f);
    Rational s = round_dyadic(Rational(mpq_class(f)), bits, true);
    Rational step = round_dyadic(s * Rational(1, 1 << 20), bits, true);
    if (step.is_zero()) step = Rational(1, 1 << 20);
    while (s * s < x) s += step;
    return s;
}

/// Aberth iteration at the given working precision; returns approximations.
inline std::vector<MpfC> aberth(const UniPoly& p, mp_bitcnt_t prec) {
    const int n = p.degree();
    std::vector<mpf_class> c;
    for (const auto& r : p.coeffs()) c.emplace_back(r.raw(), prec);
    // Cauchy bound
    double bound = 1.0;
    for (int i = 0; i < n; ++i) bound = std::max(bound, 1.0 + std::fabs((p[i] / p.lc()).to_double()));
    bound = std::min(bound, 1e6);
    std::vector<MpfC> z(n);
    for (int k = 0; k < n; ++k) {
        double ang = 2.0 * M_PI * k / n + 0.4;
        double rad = 0.5 * bound * (1.0 + 0.05 * k / n);
        z[k] = {mpf_class(rad * std::cos(ang), prec), mpf_class(rad * std::sin(ang), prec)};
    }
    mpf_class tol(1, prec);
    mpf_div_2exp(tol.get_mpf_t(), tol.get_mpf_t(), prec > 16 ? prec - 12 : prec);
    const int max_iter = 200 + 4 * static_cast<int>(prec);
    for (int it = 0; it < max_iter; ++it) {
        bool done = true;
        for (int i = 0; i < n; ++i) {
            MpfC v{mpf_class(0, prec), mpf_class(0, prec)}, d{mpf_class(0, prec), mpf_class(0, prec)};
            for (int k = n; k >= 0; --k) {
                d = mpf_mul(d, z[i], prec);
                d.re += v.re;
                d.im += v.im;
                v = mpf_mul(v, z[i], prec);
                v.re += c[k];
            }
            if (sgn(d.re) == 0 && sgn(d.im) == 0) d.re = tol;
            MpfC w = mpf_div(v, d, prec);
            MpfC s{mpf_class(0, prec), mpf_class(0, prec)};
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                MpfC diff{z[i].re - z[j].re, z[i].im - z[j].im};
                if (sgn(diff.re) == 0 && sgn(diff.im) == 0) diff.re = tol;
                MpfC one{mpf_class(1, prec), mpf_class(0, prec)};
                MpfC t = mpf_div(one, diff, prec);
                s.re += t.re;
                s.im += t.im;
            }
            MpfC ws = mpf_mul(w, s, prec);
            MpfC den{mpf_class(1 - ws.re, prec), mpf_class(-ws.im, prec)};
            MpfC corr = (sgn(den.re) == 0 && sgn(den.im) == 0) ? w : mpf_div(w, den, prec);
            z[i].re -= corr.re;
            z[i].im -= corr.im;
            mpf_class scale = mpf_abs(z[i], prec);
            if (scale < 1) scale = 1;
            if (mpf_abs(corr, prec) > tol * scale) done = false;
        }
        if (done) break;
    }
    return z;
}

/// One certification attempt at `bits` of precision. Empty on failure.
inline std::vector<CBox> certify(const UniPoly& p, long bits) {
    const int n = p.degree();
    auto approx = aberth(p, static_cast<mp_bitcnt_t>(bits + 32));
    std::vector<QC> z;
    for (const auto& a : approx) z.push_back({mpf_to_dyadic(a.re, bits), mpf_to_dyadic(a.im, bits)});
    std::vector<Rational> s(n);
    Rational lc2 = p.lc() * p.lc();
    for (int i = 0; i < n; ++i) {
        QC v{Rational(0), Rational(0)};
        for (int k = n; k >= 0; --k) v = v * z[i] + QC{p[k], Rational(0)};
        Rational prod(1);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            Rational d = (z[i] - z[j]).abs2();
            if (d.is_zero()) return {};
            prod *= d;
        }
        Rational r2 = Rational(static_cast<long>(n) * n) * v.abs2() / (lc2 * prod);
        s[i] = sqrt_upper(r2, bits);
    }
    std::vector<CBox> boxes;
    for (int i = 0; i < n; ++i)
        boxes.push_back({{z[i].re - s[i], z[i].re + s[i]}, {z[i].im - s[i], z[i].im + s[i]}});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (boxes[i].intersects(boxes[j])) return {};
    std::sort(boxes.begin(), boxes.end(), box_less);
    return boxes;
}

}  // namespace detail

struct Isolation {
    std::vector<CBox> boxes;
    long bits = 0;
};

/// Isolating boxes for the roots of a square-free p with every box narrower than
/// `max_width` (ignored when zero). Precision starts at `start_bits` and grows by 64
/// bits per round up to the refinement cap.
inline Isolation isolate_roots(const UniPoly& p, const Rational& max_width = Rational(0), long start_bits = 64) {
    if (p.is_zero()) throw Error(ErrorKind::DegenerateInput, "algebraic-numbers", "isolating the roots of zero");
    if (p.degree() == 0) return {{}, start_bits};
    if (p.degree() == 1) {
        Rational r = -p[0] / p[1];
        return {{CBox(r)}, start_bits};
    }
    long bits = std::max<long>(start_bits, 64);
    for (int round = 0; round < refine_cap(); ++round, bits += 64) {
        auto boxes = detail::certify(p, bits);
        if (boxes.empty()) continue;
        bool narrow = max_width.is_zero() ||
                      std::all_of(boxes.begin(), boxes.end(), [&](const CBox& b) { return b.width() < max_width; });
        if (narrow) return {boxes, bits};
    }
    throw Error(ErrorKind::PrecisionExhausted, "algebraic-numbers",
                "root isolation did not certify within the refinement cap (raise CRHO_REFINE_CAP)");
}

/// Re-isolates at higher precision and returns the unique new box meeting `old`.
inline std::pair<CBox, long> refine_root(const UniPoly& p, const CBox& old, long old_bits) {
    if (p.degree() == 1) return {CBox(-p[0] / p[1]), old_bits};
    long bits = old_bits + 64;
    for (int round = 0; round < refine_cap(); ++round, bits += 64) {
        auto iso = isolate_roots(p, Rational(0), bits);
        const CBox* hit = nullptr;
        int count = 0;
        for (const auto& b : iso.boxes)
            if (b.intersects(old)) {
                hit = &b;
                ++count;
            }
        if (count == 1 && hit->width() < old.width()) return {*hit, iso.bits};
        bits = iso.bits;
    }
    throw Error(ErrorKind::PrecisionExhausted, "algebraic-numbers", "root refinement exceeded the refinement cap");
}

/// Leading coefficient of p after clearing denominators and content. Every rational
/// root of p has a denominator dividing it.
inline Integer integer_leading(const UniPoly& p) {
    Integer den = 1, num = 0;
    for (const auto& c : p.coeffs()) {
        if (c.is_zero()) continue;
        den = lcm(den, c.den());
    }
    for (const auto& c : p.coeffs()) {
        if (c.is_zero()) continue;
        num = gcd(num, Integer(c.num() * (den / c.den())));
    }
    Integer l = p.lc().num() * (den / p.lc().den()) / num;
    return abs(l);
}

/// The rational root of p inside the isolating box, if any. The box is refined until
/// its width is below 1/(2 L^2), where L bounds root denominators; a rational root
/// is then a continued-fraction convergent of the box midpoint.
inline std::optional<Rational> rational_root_in(const UniPoly& p, CBox box, long bits) {
    if (p.degree() == 1) return -p[0] / p[1];
    Integer L = integer_leading(p);
    Rational need(Integer(1), Integer(2 * L * L));
    while (box.width() >= need) std::tie(box, bits) = refine_root(p, box, bits);
    if (!box.im.contains_zero()) return std::nullopt;
    Rational x = box.re.mid();
    // convergents h/k of x with k <= L
    Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    Rational rest = x;
    for (int guard = 0; guard < 4096; ++guard) {
        Integer a = rest.floor();
        Integer h2 = a * h1 + h0, k2 = a * k1 + k0;
        if (k2 > L) break;
        Rational c(h2, k2);
        if (box.re.contains(c) && p.eval(c).is_zero()) return c;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        Rational frac = rest - Rational(a);
        if (frac.is_zero()) break;
        rest = frac.inv();
    }
    return std::nullopt;
}

/// True when the root in `box` is certainly real: conj(box) meets no other box.
inline bool certified_real(const CBox& box, const std::vector<CBox>& all) {
    if (!box.im.contains_zero()) return false;
    CBox c = box.conj();
    for (const auto& b : all)
        if (!(b.re.lo == box.re.lo && b.re.hi == box.re.hi && b.im.lo == box.im.lo && b.im.hi == box.im.hi) &&
            b.intersects(c))
            return false;
    return true;
}

}  // namespace crho

#endif  // CRHO_ROOTS_HPP
