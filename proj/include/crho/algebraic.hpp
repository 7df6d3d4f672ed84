#ifndef CRHO_ALGEBRAIC_HPP
#define CRHO_ALGEBRAIC_HPP

// Algebraic numbers carried in a dynamic-evaluation field tower.

#include <algorithm>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crho/tower.hpp"

namespace crho {

class AlgebraicNumber {
public:
    AlgebraicNumber() : AlgebraicNumber(Rational(0)) {}
    AlgebraicNumber(const Rational& r) : t_(std::make_shared<FieldTower>()), v_(Elem::rational(r)) {}
    AlgebraicNumber(int r) : AlgebraicNumber(Rational(r)) {}
    AlgebraicNumber(std::shared_ptr<FieldTower> t, Elem v) : t_(std::move(t)), v_(std::move(v)) {}

    const std::shared_ptr<FieldTower>& tower() const { return t_; }
    const Elem& elem() const { return v_; }

    bool is_zero() const { return t_->is_zero(v_); }

    /// Certified enclosure narrower than `width`.
    CBox enclosure(const Rational& width = Rational(1, 1000000)) const { return t_->enclose_to(v_, width); }

    /// Exact rational value, if the number is rational.
    std::optional<Rational> to_rational() const;

    std::string to_string() const;

private:
    std::shared_ptr<FieldTower> t_;
    Elem v_;
};

enum class FieldOp { Add, Sub, Mul, Div };

namespace detail {

/// Brings x and y into one tower. A number whose element lives at level 0 can be
/// moved into any tower; otherwise the towers must coincide.
inline std::shared_ptr<FieldTower> common_tower(const AlgebraicNumber& x, const AlgebraicNumber& y) {
    if (x.tower() == y.tower()) return x.tower();
    if (y.elem().level == 0) return x.tower();
    if (x.elem().level == 0) return y.tower();
    throw Error(ErrorKind::DegenerateInput, "algebraic-numbers", "operands live in different towers");
}

inline Integer square_free_part(Integer n, Integer& root) {
    // n = root^2 * result, n > 0
    root = 1;
    for (unsigned long p = 2; p < 100000; ++p) {
        Integer pp = Integer(p) * Integer(p);
        if (pp > n) break;
        while (n % pp == 0) {
            n /= pp;
            root *= p;
        }
    }
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        Integer s;
        mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
        root *= s;
        n = 1;
    }
    return n;
}

inline std::string decimal(const Rational& r, int digits = 12) {
    mpf_class f(r.raw(), 256);
    char buf[128];
    gmp_snprintf(buf, sizeof buf, "%.*Fg", digits, f.get_mpf_t());
    return buf;
}

/// Rational of denominator at most L inside iv, if iv is narrower than 1/(2L^2).
inline std::optional<Rational> recognize(const Interval& iv, const Integer& L) {
    Rational x = iv.mid();
    Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    Rational rest = x;
    for (int guard = 0; guard < 4096; ++guard) {
        Integer a = rest.floor();
        Integer h2 = a * h1 + h0, k2 = a * k1 + k0;
        if (k2 > L) break;
        Rational c(h2, k2);
        if (iv.contains(c)) return c;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        Rational frac = rest - Rational(a);
        if (frac.is_zero()) break;
        rest = frac.inv();
    }
    return std::nullopt;
}

inline Elem eval_rational_poly(FieldTower& t, const UniPoly& p, const Elem& x) {
    Elem acc = Elem::zero(x.level);
    for (std::size_t i = p.coeffs().size(); i-- > 0;) acc = t.add(t.mul(acc, x), t.from_rational(p.coeffs()[i], x.level));
    return acc;
}

inline std::string sqrt_term(const Rational& coef, const Integer& m, bool imaginary) {
    std::string rad = m == 1 ? "" : "sqrt(" + m.get_str() + ")";
    std::string unit = imaginary ? (rad.empty() ? "i" : "i*" + rad) : rad;
    Integer num = coef.num(), den = coef.den();
    if (unit.empty()) return coef.to_string();
    std::string s;
    if (num != 1) s = num.get_str() + "*";
    s += unit;
    if (den != 1) s += "/" + den.get_str();
    return s;
}

}  // namespace detail

inline AlgebraicNumber field_op(const AlgebraicNumber& x, const AlgebraicNumber& y, FieldOp op) {
    auto t = detail::common_tower(x, y);
    const Elem& a = x.elem();
    const Elem& b = y.elem();
    switch (op) {
        case FieldOp::Add: return {t, t->add(a, b)};
        case FieldOp::Sub: return {t, t->sub(a, b)};
        case FieldOp::Mul: return {t, t->mul(a, b)};
        case FieldOp::Div: {
            if (t->is_zero(b)) throw Error(ErrorKind::DivisionByZero, "algebraic-numbers", "division by zero");
            int k = std::max(a.level, b.level);
            return {t, t->mul(a, t->inv(t->lift(b, k)))};
        }
    }
    return x;
}

inline AlgebraicNumber operator+(const AlgebraicNumber& x, const AlgebraicNumber& y) { return field_op(x, y, FieldOp::Add); }
inline AlgebraicNumber operator-(const AlgebraicNumber& x, const AlgebraicNumber& y) { return field_op(x, y, FieldOp::Sub); }
inline AlgebraicNumber operator*(const AlgebraicNumber& x, const AlgebraicNumber& y) { return field_op(x, y, FieldOp::Mul); }
inline AlgebraicNumber operator/(const AlgebraicNumber& x, const AlgebraicNumber& y) { return field_op(x, y, FieldOp::Div); }

/// Square-free polynomial over Q annihilating x (possibly a multiple of the true
/// minimal polynomial), made monic.
inline UniPoly minimal_polynomial(const AlgebraicNumber& x) {
    UniPoly m = x.tower()->minimal_polynomial(x.elem());
    UniPoly g = gcd(m, m.derivative());
    if (g.degree() > 0) m = divmod(m, g).first.monic();
    return m;
}

/// A root found by roots_in_tower: a value in its own (cloned) tower.
struct TowerRoot {
    std::shared_ptr<FieldTower> tower;
    Elem value;
    int multiplicity = 1;
    CBox box;  // enclosure used for ordering
};

/// All distinct roots of f (coefficients in the top level of t) with exact
/// multiplicities. Every root gets its own copy of the tower, extended by one level
/// when the root is neither in the current field nor rational.
inline std::vector<TowerRoot> roots_in_tower(FieldTower& t, TowerPoly f) {
    const int k = t.height();
    LevelField F = t.ctx(k);
    for (auto& c : f) c = t.lift(c, k);
    upoly::trim(F, f);
    if (f.empty()) throw Error(ErrorKind::DegenerateInput, "algebraic-numbers", "roots of the zero polynomial");
    std::vector<TowerRoot> out;
    const Rational order_width(1, Integer(1) << 40);
    for (auto& [g, mult] : upoly::squarefree_decomposition(F, f)) {
        if (g.size() == 2) {
            Elem v = t.neg(g[0]);
            auto nt = t.clone();
            out.push_back({nt, v, mult, nt->enclose_to(v, order_width)});
            continue;
        }
        UniPoly n = t.annihilator_of_roots(g);
        UniPoly sg = gcd(n, n.derivative());
        if (sg.degree() > 0) n = divmod(n, sg).first.monic();
        const std::size_t want = g.size() - 1;
        Isolation iso = isolate_roots(n);
        std::vector<CBox> cands;
        for (int round = 0;; ++round) {
            if (round >= refine_cap())
                throw Error(ErrorKind::PrecisionExhausted, "algebraic-numbers", "root selection exceeded the refinement cap");
            cands.clear();
            for (const auto& b : iso.boxes)
                if (t.enclose_poly(g, b).contains_zero()) cands.push_back(b);
            if (cands.size() == want) break;
            iso = isolate_roots(n, Rational(0), iso.bits + 64);
            t.refine_levels();
        }
        for (const auto& b : cands) {
            auto nt = t.clone();
            if (auto r = rational_root_in(n, b, iso.bits)) {
                Elem v = nt->from_rational(*r, k);
                out.push_back({nt, v, mult, CBox(*r)});
            } else {
                nt->push_level(g, n, b, iso.bits);
                out.push_back({nt, nt->generator(k + 1), mult, b});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const TowerRoot& a, const TowerRoot& b) { return box_less(a.box, b.box); });
    return out;
}

/// Distinct complex roots of a polynomial with algebraic coefficients (lowest degree
/// first, all in one tower) and their exact multiplicities.
inline std::vector<std::pair<AlgebraicNumber, int>> roots_with_multiplicity(const std::vector<AlgebraicNumber>& coeffs) {
    if (coeffs.empty()) throw Error(ErrorKind::DegenerateInput, "algebraic-numbers", "roots of the zero polynomial");
    std::shared_ptr<FieldTower> t = coeffs[0].tower();
    for (const auto& c : coeffs) t = detail::common_tower(AlgebraicNumber(t, Elem::zero(t->height())), c);
    TowerPoly f;
    for (const auto& c : coeffs) f.push_back(c.elem());
    auto work = t->clone();
    std::vector<std::pair<AlgebraicNumber, int>> out;
    for (auto& r : roots_in_tower(*work, f)) out.emplace_back(AlgebraicNumber(r.tower, r.value), r.multiplicity);
    return out;
}

inline std::vector<std::pair<AlgebraicNumber, int>> roots_with_multiplicity(const UniPoly& p) {
    std::vector<AlgebraicNumber> c;
    for (const auto& r : p.coeffs()) c.emplace_back(r);
    return roots_with_multiplicity(c);
}

/// Exact equality of algebraic numbers that may live in different towers.
inline bool certified_equal(const AlgebraicNumber& x, const AlgebraicNumber& y) {
    if (x.tower() == y.tower() || x.elem().level == 0 || y.elem().level == 0) return (x - y).is_zero();
    UniPoly g = gcd(minimal_polynomial(x), minimal_polynomial(y));
    if (g.degree() < 1) return false;
    if (!x.tower()->is_zero(detail::eval_rational_poly(*x.tower(), g, x.elem()))) return false;
    if (!y.tower()->is_zero(detail::eval_rational_poly(*y.tower(), g, y.elem()))) return false;
    if (g.degree() == 1) return true;
    Isolation iso = isolate_roots(g);
    Rational w = iso.boxes[0].width();
    for (int round = 0; round < refine_cap(); ++round) {
        CBox bx = x.enclosure(w), by = y.enclosure(w);
        int ix = -1, iy = -1, nx = 0, ny = 0;
        for (std::size_t i = 0; i < iso.boxes.size(); ++i) {
            if (iso.boxes[i].intersects(bx)) ix = static_cast<int>(i), ++nx;
            if (iso.boxes[i].intersects(by)) iy = static_cast<int>(i), ++ny;
        }
        if (nx == 1 && ny == 1) return ix == iy;
        w = w / Rational(1 << 16);
        iso = isolate_roots(g, w, iso.bits + 64);
    }
    throw Error(ErrorKind::PrecisionExhausted, "algebraic-numbers", "equality test exceeded the refinement cap");
}

inline std::optional<Rational> AlgebraicNumber::to_rational() const {
    if (const Rational* r = v_.as_rational()) return *r;
    UniPoly m = minimal_polynomial(*this);
    Integer L = integer_leading(m);
    CBox b = enclosure(Rational(Integer(1), Integer(4 * L * L)));
    if (!b.im.contains_zero()) return std::nullopt;
    auto c = detail::recognize(b.re, L);
    if (c && m.eval(*c).is_zero() && t_->is_zero(t_->sub(v_, t_->from_rational(*c, v_.level)))) return c;
    return std::nullopt;
}

/// Closed form for rationals and quadratic irrationals, else `root(poly; box)`.
inline std::string AlgebraicNumber::to_string() const {
    if (auto r = to_rational()) return r->to_string();
    UniPoly m = minimal_polynomial(*this);
    if (m.degree() <= 12) {
        Integer L = integer_leading(m);
        Isolation iso = isolate_roots(m);
        Rational need(Integer(1), Integer(8 * L * L * L * L + 8));
        for (int round = 0; round < 8; ++round) {
            CBox bx = enclosure(need / Rational(16));
            if (std::all_of(iso.boxes.begin(), iso.boxes.end(), [&](const CBox& b) { return b.width() < need; })) {
                for (const auto& by : iso.boxes) {
                    if (by.intersects(bx)) continue;
                    CBox s = bx + by, p = bx * by;
                    if (!s.im.contains_zero() || !p.im.contains_zero()) continue;
                    auto sr = detail::recognize(s.re, L), pr = detail::recognize(p.re, L);
                    if (!sr || !pr) continue;
                    UniPoly quad{*pr, -*sr, Rational(1)};
                    if (!divmod(m, quad).second.is_zero()) continue;
                    Elem q = detail::eval_rational_poly(*t_, quad, v_);
                    if (!t_->is_zero(q)) continue;
                    Rational half = *sr / Rational(2);
                    Rational disc = half * half - *pr;
                    bool imag = disc.sign() < 0;
                    Rational ad = disc.abs();
                    Integer root;
                    Integer sq = detail::square_free_part(ad.num() * ad.den(), root);
                    Rational coef(root, ad.den());
                    int sign = imag ? (bx.im.mid() > Rational(0) ? 1 : -1) : (bx.re.mid() > half ? 1 : -1);
                    std::string term = detail::sqrt_term(coef, sq, imag);
                    if (half.is_zero()) return (sign < 0 ? "-" : "") + term;
                    return half.to_string() + (sign < 0 ? " - " : " + ") + term;
                }
                break;
            }
            iso = isolate_roots(m, need, iso.bits + 64);
        }
    }
    CBox b = enclosure(Rational(1, 1000000000));
    BiPoly mp = integer_normalize(BiPoly::from_uni(m).swap_vars());
    return "root(" + mp.to_string("mu", "T") + "; [" + detail::decimal(b.re.lo) + ", " + detail::decimal(b.re.hi) + "] + i[" +
           detail::decimal(b.im.lo) + ", " + detail::decimal(b.im.hi) + "])";
}

inline std::ostream& operator<<(std::ostream& os, const AlgebraicNumber& x) { return os << x.to_string(); }

}  // namespace crho

#endif  // CRHO_ALGEBRAIC_HPP
