#ifndef CRHO_TOWER_HPP
#define CRHO_TOWER_HPP

// Field towers Q(a_1)(a_2)...(a_k) under dynamic evaluation.
//
// Level k adjoins a generator a_k through a monic defining polynomial m_k over
// level k-1 that is square-free but possibly reducible. When a zero test meets a
// nontrivial factor g of m_k, the tower keeps whichever of g and m_k/g vanishes at
// a_k, decided by certified interval evaluation at the generator's isolating box.
// Each generator also carries a square-free annihilator over Q whose roots the box
// isolates; numeric enclosures come from those boxes.

#include <memory>
#include <utility>
#include <vector>

#include "crho/errors.hpp"
#include "crho/exact_arith.hpp"
#include "crho/interval.hpp"
#include "crho/roots.hpp"
#include "crho/upoly.hpp"

namespace crho {

/// Element of level `level`: a rational at level 0, otherwise a polynomial in the
/// level's generator with coefficients from the level below (lowest degree first).
struct Elem {
    int level = 0;
    Rational q;
    std::vector<Elem> c;

    static Elem rational(const Rational& r) { return Elem{0, r, {}}; }
    static Elem zero(int level) { return Elem{level, Rational(0), {}}; }

    /// Zero by representation (not a semantic test).
    bool structurally_zero() const { return level == 0 ? q.is_zero() : c.empty(); }

    /// Rational value when the element is a constant, else nullptr.
    const Rational* as_rational() const {
        const Elem* e = this;
        while (e->level > 0) {
            if (e->c.empty()) return nullptr;
            if (e->c.size() > 1) return nullptr;
            e = &e->c[0];
        }
        return &e->q;
    }
};

class FieldTower;

/// Field context for upoly.hpp over level k of a tower.
struct LevelField {
    using value_type = Elem;
    FieldTower* t;
    int k;
    Elem zero() const { return Elem::zero(k); }
    Elem one() const;
    Elem from_int(long n) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem inv(const Elem& a) const;
    bool is_zero(const Elem& a) const;
};

using TowerPoly = std::vector<Elem>;

class FieldTower {
public:
    struct Level {
        TowerPoly def;   // monic over the level below
        UniPoly annih;   // square-free, annihilates the generator
        CBox box;        // isolates the generator among the roots of annih
        long bits = 64;  // precision of box
    };

    int height() const { return static_cast<int>(levels_.size()); }
    const Level& level(int k) const { return levels_.at(k - 1); }
    /// Bumped whenever a defining polynomial is replaced by a factor.
    long generation() const { return generation_; }

    std::shared_ptr<FieldTower> clone() const { return std::make_shared<FieldTower>(*this); }

    LevelField ctx(int k) { return LevelField{this, k}; }

    // ---- representation helpers ----

    Elem lift(Elem e, int k) const {
        while (e.level < k) {
            Elem up = Elem::zero(e.level + 1);
            if (!e.structurally_zero()) up.c.push_back(std::move(e));
            e = std::move(up);
        }
        return e;
    }

    Elem from_rational(const Rational& r, int k) const { return lift(Elem::rational(r), k); }

    /// The generator of level k as an element of level k.
    Elem generator(int k) const {
        Elem g = Elem::zero(k);
        g.c = {Elem::zero(k - 1), from_rational(Rational(1), k - 1)};
        return g;
    }

    static void trim_structural(Elem& e) {
        while (!e.c.empty() && e.c.back().structurally_zero()) e.c.pop_back();
    }

    // ---- arithmetic ----

    Elem add(const Elem& a0, const Elem& b0) {
        int k = std::max(a0.level, b0.level);
        Elem a = lift(a0, k), b = lift(b0, k);
        if (k == 0) return Elem::rational(a.q + b.q);
        if (a.c.size() < b.c.size()) std::swap(a, b);
        for (std::size_t i = 0; i < b.c.size(); ++i) a.c[i] = add(a.c[i], b.c[i]);
        trim_structural(a);
        return a;
    }

    Elem neg(const Elem& a) {
        if (a.level == 0) return Elem::rational(-a.q);
        Elem r = a;
        for (auto& x : r.c) x = neg(x);
        return r;
    }

    Elem sub(const Elem& a, const Elem& b) { return add(a, neg(b)); }

    Elem mul(const Elem& a0, const Elem& b0) {
        int k = std::max(a0.level, b0.level);
        if (k == 0) return Elem::rational(a0.q * b0.q);
        if (a0.structurally_zero() || b0.structurally_zero()) return Elem::zero(k);
        // scalar fast path: one operand from a lower level
        if (a0.level < k || b0.level < k) {
            const Elem& hi = a0.level == k ? a0 : b0;
            const Elem& lo = a0.level == k ? b0 : a0;
            Elem r = Elem::zero(k);
            for (const auto& x : hi.c) r.c.push_back(mul(x, lo));
            trim_structural(r);
            return r;
        }
        LevelField f = ctx(k - 1);
        TowerPoly p = upoly::mul(f, a0.c, b0.c);
        return reduce_poly(std::move(p), k);
    }

    Elem pow(Elem a, unsigned e) {
        Elem r = from_rational(Rational(1), a.level);
        while (e) {
            if (e & 1u) r = mul(r, a);
            a = mul(a, a);
            e >>= 1u;
        }
        return r;
    }

    /// Reduces a polynomial in the level-k generator modulo m_k.
    Elem reduce_poly(TowerPoly p, int k) {
        LevelField f = ctx(k - 1);
        upoly::trim(f, p);
        const TowerPoly& m = levels_[k - 1].def;
        if (p.size() >= m.size()) p = upoly::rem(f, p, m);
        Elem r = Elem::zero(k);
        r.c = std::move(p);
        trim_structural(r);
        return r;
    }

    /// Fully reduced representative (coefficients reduced recursively).
    Elem reduce(const Elem& e) {
        if (e.level == 0) return e;
        TowerPoly p;
        for (const auto& x : e.c) p.push_back(reduce(x));
        return reduce_poly(std::move(p), e.level);
    }

    Elem inv(const Elem& a) {
        if (a.level == 0) {
            if (a.q.is_zero()) throw Error(ErrorKind::DivisionByZero, "algebraic-numbers", "inverse of zero");
            return Elem::rational(a.q.inv());
        }
        const int k = a.level;
        for (;;) {
            LevelField f = ctx(k - 1);
            TowerPoly p = a.c;
            upoly::trim(f, p);
            if (p.empty()) throw Error(ErrorKind::DivisionByZero, "algebraic-numbers", "inverse of zero");
            if (p.size() == 1) return lift(inv(p[0]), k);
            auto eg = upoly::ext_gcd(f, p, levels_[k - 1].def);
            if (eg.g.size() == 1) {
                Elem r = Elem::zero(k);
                r.c = eg.s;
                return reduce(r);
            }
            // zero divisor: split m_k, then either a vanishes or it is now invertible
            if (split(k, eg.g)) throw Error(ErrorKind::DivisionByZero, "algebraic-numbers", "inverse of zero");
        }
    }

    /// Exact zero test (may split defining polynomials).
    bool is_zero(const Elem& a) {
        if (a.structurally_zero()) return true;
        if (a.level == 0) return false;
        if (!enclose(a).contains_zero()) return false;
        const int k = a.level;
        LevelField f = ctx(k - 1);
        TowerPoly p = a.c;
        upoly::trim(f, p);
        if (p.empty()) return true;
        if (p.size() == 1) return is_zero(p[0]);
        TowerPoly g = upoly::gcd(f, p, levels_[k - 1].def);
        if (g.size() <= 1) return false;
        if (g.size() == levels_[k - 1].def.size()) return true;
        return split(k, g);
    }

    /// Replaces m_k by g or m_k/g, whichever vanishes at the generator. Returns true
    /// when g was kept.
    bool split(int k, const TowerPoly& g) {
        LevelField f = ctx(k - 1);
        TowerPoly h = upoly::quo(f, levels_[k - 1].def, g);
        for (int round = 0; round < refine_cap(); ++round) {
            CBox a = levels_[k - 1].box;
            if (!enclose_poly(g, a).contains_zero()) {
                replace_def(k, upoly::monic(f, h));
                return false;
            }
            if (!enclose_poly(h, a).contains_zero()) {
                replace_def(k, upoly::monic(f, g));
                return true;
            }
            refine_levels(k);
        }
        throw Error(ErrorKind::PrecisionExhausted, "algebraic-numbers", "could not decide a split within the refinement cap");
    }

    // ---- enclosures ----

    long working_bits() const {
        long b = 64;
        for (const auto& l : levels_) b = std::max(b, l.bits);
        return b + 32;
    }

    CBox enclose(const Elem& e) const {
        if (e.level == 0) return CBox(e.q);
        const CBox& a = levels_[e.level - 1].box;
        long bits = working_bits();
        CBox acc(Rational(0));
        for (std::size_t i = e.c.size(); i-- > 0;) acc = (acc * a + enclose(e.c[i])).rounded(bits);
        return acc;
    }

    /// Enclosure of p(z) for z in box, p with coefficients in the tower.
    CBox enclose_poly(const TowerPoly& p, const CBox& z) const {
        long bits = working_bits();
        CBox acc(Rational(0));
        for (std::size_t i = p.size(); i-- > 0;) acc = (acc * z + enclose(p[i])).rounded(bits);
        return acc;
    }

    /// Refines every generator box up to level k (all levels when k < 0).
    void refine_levels(int k = -1) {
        if (k < 0) k = height();
        for (int i = 0; i < k; ++i) {
            auto& l = levels_[i];
            std::tie(l.box, l.bits) = refine_root(l.annih, l.box, l.bits);
        }
    }

    /// Enclosure narrower than `width`.
    CBox enclose_to(const Elem& e, const Rational& width) {
        for (int round = 0; round < refine_cap(); ++round) {
            CBox b = enclose(e);
            if (b.width() < width) return b;
            refine_levels(e.level);
        }
        throw Error(ErrorKind::PrecisionExhausted, "algebraic-numbers", "enclosure did not reach the requested width");
    }

    // ---- structure ----

    /// Adjoins a root of `def` (monic, square-free over the top level). The root is
    /// the one isolated by `box` among the roots of `annih`.
    void push_level(TowerPoly def, UniPoly annih, CBox box, long bits) {
        levels_.push_back(Level{std::move(def), std::move(annih), std::move(box), bits});
    }

    void pop_level() { levels_.pop_back(); }

    /// Square-free polynomial over Q annihilating e, by linear algebra on the powers
    /// of e in the power basis of the tower.
    UniPoly minimal_polynomial(const Elem& e) {
        for (;;) {
            long gen = generation_;
            UniPoly m = minpoly_attempt(e);
            if (gen == generation_) return m;
        }
    }

    /// Annihilator over Q for the roots of `def` (monic over the top level).
    UniPoly annihilator_of_roots(const TowerPoly& def) {
        for (;;) {
            long gen = generation_;
            levels_.push_back(Level{def, UniPoly(), CBox(), 64});
            UniPoly m;
            try {
                m = minpoly_attempt(generator(height()));
            } catch (...) {
                levels_.pop_back();
                throw;
            }
            levels_.pop_back();
            if (gen == generation_) return m;
        }
    }

private:
    void replace_def(int k, TowerPoly d) {
        levels_[k - 1].def = std::move(d);
        ++generation_;
    }

    // Rational coordinates of a reduced element in the monomial basis of levels 1..k.
    void flatten(const Elem& e, int k, std::vector<Rational>& out, std::size_t offset, std::size_t stride_unit) {
        if (k == 0) {
            out[offset] += e.q;
            return;
        }
        std::size_t lower = 1;
        for (int i = 0; i < k - 1; ++i) lower *= levels_[i].def.size() - 1;
        for (std::size_t i = 0; i < e.c.size(); ++i) flatten(e.c[i], k - 1, out, offset + i * lower * stride_unit, stride_unit);
    }

    UniPoly minpoly_attempt(const Elem& e0) {
        const int k = e0.level;
        if (k == 0) return UniPoly{-e0.q, Rational(1)};
        std::size_t dim = 1;
        for (int i = 0; i < k; ++i) dim *= levels_[i].def.size() - 1;
        Elem e = reduce(e0);
        // echelon rows: (vector, combination of powers)
        struct Row {
            std::vector<Rational> v, combo;
            std::size_t pivot;
        };
        std::vector<Row> rows;
        Elem power = from_rational(Rational(1), k);
        for (std::size_t j = 0; j <= dim; ++j) {
            std::vector<Rational> v(dim), combo(dim + 1);
            flatten(reduce(power), k, v, 0, 1);
            combo[j] = Rational(1);
            for (const auto& r : rows) {
                if (v[r.pivot].is_zero()) continue;
                Rational f = v[r.pivot];
                for (std::size_t i = 0; i < dim; ++i)
                    if (!r.v[i].is_zero()) v[i] -= f * r.v[i];
                for (std::size_t i = 0; i <= dim; ++i)
                    if (!r.combo[i].is_zero()) combo[i] -= f * r.combo[i];
            }
            std::size_t piv = dim;
            for (std::size_t i = 0; i < dim; ++i)
                if (!v[i].is_zero()) {
                    piv = i;
                    break;
                }
            if (piv == dim) {
                combo.resize(j + 1);
                UniPoly m(combo);
                return m.monic();
            }
            Rational s = v[piv].inv();
            for (auto& x : v) x *= s;
            for (auto& x : combo) x *= s;
            // keep rows fully reduced at the new pivot
            for (auto& r : rows) {
                if (r.v[piv].is_zero()) continue;
                Rational f = r.v[piv];
                for (std::size_t i = 0; i < dim; ++i) r.v[i] -= f * v[i];
                for (std::size_t i = 0; i <= dim; ++i) r.combo[i] -= f * combo[i];
            }
            rows.push_back(Row{std::move(v), std::move(combo), piv});
            power = mul(power, e);
        }
        throw Error(ErrorKind::DegenerateInput, "algebraic-numbers", "minimal polynomial search exceeded the tower degree");
    }

    std::vector<Level> levels_;
    long generation_ = 0;
};

inline Elem LevelField::one() const { return t->from_rational(Rational(1), k); }
inline Elem LevelField::from_int(long n) const { return t->from_rational(Rational(n), k); }
inline Elem LevelField::add(const Elem& a, const Elem& b) const { return t->lift(t->add(a, b), k); }
inline Elem LevelField::sub(const Elem& a, const Elem& b) const { return t->lift(t->sub(a, b), k); }
inline Elem LevelField::mul(const Elem& a, const Elem& b) const { return t->lift(t->mul(a, b), k); }
inline Elem LevelField::neg(const Elem& a) const { return t->lift(t->neg(a), k); }
inline Elem LevelField::inv(const Elem& a) const { return t->lift(t->inv(t->lift(a, k)), k); }
inline bool LevelField::is_zero(const Elem& a) const { return t->is_zero(a); }

}  // namespace crho

#endif  // CRHO_TOWER_HPP
