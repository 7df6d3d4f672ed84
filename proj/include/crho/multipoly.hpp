#ifndef CRHO_MULTIPOLY_HPP
#define CRHO_MULTIPOLY_HPP

// Sparse multivariate polynomials over Q with a fixed number of variables, and
// resultant elimination of one variable.

#include <algorithm>
#include <map>
#include <vector>

#include "crho/errors.hpp"
#include "crho/exact_arith.hpp"
#include "crho/poly.hpp"

namespace crho {

class MultiPoly {
public:
    using Monomial = std::vector<int>;

    MultiPoly() = default;
    explicit MultiPoly(int nvars) : n_(nvars) {}

    static MultiPoly constant(int nvars, const Rational& c) {
        MultiPoly p(nvars);
        if (!c.is_zero()) p.t_[Monomial(nvars, 0)] = c;
        return p;
    }
    static MultiPoly var(int nvars, int i, const Rational& c = Rational(1)) {
        MultiPoly p(nvars);
        Monomial m(nvars, 0);
        m[i] = 1;
        if (!c.is_zero()) p.t_[m] = c;
        return p;
    }

    int nvars() const { return n_; }
    bool is_zero() const { return t_.empty(); }
    std::size_t size() const { return t_.size(); }
    const std::map<Monomial, Rational>& terms() const { return t_; }

    int degree(int v) const {
        int d = t_.empty() ? -1 : 0;
        for (const auto& [m, c] : t_) d = std::max(d, m[v]);
        return d;
    }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && std::all_of(t_.begin()->first.begin(), t_.begin()->first.end(), [](int e) { return e == 0; })); }
    bool involves(int v) const { return degree(v) > 0; }

    /// Coefficients in variable v, lowest degree first.
    std::vector<MultiPoly> coeffs_in(int v) const {
        std::vector<MultiPoly> out(std::max(degree(v) + 1, 1), MultiPoly(n_));
        for (const auto& [m, c] : t_) {
            Monomial r = m;
            r[v] = 0;
            out[m[v]].t_[r] = c;
        }
        return out;
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        adopt(o);
        for (const auto& [m, c] : o.t_) add_term(m, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& o) {
        adopt(o);
        for (const auto& [m, c] : o.t_) add_term(m, -c);
        return *this;
    }
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r(std::max(a.n_, b.n_));
        for (const auto& [ma, ca] : a.t_)
            for (const auto& [mb, cb] : b.t_) {
                Monomial m(ma.size());
                for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
                r.add_term(m, ca * cb);
            }
        return r;
    }
    MultiPoly scaled(const Rational& s) const {
        MultiPoly r(n_);
        if (s.is_zero()) return r;
        for (const auto& [m, c] : t_) r.t_[m] = c * s;
        return r;
    }

    /// Exact quotient a / b; throws when b does not divide a.
    friend MultiPoly exact_quotient(MultiPoly a, const MultiPoly& b) {
        if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "sdo-path", "multivariate division by zero");
        MultiPoly q(a.n_);
        const auto& [lb, cb] = *b.t_.rbegin();
        while (!a.is_zero()) {
            const auto& [la, ca] = *a.t_.rbegin();
            Monomial m(la.size());
            for (std::size_t i = 0; i < m.size(); ++i) {
                m[i] = la[i] - lb[i];
                if (m[i] < 0) throw Error(ErrorKind::DegenerateInput, "sdo-path", "inexact multivariate division");
            }
            MultiPoly t(a.n_);
            t.t_[m] = ca / cb;
            q += t;
            a -= t * b;
        }
        return q;
    }

    /// Substitutes variable v by the polynomial s.
    MultiPoly substitute(int v, const MultiPoly& s) const {
        auto cs = coeffs_in(v);
        MultiPoly r(n_), pw = constant(n_, Rational(1));
        for (std::size_t k = 0; k < cs.size(); ++k) {
            if (!cs[k].is_zero()) r += cs[k] * pw;
            if (k + 1 < cs.size()) pw = pw * s;
        }
        return r;
    }

    /// Scales to coprime integer coefficients with positive leading coefficient.
    MultiPoly normalized() const {
        if (t_.empty()) return *this;
        Integer g = 0, l = 1;
        for (const auto& [m, c] : t_) {
            g = gcd(g, c.num());
            l = lcm(l, c.den());
        }
        Rational s(l, g);
        if (t_.rbegin()->second.sign() < 0) s = -s;
        return scaled(s);
    }

    /// Removes the largest power of variable v dividing the polynomial.
    MultiPoly without_power_of(int v) const {
        if (t_.empty()) return *this;
        int low = t_.begin()->first[v];
        for (const auto& [m, c] : t_) low = std::min(low, m[v]);
        if (low == 0) return *this;
        MultiPoly r(n_);
        for (const auto& [m, c] : t_) {
            Monomial k = m;
            k[v] -= low;
            r.t_[k] = c;
        }
        return r;
    }

    /// Converts a polynomial in variables mu (index 0) and V (index 1) only.
    BiPoly to_bipoly() const {
        BiPoly r;
        for (const auto& [m, c] : t_) {
            for (std::size_t i = 2; i < m.size(); ++i)
                if (m[i] != 0) throw Error(ErrorKind::DegenerateInput, "sdo-path", "polynomial still involves eliminated variables");
            r += BiPoly::monomial(c, m[0], m[1]);
        }
        return r;
    }

    bool operator==(const MultiPoly& o) const { return t_ == o.t_; }

private:
    void adopt(const MultiPoly& o) {
        if (n_ == 0) n_ = o.n_;
    }
    void add_term(const Monomial& m, const Rational& c) {
        auto it = t_.find(m);
        if (it == t_.end()) {
            if (!c.is_zero()) t_.emplace(m, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) t_.erase(it);
    }

    int n_ = 0;
    std::map<Monomial, Rational> t_;
};

/// Resultant of f and g with respect to variable v (up to sign).
inline MultiPoly resultant(const MultiPoly& f, const MultiPoly& g, int v) {
    const int df = f.degree(v), dg = g.degree(v);
    const int n = std::max(f.nvars(), g.nvars());
    if (df <= 0 || dg <= 0) throw Error(ErrorKind::DegenerateInput, "sdo-path", "resultant needs both polynomials to involve the variable");
    auto fc = f.coeffs_in(v), gc = g.coeffs_in(v);
    if (df == 1) {
        // a1^dg g(-a0/a1)
        MultiPoly r(n), a0 = MultiPoly(n) - fc[0], pa0 = MultiPoly::constant(n, Rational(1));
        std::vector<MultiPoly> pa1{MultiPoly::constant(n, Rational(1))};
        for (int k = 1; k <= dg; ++k) pa1.push_back(pa1.back() * fc[1]);
        for (int k = 0; k <= dg; ++k) {
            if (!gc[k].is_zero()) r += gc[k] * pa0 * pa1[dg - k];
            if (k < dg) pa0 = pa0 * a0;
        }
        return r;
    }
    auto m = sylvester_matrix(fc, gc);
    return bareiss_det(
        m, MultiPoly::constant(n, Rational(1)), [](const MultiPoly& x) { return x.is_zero(); },
        [](const MultiPoly& a, const MultiPoly& b) { return exact_quotient(a, b); });
}

}  // namespace crho

#endif  // CRHO_MULTIPOLY_HPP
