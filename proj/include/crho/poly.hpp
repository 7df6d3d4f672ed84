#ifndef CRHO_POLY_HPP
#define CRHO_POLY_HPP

// Dense polynomials in Q[mu] (UniPoly) and Q[mu][V] (BiPoly).

#include <algorithm>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "crho/rational.hpp"
#include "crho/upoly.hpp"

namespace crho {

/// Field context for the generic algorithms in upoly.hpp.
struct QField {
    using value_type = Rational;
    Rational zero() const { return Rational(0); }
    Rational one() const { return Rational(1); }
    Rational from_int(long n) const { return Rational(n); }
    Rational add(const Rational& a, const Rational& b) const { return a + b; }
    Rational sub(const Rational& a, const Rational& b) const { return a - b; }
    Rational mul(const Rational& a, const Rational& b) const { return a * b; }
    Rational neg(const Rational& a) const { return -a; }
    Rational inv(const Rational& a) const { return a.inv(); }
    bool is_zero(const Rational& a) const { return a.is_zero(); }
};

class UniPoly {
public:
    UniPoly() = default;
    UniPoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
    UniPoly(std::initializer_list<Rational> c) : c_(c) { trim(); }
    static UniPoly constant(const Rational& r) { return UniPoly(std::vector<Rational>{r}); }
    static UniPoly monomial(const Rational& r, int deg) {
        std::vector<Rational> c(deg + 1);
        c[deg] = r;
        return UniPoly(std::move(c));
    }

    const std::vector<Rational>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    Rational operator[](int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : Rational(0); }
    Rational lc() const { return c_.empty() ? Rational(0) : c_.back(); }

    /// Index of the lowest nonzero coefficient; -1 for zero.
    int order() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].is_zero()) return static_cast<int>(i);
        return -1;
    }

    Rational eval(const Rational& x) const {
        QField f;
        return upoly::eval(f, c_, x);
    }

    UniPoly derivative() const {
        QField f;
        return UniPoly(upoly::derivative(f, c_));
    }

    UniPoly monic() const {
        QField f;
        return UniPoly(upoly::monic(f, c_));
    }

    /// Shift by mu^k (k may be negative if the low coefficients vanish).
    UniPoly shift(int k) const {
        if (is_zero()) return {};
        std::vector<Rational> c;
        if (k >= 0) {
            c.assign(k, Rational(0));
            c.insert(c.end(), c_.begin(), c_.end());
        } else {
            c.assign(c_.begin() + (-k), c_.end());
        }
        return UniPoly(std::move(c));
    }

    UniPoly& operator+=(const UniPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    UniPoly& operator-=(const UniPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    UniPoly& operator*=(const Rational& r) {
        if (r.is_zero()) c_.clear();
        for (auto& x : c_) x *= r;
        return *this;
    }
    friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
    friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
    friend UniPoly operator-(UniPoly a) {
        for (auto& x : a.c_) x = -x;
        return a;
    }
    friend UniPoly operator*(UniPoly a, const Rational& r) { return a *= r; }
    friend UniPoly operator*(const Rational& r, UniPoly a) { return a *= r; }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        }
        return UniPoly(std::move(c));
    }
    UniPoly& operator*=(const UniPoly& o) { return *this = *this * o; }

    friend bool operator==(const UniPoly&, const UniPoly&) = default;

    /// Renders with the given variable name, highest degree first.
    std::string to_string(const std::string& var = "mu") const;

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Rational> c_;
};

inline std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
    QField f;
    auto [q, r] = upoly::divmod(f, a.coeffs(), b.coeffs());
    return {UniPoly(std::move(q)), UniPoly(std::move(r))};
}

/// Monic gcd in Q[mu]; gcd(0, 0) = 0.
inline UniPoly gcd(const UniPoly& a, const UniPoly& b) {
    QField f;
    return UniPoly(upoly::gcd(f, a.coeffs(), b.coeffs()));
}

inline UniPoly pow(const UniPoly& p, unsigned e) {
    UniPoly r = UniPoly::constant(1), b = p;
    while (e) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1u;
    }
    return r;
}

namespace detail {

inline void append_term(std::ostringstream& os, bool& first, const Rational& c, const std::string& mono) {
    Rational a = c.abs();
    if (first) {
        if (c.sign() < 0) os << "-";
    } else {
        os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    if (mono.empty()) {
        os << a;
    } else if (a.is_one()) {
        os << mono;
    } else {
        os << a << "*" << mono;
    }
}

inline std::string power(const std::string& var, int e) {
    if (e == 0) return "";
    if (e == 1) return var;
    return var + "^" + std::to_string(e);
}

}  // namespace detail

inline std::string UniPoly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i)
        if (!c_[i].is_zero()) detail::append_term(os, first, c_[i], detail::power(var, i));
    return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const UniPoly& p) { return os << p.to_string(); }

/// Polynomial in V with coefficients in Q[mu]; index = degree in V.
class BiPoly {
public:
    BiPoly() = default;
    BiPoly(std::vector<UniPoly> c) : c_(std::move(c)) { trim(); }
    static BiPoly from_uni(const UniPoly& p) { return BiPoly(std::vector<UniPoly>{p}); }
    static BiPoly constant(const Rational& r) { return from_uni(UniPoly::constant(r)); }
    /// r * mu^i * V^j
    static BiPoly monomial(const Rational& r, int i, int j) {
        std::vector<UniPoly> c(j + 1);
        c[j] = UniPoly::monomial(r, i);
        return BiPoly(std::move(c));
    }
    static BiPoly var_v() { return monomial(Rational(1), 0, 1); }
    static BiPoly var_mu() { return monomial(Rational(1), 1, 0); }

    const std::vector<UniPoly>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int deg_v() const { return static_cast<int>(c_.size()) - 1; }
    int deg_mu() const {
        int d = -1;
        for (const auto& p : c_) d = std::max(d, p.degree());
        return d;
    }
    UniPoly operator[](int j) const { return j >= 0 && j < static_cast<int>(c_.size()) ? c_[j] : UniPoly(); }
    Rational coeff(int i, int j) const { return (*this)[j][i]; }
    UniPoly lc() const { return c_.empty() ? UniPoly() : c_.back(); }
    /// Leading rational of the leading coefficient.
    Rational lead_rational() const { return lc().lc(); }

    BiPoly derivative_v() const {
        std::vector<UniPoly> c;
        for (std::size_t j = 1; j < c_.size(); ++j) c.push_back(c_[j] * Rational(static_cast<long>(j)));
        return BiPoly(std::move(c));
    }

    /// Substitutes mu = x, giving a polynomial in V.
    UniPoly eval_mu(const Rational& x) const {
        std::vector<Rational> c;
        for (const auto& p : c_) c.push_back(p.eval(x));
        return UniPoly(std::move(c));
    }

    /// Substitutes V = x, giving a polynomial in mu.
    UniPoly eval_v(const UniPoly& x) const {
        UniPoly acc;
        for (std::size_t j = c_.size(); j-- > 0;) acc = acc * x + c_[j];
        return acc;
    }

    Rational eval(const Rational& mu, const Rational& v) const { return eval_mu(mu).eval(v); }

    long double eval_ld(long double mu, long double v) const {
        long double acc = 0;
        for (std::size_t j = c_.size(); j-- > 0;) {
            long double cj = 0;
            const auto& cs = c_[j].coeffs();
            for (std::size_t i = cs.size(); i-- > 0;) cj = cj * mu + cs[i].to_long_double();
            acc = acc * v + cj;
        }
        return acc;
    }

    /// Exchanges the roles of mu and V.
    BiPoly swap_vars() const {
        int dm = deg_mu();
        std::vector<UniPoly> out;
        for (int i = 0; i <= dm; ++i) {
            std::vector<Rational> c;
            for (const auto& p : c_) c.push_back(p[i]);
            out.emplace_back(std::move(c));
        }
        return BiPoly(std::move(out));
    }

    /// Sum of |coefficients| as a long double.
    long double coeff_norm() const {
        long double s = 0;
        for (const auto& p : c_)
            for (const auto& r : p.coeffs()) s += std::fabs(r.to_long_double());
        return s;
    }

    BiPoly& operator+=(const BiPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    BiPoly& operator-=(const BiPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
    friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
    friend BiPoly operator-(BiPoly a) {
        for (auto& x : a.c_) x = -x;
        return a;
    }
    friend BiPoly operator*(const BiPoly& a, const UniPoly& r) {
        std::vector<UniPoly> c;
        for (const auto& p : a.c_) c.push_back(p * r);
        return BiPoly(std::move(c));
    }
    friend BiPoly operator*(const BiPoly& a, const Rational& r) { return a * UniPoly::constant(r); }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<UniPoly> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return BiPoly(std::move(c));
    }
    friend bool operator==(const BiPoly&, const BiPoly&) = default;

    std::string to_string(const std::string& mu = "mu", const std::string& v = "V") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int j = deg_v(); j >= 0; --j)
            for (int i = c_[j].degree(); i >= 0; --i) {
                Rational c = c_[j][i];
                if (c.is_zero()) continue;
                std::string m = detail::power(mu, i);
                std::string w = detail::power(v, j);
                std::string mono = m.empty() ? w : (w.empty() ? m : m + "*" + w);
                detail::append_term(os, first, c, mono);
            }
        return os.str();
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<UniPoly> c_;
};

inline std::ostream& operator<<(std::ostream& os, const BiPoly& p) { return os << p.to_string(); }

inline BiPoly pow(const BiPoly& p, unsigned e) {
    BiPoly r = BiPoly::constant(1), b = p;
    while (e) {
        if (e & 1u) r = r * b;
        b = b * b;
        e >>= 1u;
    }
    return r;
}

}  // namespace crho

#endif  // CRHO_POLY_HPP
