#ifndef CRHO_UPOLY_HPP
#define CRHO_UPOLY_HPP

// Dense univariate polynomial algorithms over an abstract field.
//
// A field context `F` supplies `value_type`, `zero()`, `one()`, `from_int(long)`,
// `add`, `sub`, `mul`, `neg`, `inv` and `is_zero`. Contexts may be stateful: the
// algebraic-number tower splits its defining polynomials while answering
// `is_zero`, which is why every algorithm takes the context by reference.
// Coefficient vectors are stored lowest degree first.

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace crho::upoly {

template <class F>
using Poly = std::vector<typename F::value_type>;

/// Drops leading coefficients the field reports as zero.
template <class F>
void trim(F& f, Poly<F>& p) {
    while (!p.empty() && f.is_zero(p.back())) p.pop_back();
}

template <class F>
int degree(const Poly<F>& p) {
    return static_cast<int>(p.size()) - 1;
}

template <class F>
Poly<F> add(F& f, const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r(std::max(a.size(), b.size()), f.zero());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = f.add(r[i], b[i]);
    trim(f, r);
    return r;
}

template <class F>
Poly<F> sub(F& f, const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r(std::max(a.size(), b.size()), f.zero());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = f.sub(r[i], b[i]);
    trim(f, r);
    return r;
}

template <class F>
Poly<F> mul(F& f, const Poly<F>& a, const Poly<F>& b) {
    if (a.empty() || b.empty()) return {};
    Poly<F> r(a.size() + b.size() - 1, f.zero());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
    trim(f, r);
    return r;
}

template <class F>
Poly<F> scale(F& f, const Poly<F>& a, const typename F::value_type& c) {
    Poly<F> r;
    r.reserve(a.size());
    for (const auto& x : a) r.push_back(f.mul(x, c));
    trim(f, r);
    return r;
}

template <class F>
Poly<F> derivative(F& f, const Poly<F>& a) {
    Poly<F> r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(f.mul(f.from_int(static_cast<long>(i)), a[i]));
    trim(f, r);
    return r;
}

/// Makes the leading coefficient one. The input must be trimmed and nonzero.
template <class F>
Poly<F> monic(F& f, const Poly<F>& a) {
    if (a.empty()) return a;
    auto li = f.inv(a.back());
    Poly<F> r = scale(f, a, li);
    r.back() = f.one();
    return r;
}

/// Euclidean division a = q*b + r with deg r < deg b. `b` must be trimmed and nonzero.
template <class F>
std::pair<Poly<F>, Poly<F>> divmod(F& f, Poly<F> a, const Poly<F>& b) {
    if (b.empty()) throw std::domain_error("polynomial division by zero");
    trim(f, a);
    if (a.size() < b.size()) return {Poly<F>{}, a};
    auto lb_inv = f.inv(b.back());
    Poly<F> q(a.size() - b.size() + 1, f.zero());
    for (int k = degree<F>(a); k >= degree<F>(b); --k) {
        if (static_cast<int>(a.size()) <= k) continue;
        auto c = f.mul(a[k], lb_inv);
        int shift = k - degree<F>(b);
        q[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = f.sub(a[shift + j], f.mul(c, b[j]));
        a.resize(k);  // leading term cancels by construction
        trim(f, a);
    }
    trim(f, q);
    return {q, a};
}

template <class F>
Poly<F> rem(F& f, const Poly<F>& a, const Poly<F>& b) {
    return divmod(f, a, b).second;
}

/// Monic gcd (empty when both inputs are zero).
template <class F>
Poly<F> gcd(F& f, Poly<F> a, Poly<F> b) {
    trim(f, a);
    trim(f, b);
    while (!b.empty()) {
        auto r = rem(f, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(f, a);
}

/// Extended Euclid: returns (g, s, t) with s*a + t*b = g, g monic.
template <class F>
struct ExtGcd {
    Poly<F> g, s, t;
};

template <class F>
ExtGcd<F> ext_gcd(F& f, Poly<F> a, Poly<F> b) {
    trim(f, a);
    trim(f, b);
    Poly<F> s0{f.one()}, s1{}, t0{}, t1{f.one()};
    while (!b.empty()) {
        auto [q, r] = divmod(f, a, b);
        auto s2 = sub(f, s0, mul(f, q, s1));
        auto t2 = sub(f, t0, mul(f, q, t1));
        a = std::move(b);
        b = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (a.empty()) return {a, s0, t0};
    auto li = f.inv(a.back());
    return {monic(f, a), scale(f, s0, li), scale(f, t0, li)};
}

/// Exact quotient of a by b (remainder discarded).
template <class F>
Poly<F> quo(F& f, const Poly<F>& a, const Poly<F>& b) {
    return divmod(f, a, b).first;
}

/// Yun's square-free decomposition: a = lc * prod_i f_i^{m_i}, f_i monic, square-free
/// and pairwise coprime. Returns (f_i, m_i) for nonconstant factors only.
template <class F>
std::vector<std::pair<Poly<F>, int>> squarefree_decomposition(F& f, Poly<F> a) {
    trim(f, a);
    std::vector<std::pair<Poly<F>, int>> out;
    if (a.size() <= 1) return out;
    a = monic(f, a);
    auto da = derivative(f, a);
    auto g = gcd(f, a, da);
    auto b = quo(f, a, g);
    auto c = quo(f, da, g);
    auto d = sub(f, c, derivative(f, b));
    int i = 1;
    while (b.size() > 1) {
        auto h = gcd(f, b, d);
        if (h.size() > 1) out.emplace_back(h, i);
        b = quo(f, b, h);
        c = quo(f, d, h);
        d = sub(f, c, derivative(f, b));
        ++i;
    }
    return out;
}

/// Horner evaluation.
template <class F>
typename F::value_type eval(F& f, const Poly<F>& a, const typename F::value_type& x) {
    auto acc = f.zero();
    for (std::size_t i = a.size(); i-- > 0;) acc = f.add(f.mul(acc, x), a[i]);
    return acc;
}

}  // namespace crho::upoly

#endif  // CRHO_UPOLY_HPP
